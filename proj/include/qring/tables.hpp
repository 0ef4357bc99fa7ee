#pragma once

/// Published reference spectra: two levels for each m in {-2, -1, 0, 1} on a
/// five-row grid, at v = 400 (r_i varies) or r_i = 0.5 (v varies); a = b = 1.

#include <array>
#include <string>

#include "qring/model.hpp"

namespace qring::tables {

inline constexpr std::array<int, 4> table_m{-2, -1, 0, 1};

struct Table {
    int id;
    const char* axis; // "r_i" or "v"
    std::array<double, 5> rows;
    // values[row][2 * m_index + level]
    std::array<std::array<double, 8>, 5> values;
};

inline constexpr Table table1{
    1,
    "r_i",
    {0.1, 0.3, 0.5, 0.7, 0.9},
    {{{11.1546, 20.5634, 8.40784, 11.6889, 8.07216, 16.0687, 14.7685, 29.0068},
      {15.2333, 22.0607, 14.8695, 15.6909, 14.4308, 20.1349, 18.7835, 30.5326},
      {26.6594, 31.1076, 27.0008, 27.2145, 26.6594, 31.5576, 30.1207, 39.6641},
      {60.0830, 62.9589, 60.2745, 61.0963, 60.4248, 64.9463, 63.4123, 71.6304},
      {217.766, 219.587, 217.804, 219.066, 218.264, 222.606, 220.965, 228.388}}}};

inline constexpr Table table2{
    2,
    "v",
    {25, 50, 100, 400, 1000},
    {{{11.1356, 15.5883, 11.0065, 11.6889, 10.4833, 15.9651, 14.5421, 20.6312},
      {15.0121, 19.6818, 15.2366, 15.3623, 14.7204, 19.8905, 18.4485, 28.2691},
      {19.1740, 23.7577, 19.4880, 19.6275, 19.0631, 24.0567, 22.6185, 32.3247},
      {26.6724, 31.1076, 27.0008, 27.2145, 26.6594, 31.5576, 30.1207, 39.6634},
      {30.4209, 34.8152, 30.7516, 30.9818, 30.4279, 35.3066, 33.8699, 43.3697}}}};

const Table& table(int id);

/// Parameters of one row: a = b = 1, s = -0.00737, plus the row's r_i or v.
RingParams row_params(const Table& t, int row);

/// The r_i = 0.5, v = 400 row appears in both tables. Returns the other
/// table's value for the same cell if the two printed values differ, else 0.
double other_table_value(const Table& t, int row, int column);

} // namespace qring::tables
