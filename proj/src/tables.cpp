#include "qring/tables.hpp"

#include "qring/error.hpp"

namespace qring::tables {

const Table& table(int id)
{
    if (id == 1) {
        return table1;
    }
    if (id == 2) {
        return table2;
    }
    throw ConfigError("table must be 1 or 2");
}

RingParams row_params(const Table& t, int row)
{
    RingParams p;
    p.v = 400.0;
    p.a = 1.0;
    p.b = 1.0;
    p.s = -0.00737;
    p.r_i = 0.5;
    if (t.id == 1) {
        p.r_i = t.rows[row];
    } else {
        p.v = t.rows[row];
    }
    return p;
}

double other_table_value(const Table& t, int row, int column)
{
    constexpr int shared_row1 = 2; // r_i = 0.5
    constexpr int shared_row2 = 3; // v = 400
    double mine = 0.0, other = 0.0;
    if (t.id == 1 && row == shared_row1) {
        mine = table1.values[row][column];
        other = table2.values[shared_row2][column];
    } else if (t.id == 2 && row == shared_row2) {
        mine = table2.values[row][column];
        other = table1.values[shared_row1][column];
    }
    return mine != other ? other : 0.0;
}

} // namespace qring::tables
