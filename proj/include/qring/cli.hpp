#pragma once

#include <atomic>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qring/config.hpp"
#include "qring/model.hpp"

namespace qring::cli {

enum class Axis { B, A, RI, V };

Axis parse_axis(const std::string& name);
const char* axis_name(Axis axis);

struct SweepSpec {
    Axis axis = Axis::B;
    double start = 0.1;
    double stop = 4.0;
    double step = 0.05;
    RingParams fixed; // the swept field is overwritten per point
    std::vector<int> m_list{-2, -1, 0, 1};
    int max_levels = 2;

    void validate() const;
    std::vector<double> points() const;
    RingParams at(double x) const;
};

struct SweepRow {
    double axis_value = 0.0;
    int m = 0;
    int level_index = -1; // -1 on error rows
    double e = 0.0;
    std::string error;
};

struct SweepResult {
    std::vector<SweepRow> rows; // sorted by (axis_value, m, level_index)
    bool truncated = false;

    bool any_error() const;
};

SweepResult run_sweep(const SweepSpec& spec, const SolverSettings& solver, unsigned jobs,
                      const std::atomic<bool>* cancel = nullptr);

/// Header axis_value,m,level_index,e[,e_meV][,error]; the error column is
/// present only when some point failed. A truncated sweep ends with a
/// "# truncated" line.
void write_sweep_csv(std::ostream& os, const SweepResult& result, std::optional<double> energy_unit_meV);

/// "-2,-1,0,1" or "-2:1".
std::vector<int> parse_m_list(const std::string& text);

/// Entry point; returns the process exit code (0 ok, 1 usage, 2 solver failure).
int run(int argc, char** argv);

} // namespace qring::cli
