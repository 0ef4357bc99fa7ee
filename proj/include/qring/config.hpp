#pragma once

/// \file config.hpp
///
/// INI run configuration:
///
///     [physical]        ; or [dimensionless], not both
///     mass_ratio = 0.067
///     g_factor = -0.44
///     rho_i = 15        ; nm
///     rho_o = 30        ; nm
///     depth_V = 252.7   ; meV
///     field_B = 1.46    ; T
///     rashba_aR = 18.96 ; meV nm
///
///     [dimensionless]
///     v = 400
///     a = 1
///     b = 1
///     s = -0.00737
///     r_i = 0.5
///
///     [solver]
///     de = 0.05
///     window = 0:40
///     levels = 2
///     jobs = 4
///
/// Missing keys fall back to the defaults of the respective struct.

#include <optional>
#include <string>

#include "qring/model.hpp"

namespace qring {

struct SolverSettings {
    double de = 0.05;
    double e_lo = 0.0;
    double e_hi = -1.0; // negative: up to v
    int levels = 0;     // 0: every level in the window
    int jobs = 0;       // 0: hardware concurrency
};

struct RunConfig {
    RingParams params;
    std::optional<PhysicalConfig> physical; // set iff a [physical] block was given
    SolverSettings solver;
};

RunConfig load_config(const std::string& path);

/// "LO:HI" -> (LO, HI); throws ConfigError.
std::pair<double, double> parse_window(const std::string& text);

} // namespace qring
