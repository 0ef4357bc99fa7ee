#pragma once

#include <string>

namespace qring {

/// CODATA 2018 values in SI units.
namespace constants {
inline constexpr double hbar = 1.054571817e-34;           // J s
inline constexpr double electron_mass = 9.1093837015e-31; // kg
inline constexpr double elementary_charge = 1.602176634e-19; // C
} // namespace constants

/// Device parameters in laboratory units: nm, meV, T, meV nm.
struct PhysicalConfig {
    double mass_ratio = 0.067;
    double g_factor = -0.44;
    double rho_i = 15.0;
    double rho_o = 30.0;
    double depth_V = 0.0;
    double field_B = 0.0;
    double rashba_aR = 0.0;

    void validate() const;
};

/// Dimensionless problem: lengths in rho_o, energies in hbar^2 / (2 M rho_o^2).
struct RingParams {
    double v = 400.0;
    double a = 1.0;
    double b = 1.0;
    double s = -0.00737;
    double r_i = 0.5;

    void validate() const;
};

/// Spin-up angular index m; the spin-down component carries m + 1.
struct QuantumNumber {
    int m = 0;

    bool nonnegative() const { return m >= 0; }
    int up_power() const { return m < 0 ? -m : m; }
    int down_power() const { return m + 1 < 0 ? -(m + 1) : m + 1; }
};

/// Size of one dimensionless unit for a given mass ratio and outer radius.
struct UnitScales {
    double energy_meV;     // e = 1
    double rashba_meV_nm;  // a = 1
    double field_T;        // b = 1
};

UnitScales unit_scales(double mass_ratio, double rho_o_nm);

RingParams to_dimensionless(const PhysicalConfig& pc);

/// Inverse of to_dimensionless for the given mass ratio and outer radius.
PhysicalConfig to_physical(const RingParams& rp, double mass_ratio, double rho_o_nm);

double energy_to_physical(double e, const PhysicalConfig& pc);

/// Physical counterpart of the default RingParams (v=400, a=1, b=1, r_i=0.5, rho_o=30 nm).
PhysicalConfig default_physical();

std::string describe(const RingParams& rp);

} // namespace qring
