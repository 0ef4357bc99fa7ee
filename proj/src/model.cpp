#include "qring/model.hpp"

#include <cmath>
#include <sstream>

#include "qring/error.hpp"

namespace qring {

namespace {

constexpr double nm = 1e-9;
constexpr double meV = 1e-3 * constants::elementary_charge;

void require(bool ok, const std::string& what)
{
    if (!ok) {
        throw ConfigError(what);
    }
}

} // namespace

void PhysicalConfig::validate() const
{
    require(mass_ratio > 0.0, "mass_ratio must be positive");
    require(rho_i > 0.0 && rho_i < rho_o, "need 0 < rho_i < rho_o");
    require(depth_V > 0.0, "depth_V must be positive");
    require(field_B > 0.0, "field_B must be positive");
    require(rashba_aR >= 0.0, "rashba_aR must be nonnegative");
    require(std::isfinite(g_factor), "g_factor must be finite");
}

void RingParams::validate() const
{
    require(v > 0.0 && std::isfinite(v), "v must be positive");
    require(a >= 0.0 && std::isfinite(a), "a must be nonnegative");
    require(b > 0.0 && std::isfinite(b), "b must be positive (b = 0 is not supported)");
    require(std::isfinite(s), "s must be finite");
    require(r_i > 0.0 && r_i < 1.0, "r_i must lie strictly between 0 and 1");
}

UnitScales unit_scales(double mass_ratio, double rho_o_nm)
{
    using namespace constants;
    const double mass = mass_ratio * electron_mass;
    const double rho = rho_o_nm * nm;
    const double energy = hbar * hbar / (2.0 * mass * rho * rho);
    return {energy / meV, energy * rho / (meV * nm), 2.0 * hbar / (elementary_charge * rho * rho)};
}

RingParams to_dimensionless(const PhysicalConfig& pc)
{
    pc.validate();
    const auto u = unit_scales(pc.mass_ratio, pc.rho_o);
    return {pc.depth_V / u.energy_meV, pc.rashba_aR / u.rashba_meV_nm, pc.field_B / u.field_T,
            pc.g_factor * pc.mass_ratio / 4.0, pc.rho_i / pc.rho_o};
}

PhysicalConfig to_physical(const RingParams& rp, double mass_ratio, double rho_o_nm)
{
    const auto u = unit_scales(mass_ratio, rho_o_nm);
    PhysicalConfig pc;
    pc.mass_ratio = mass_ratio;
    pc.g_factor = 4.0 * rp.s / mass_ratio;
    pc.rho_o = rho_o_nm;
    pc.rho_i = rp.r_i * rho_o_nm;
    pc.depth_V = rp.v * u.energy_meV;
    pc.field_B = rp.b * u.field_T;
    pc.rashba_aR = rp.a * u.rashba_meV_nm;
    return pc;
}

double energy_to_physical(double e, const PhysicalConfig& pc)
{
    return e * unit_scales(pc.mass_ratio, pc.rho_o).energy_meV;
}

PhysicalConfig default_physical()
{
    RingParams rp;
    rp.s = 0.067 * -0.44 / 4.0;
    return to_physical(rp, 0.067, 30.0);
}

std::string describe(const RingParams& rp)
{
    std::ostringstream os;
    os << "v=" << rp.v << " a=" << rp.a << " b=" << rp.b << " s=" << rp.s << " r_i=" << rp.r_i;
    return os.str();
}

} // namespace qring
