#include <doctest.h>

#include <cmath>

#include "qring/error.hpp"
#include "qring/model.hpp"

using namespace qring;

namespace {

double rel(double got, double want) { return std::abs(got - want) / std::abs(want); }

} // namespace

TEST_SUITE("model")
{
    TEST_CASE("unit scales from the defining formulas")
    {
        const double hbar = 1.054571817e-34, me = 9.1093837015e-31, q = 1.602176634e-19;
        const double mass = 0.067 * me, rho = 30e-9;
        const auto u = unit_scales(0.067, 30.0);
        CHECK(rel(u.energy_meV, hbar * hbar / (2 * mass * rho * rho) / q * 1e3) < 1e-13);
        CHECK(rel(u.rashba_meV_nm, hbar * hbar / (2 * mass * rho) / q * 1e3 * 1e9) < 1e-13);
        CHECK(rel(u.field_T, 2 * hbar / (q * rho * rho)) < 1e-13);
    }

    TEST_CASE("Zeeman factor")
    {
        PhysicalConfig pc = default_physical();
        const auto rp = to_dimensionless(pc);
        CHECK(std::abs(rp.s - (-0.00737)) < 5e-8);
        CHECK(rel(rp.r_i, 0.5) < 1e-15);
    }

    TEST_CASE("default physical config maps to the default ring")
    {
        const auto rp = to_dimensionless(default_physical());
        const RingParams d;
        CHECK(rel(rp.v, d.v) < 1e-12);
        CHECK(rel(rp.a, d.a) < 1e-12);
        CHECK(rel(rp.b, d.b) < 1e-12);
    }

    TEST_CASE("round trip")
    {
        PhysicalConfig pc;
        pc.mass_ratio = 0.041;
        pc.g_factor = 1.7;
        pc.rho_i = 7.5;
        pc.rho_o = 42.0;
        pc.depth_V = 118.0;
        pc.field_B = 3.3;
        pc.rashba_aR = 11.0;
        const auto back = to_physical(to_dimensionless(pc), pc.mass_ratio, pc.rho_o);
        CHECK(rel(back.g_factor, pc.g_factor) < 1e-12);
        CHECK(rel(back.rho_i, pc.rho_i) < 1e-12);
        CHECK(rel(back.depth_V, pc.depth_V) < 1e-12);
        CHECK(rel(back.field_B, pc.field_B) < 1e-12);
        CHECK(rel(back.rashba_aR, pc.rashba_aR) < 1e-12);
    }

    TEST_CASE("energy conversion is linear")
    {
        const auto pc = default_physical();
        CHECK(energy_to_physical(0.0, pc) == 0.0);
        const double one = energy_to_physical(1.0, pc);
        CHECK(rel(energy_to_physical(400.0, pc), 400.0 * one) < 1e-15);
        CHECK(rel(energy_to_physical(-2.5, pc), -2.5 * one) < 1e-15);
    }

    TEST_CASE("validation")
    {
        RingParams p;
        CHECK_NOTHROW(p.validate());
        p.b = 0.0;
        CHECK_THROWS_AS(p.validate(), ConfigError);
        p = {};
        p.r_i = 1.0;
        CHECK_THROWS_AS(p.validate(), ConfigError);
        p = {};
        p.a = -0.1;
        CHECK_THROWS_AS(p.validate(), ConfigError);
        p = {};
        p.v = 0.0;
        CHECK_THROWS_AS(p.validate(), ConfigError);

        PhysicalConfig pc = default_physical();
        CHECK_NOTHROW(pc.validate());
        pc.rho_i = pc.rho_o;
        CHECK_THROWS_AS(pc.validate(), ConfigError);
        pc = default_physical();
        pc.mass_ratio = 0.0;
        CHECK_THROWS_AS(pc.validate(), ConfigError);
    }

    TEST_CASE("angular powers")
    {
        CHECK(QuantumNumber{0}.up_power() == 0);
        CHECK(QuantumNumber{0}.down_power() == 1);
        CHECK(QuantumNumber{-1}.up_power() == 1);
        CHECK(QuantumNumber{-1}.down_power() == 0);
        CHECK(QuantumNumber{-3}.down_power() == 2);
        CHECK(QuantumNumber{2}.nonnegative());
        CHECK_FALSE(QuantumNumber{-1}.nonnegative());
    }
}
