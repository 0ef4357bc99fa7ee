#include <doctest.h>

#include <random>

#include "qring/radial.hpp"
#include "radial_ode.hpp"

using namespace qring;
using namespace qring::radial;
using qring::testing::Spinor;

namespace {

RingParams ring() { return {}; } // v=400, a=1, b=1, s=-0.00737, r_i=0.5

Spinor as_spinor(QuantumNumber q, const RingParams& p, double r, const BasisColumn& c)
{
    return qring::testing::spinor_from_basis(q, p, r, c.f, c.df, c.g, c.dg);
}

enum class Member { R1Plus, R1Minus, R21Plus, R21Minus, R22Plus, R22Minus, R3Plus, R3Minus };

BasisColumn member(Member which, QuantumNumber q, double e, const RingParams& p, double r)
{
    switch (which) {
    case Member::R1Plus:
        return region1_basis(q, e, p, r).plus;
    case Member::R1Minus:
        return region1_basis(q, e, p, r).minus;
    case Member::R21Plus:
        return region2_basis(q, e, p, r).first.plus;
    case Member::R21Minus:
        return region2_basis(q, e, p, r).first.minus;
    case Member::R22Plus:
        return region2_basis(q, e, p, r).second.plus;
    case Member::R22Minus:
        return region2_basis(q, e, p, r).second.minus;
    case Member::R3Plus:
        return region3_basis(q, e, p, r).plus;
    case Member::R3Minus:
        return region3_basis(q, e, p, r).minus;
    }
    return {};
}

} // namespace

TEST_SUITE("radial")
{
    TEST_CASE("exponents collapse when a = 0 and s = 1/2")
    {
        RingParams p;
        p.a = 0.0;
        p.s = 0.5;
        const auto ex = exponents(4.0, p);
        CHECK(ex.discriminant == 0.0);
        CHECK(ex.k_plus == cplx(1.0));
        CHECK(ex.k_minus == cplx(1.0));
    }

    TEST_CASE("outer exponents at a bound-state energy form a conjugate pair")
    {
        const auto p = ring();
        const double eps = 26.6594 - 400.0;
        const auto ex = exponents(eps, p);
        const double disc = (eps + 0.25) + 16.0 * 0.50737 * 0.50737;
        CHECK(ex.regime == Regime::ConjugatePair);
        CHECK(std::abs(ex.discriminant - disc) < 1e-12);
        CHECK(std::abs(ex.k_plus.real() - (eps + 0.5) / 4.0) < 1e-13);
        CHECK(std::abs(ex.k_plus.imag() - std::sqrt(-disc) / 4.0) < 1e-13);
        CHECK(ex.k_minus == std::conj(ex.k_plus));
        // both roots solve (4bk - eps - a^2/2)^2 = disc
        for (cplx k : {ex.k_plus, ex.k_minus}) {
            const cplx t = 4.0 * k - eps - 0.5;
            CHECK(std::abs(t * t - disc) < 1e-10 * std::abs(disc));
        }
    }

    TEST_CASE("ring exponents are real for positive energy")
    {
        const auto p = ring();
        for (double e : {0.1, 26.6, 230.0}) {
            CHECK(exponents(e, p).regime == Regime::RealPair);
        }
    }

    TEST_CASE("Vieta sum")
    {
        std::mt19937_64 rng(3);
        std::uniform_real_distribution<double> eps(-500.0, 100.0), a(0.0, 3.0), b(0.05, 5.0), s(-0.5, 1.0);
        for (int i = 0; i < 200; ++i) {
            RingParams p;
            p.a = a(rng);
            p.b = b(rng);
            p.s = s(rng);
            const double e = eps(rng);
            const auto ex = exponents(e, p);
            const cplx sum = ex.k_plus + ex.k_minus;
            CHECK(std::abs(sum - (e + 0.5 * p.a * p.a) / (2.0 * p.b)) < 1e-12 * (1.0 + std::abs(sum)));
        }
    }

    TEST_CASE("first-kind columns start at one")
    {
        const auto p = ring();
        for (int m : {-2, -1, 0, 1}) {
            const auto b1 = region1_basis({m}, 26.6594, p, 1e-9);
            CHECK(std::abs(b1.plus.f - 1.0) < 1e-12);
            CHECK(std::abs(b1.minus.f - 1.0) < 1e-12);
            const auto b2 = region2_basis({m}, 26.6594, p, 1e-9);
            CHECK(std::abs(b2.first.plus.f - 1.0) < 1e-12);
        }
    }

    TEST_CASE("conjugate pairs are conjugate")
    {
        const auto p = ring();
        for (int m : {-2, 0}) {
            for (double r : {0.2, 0.45}) {
                const auto b1 = region1_basis({m}, 26.6594, p, r);
                CHECK(b1.minus.g == std::conj(b1.plus.g));
                CHECK(b1.minus.f == std::conj(b1.plus.f));
            }
            const auto b3 = region3_basis({m}, 26.6594, p, 1.5);
            CHECK(b3.minus.f == std::conj(b3.plus.f));
            CHECK(b3.minus.dg == std::conj(b3.plus.dg));
        }
    }

    TEST_CASE("every basis member solves the radial equations")
    {
        std::mt19937_64 rng(11);
        const auto p = ring();
        struct Setting {
            Member which;
            double lo, hi, v_c;
        };
        const Setting settings[] = {
            {Member::R1Plus, 0.02, p.r_i, p.v},  {Member::R1Minus, 0.02, p.r_i, p.v},
            {Member::R21Plus, p.r_i, 1.0, 0.0},  {Member::R21Minus, p.r_i, 1.0, 0.0},
            {Member::R22Plus, p.r_i, 1.0, 0.0},  {Member::R22Minus, p.r_i, 1.0, 0.0},
            {Member::R3Plus, 1.0, 3.0, p.v},     {Member::R3Minus, 1.0, 3.0, p.v},
        };
        // 26.66 and 31.56 are bound states; 397 puts the outer pair on the real axis
        for (double e : {26.6594, 31.5576, 397.0}) {
            for (int m : {-2, -1, 0, 1, 2}) {
                for (const auto& s : settings) {
                    std::uniform_real_distribution<double> radius(s.lo, s.hi);
                    double worst = 0.0;
                    for (int i = 0; i < 20; ++i) {
                        const double r = radius(rng);
                        worst = std::max(worst, qring::testing::ode_residual({m}, p, e, s.v_c, r, [&](double x) {
                                             return as_spinor({m}, p, x, member(s.which, {m}, e, p, x));
                                         }));
                    }
                    CAPTURE(e);
                    CAPTURE(m);
                    CAPTURE(static_cast<int>(s.which));
                    CHECK(worst < 1e-6);
                }
            }
        }
    }

    TEST_CASE("real and imaginary parts of a conjugate-pair column are solutions")
    {
        const auto p = ring();
        const QuantumNumber q{-1};
        const double e = 27.0008;
        for (bool imag : {false, true}) {
            auto part = [&](double x) {
                auto s = as_spinor(q, p, x, region1_basis(q, e, p, x).plus);
                auto pick = [&](cplx z) { return cplx(imag ? z.imag() : z.real(), 0.0); };
                return Spinor{pick(s.u), pick(s.du), pick(s.w), pick(s.dw)};
            };
            CHECK(qring::testing::ode_residual(q, p, e, p.v, 0.33, part) < 1e-6);
        }
    }

    TEST_CASE("region 1 against integration from the origin")
    {
        // m = 0: u = 1 + c2 r^2, w = d r near the origin
        const auto p = ring();
        const QuantumNumber q{0};
        const double e = 26.6594, eps = e - p.v;
        const auto at0 = region1_basis(q, e, p, 1e-12).plus;
        const cplx d = p.a / 2.0 * at0.g; // c sqrt(b) g(0)
        const cplx c2 = (-(eps - 4.0 * p.s * p.b) + 2.0 * p.a * d) / 4.0;
        const double r0 = 1e-4;
        const Spinor start{1.0 + c2 * r0 * r0, 2.0 * c2 * r0, d * r0, d};
        const Spinor got = qring::testing::integrate_spinor(q, p, e, p.v, start, r0, 0.3);
        const Spinor want = as_spinor(q, p, 0.3, region1_basis(q, e, p, 0.3).plus);
        CHECK(qring::testing::spinor_distance(got, want) < 1e-6);
    }

    TEST_CASE("region 2 against integration across the ring")
    {
        const auto p = ring();
        for (int m : {-1, 0}) {
            const QuantumNumber q{m};
            const double e = 26.6594;
            for (bool second : {false, true}) {
                auto col = [&](double r) {
                    const auto b = region2_basis(q, e, p, r);
                    return as_spinor(q, p, r, second ? b.second.plus : b.first.plus);
                };
                const Spinor got = qring::testing::integrate_spinor(q, p, e, 0.0, col(p.r_i), p.r_i, 0.7);
                CAPTURE(m);
                CAPTURE(second);
                CHECK(qring::testing::spinor_distance(got, col(0.7)) < 1e-6);
            }
        }
    }

    TEST_CASE("region 3 against inward integration of decaying data")
    {
        const auto p = ring();
        for (int m : {-2, 0, 1}) {
            const QuantumNumber q{m};
            const double e = 26.6594;
            auto col = [&](double r) { return as_spinor(q, p, r, region3_basis(q, e, p, r).plus); };
            const Spinor got = qring::testing::integrate_spinor(q, p, e, p.v, col(2.5), 2.5, 1.5);
            CAPTURE(m);
            CHECK(qring::testing::spinor_distance(got, col(1.5)) < 1e-6);
        }
    }

    TEST_CASE("regular at the origin, decaying outside")
    {
        const auto p = ring();
        for (int m : {-2, -1, 0, 1}) {
            const QuantumNumber q{m};
            const auto b = region1_basis(q, 26.6594, p, 1e-6).plus;
            const auto uw = assemble_uw(q, p, b.f, p.a / 2.0 * b.g, 1e-6);
            CHECK(std::isfinite(std::abs(uw.u)));
            CHECK(std::isfinite(std::abs(uw.w)));
            if (q.up_power() >= 1) {
                CHECK(std::abs(uw.u) < 1e-5);
            }
            if (q.down_power() >= 1) {
                CHECK(std::abs(uw.w) < 1e-5);
            }
            double previous = std::numeric_limits<double>::infinity();
            for (double r : {1.5, 2.0, 3.0, 4.0}) {
                const auto c = region3_basis(q, 26.6594, p, r).plus;
                const auto o = assemble_uw(q, p, c.f, p.a / 2.0 * c.g, r);
                const double size = std::abs(o.u) + std::abs(o.w);
                CHECK(size < previous);
                previous = size;
            }
            CHECK(previous < 1e-20);
        }
    }

    TEST_CASE("assemble_uw prefactors")
    {
        RingParams p;
        const auto uw = assemble_uw({0}, p, 1.0, 0.0, 1.0);
        CHECK(std::abs(uw.u - std::exp(-0.5)) < 1e-15);
        CHECK(uw.w == cplx(0.0));
        const auto m1 = assemble_uw({-1}, p, 1.0, 1.0, 0.5);
        CHECK(std::abs(m1.u - 0.5 * std::exp(-0.125)) < 1e-15); // |m| = 1
        CHECK(std::abs(m1.w - std::exp(-0.125)) < 1e-15);       // |m+1| = 0
    }

    TEST_CASE("vanishing denominator is reported")
    {
        const auto p = ring();
        // D- = 0 at e = -4b(s - 1/2) in the ring
        const double e = -4.0 * p.b * (p.s - 0.5);
        CHECK_THROWS_AS(region2_basis({0}, e, p, 0.7), DegenerateDenominator);
        CHECK_NOTHROW(region2_basis({0}, e + 1e-6, p, 0.7));
    }

    TEST_CASE("decoupled spin columns solve their own equations")
    {
        RingParams p;
        p.a = 0.0;
        std::mt19937_64 rng(5);
        for (int m : {-2, -1, 0, 1}) {
            const QuantumNumber q{m};
            for (Spin spin : {Spin::Up, Spin::Down}) {
                const double e = 23.4;
                auto spinor = [&](const SpinColumn& c, double r) {
                    RingParams pa = p;
                    pa.a = 2.0 * std::sqrt(p.b); // makes the g factor 1 for assembly only
                    auto s = spin == Spin::Up
                                 ? qring::testing::spinor_from_basis(q, pa, r, c.f, c.df, 0.0, 0.0)
                                 : qring::testing::spinor_from_basis(q, pa, r, 0.0, 0.0, c.f, c.df);
                    return s;
                };
                std::uniform_real_distribution<double> r1(0.05, p.r_i), r2(p.r_i, 1.0), r3(1.0, 3.0);
                for (int i = 0; i < 20; ++i) {
                    double x = r1(rng);
                    CHECK(qring::testing::ode_residual(q, p, e, p.v, x, [&](double r) {
                              return spinor(decoupled_region1(q, spin, e, p, r), r);
                          }) < 1e-6);
                    x = r2(rng);
                    for (bool second : {false, true}) {
                        CHECK(qring::testing::ode_residual(q, p, e, 0.0, x, [&](double r) {
                                  return spinor(decoupled_region2(q, spin, e, p, r, second), r);
                              }) < 1e-6);
                    }
                    x = r3(rng);
                    CHECK(qring::testing::ode_residual(q, p, e, p.v, x, [&](double r) {
                              return spinor(decoupled_region3(q, spin, e, p, r), r);
                          }) < 1e-6);
                }
            }
        }
    }

    TEST_CASE("initial cutoff")
    {
        const auto p = ring();
        CHECK(initial_cutoff(26.0, p) == doctest::Approx(1.5));
        CHECK(initial_cutoff(399.0, p) == doctest::Approx(6.0));
        CHECK(initial_cutoff(500.0, p) == 6.0);
    }
}
