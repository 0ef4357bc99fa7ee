#include "qring/radial.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

namespace qring::radial {

namespace sf = specfun;

namespace {

double half_offset(const RingParams& p) { return p.s - 0.5; }

cplx checked_denominator(cplx k, double eps, const RingParams& p)
{
    const cplx d = denominator(k, eps, p);
    if (std::abs(d) < degenerate_denominator_tol * std::max(1.0, std::abs(k))) {
        std::ostringstream os;
        os << "basis denominator vanishes (k = " << k << ", eps = " << eps << ")";
        throw DegenerateDenominator(os.str());
    }
    return d;
}

BasisColumn first_kind(QuantumNumber q, cplx k, double eps, const RingParams& p, double r)
{
    const double xi = p.b * r * r;
    const double dxi = 2.0 * p.b * r;
    const cplx d = checked_denominator(k, eps, p);
    BasisColumn c;
    if (q.nonnegative()) {
        const double beta = q.m + 1.0;
        const cplx alpha = beta - k;
        c.f = sf::kummer_m({alpha, beta, xi});
        c.df = sf::kummer_m_dxi({alpha, beta, xi}) * dxi;
        const cplx pre = k / beta / d;
        c.g = pre * sf::kummer_m({alpha, beta + 1.0, xi});
        c.dg = pre * sf::kummer_m_dxi({alpha, beta + 1.0, xi}) * dxi;
    } else {
        const double beta = 1.0 - q.m;
        const cplx alpha = 1.0 - k;
        c.f = sf::kummer_m({alpha, beta, xi});
        c.df = sf::kummer_m_dxi({alpha, beta, xi}) * dxi;
        const cplx pre = static_cast<double>(q.m) / d;
        c.g = pre * sf::kummer_m({alpha - 1.0, beta - 1.0, xi});
        c.dg = pre * (alpha - 1.0) / (beta - 1.0) * c.f * dxi;
    }
    return c;
}

BasisColumn second_kind(QuantumNumber q, cplx k, double eps, const RingParams& p, double r,
                        sf::TricomiScale (*choose)(cplx))
{
    const double xi = p.b * r * r;
    const double dxi = 2.0 * p.b * r;
    const cplx d = checked_denominator(k, eps, p);
    BasisColumn c;
    if (q.nonnegative()) {
        const int n = q.m + 1;
        const cplx alpha = static_cast<double>(n) - k;
        const auto scale = choose(alpha);
        const cplx dfac = scale == sf::TricomiScale::Plain ? alpha : cplx(1.0);
        const auto s = sf::tricomi_set(alpha, n, xi, scale);
        c.f = s.base;
        c.df = -dfac * s.raised * dxi;
        c.g = s.beta_up / d;
        c.dg = -dfac * s.raised_beta_up / d * dxi;
    } else {
        // g uses S(alpha-1, n-1) = -[(n-1-xi) S(alpha, n) + xi dS/dxi]
        const int n = 1 - q.m;
        const cplx alpha = 1.0 - k;
        const auto scale = choose(alpha);
        const cplx dfac = scale == sf::TricomiScale::Plain ? alpha : cplx(1.0);
        const auto s = sf::tricomi_set(alpha, n, xi, scale);
        const cplx ds = -dfac * s.raised;
        c.f = s.base;
        c.df = ds * dxi;
        c.g = -((n - 1.0 - xi) * s.base + xi * ds) / d;
        c.dg = -(alpha - 1.0) * s.base / d * dxi;
    }
    return c;
}

BasisEval pair(const Exponents& ex, auto&& build)
{
    BasisEval out;
    out.plus = build(ex.k_plus);
    if (ex.regime == Regime::ConjugatePair) {
        out.minus = {std::conj(out.plus.f), std::conj(out.plus.df), std::conj(out.plus.g), std::conj(out.plus.dg)};
    } else {
        out.minus = build(ex.k_minus);
    }
    return out;
}

} // namespace

Exponents exponents(double eps, const RingParams& p)
{
    const double c = half_offset(p);
    const double a2 = p.a * p.a;
    Exponents ex;
    ex.discriminant = a2 * (eps + 0.25 * a2) + 16.0 * p.b * p.b * c * c;
    const double centre = (eps + 0.5 * a2) / (4.0 * p.b);
    if (ex.discriminant >= 0.0) {
        const double root = std::sqrt(ex.discriminant) / (4.0 * p.b);
        ex.k_plus = centre + root;
        ex.k_minus = centre - root;
        ex.regime = Regime::RealPair;
    } else {
        const double root = std::sqrt(-ex.discriminant) / (4.0 * p.b);
        ex.k_plus = cplx(centre, root);
        ex.k_minus = cplx(centre, -root);
        ex.regime = Regime::ConjugatePair;
    }
    return ex;
}

cplx denominator(cplx k, double eps, const RingParams& p)
{
    return -k + eps / (4.0 * p.b) + half_offset(p);
}

sf::TricomiScale inner_second_scale(cplx alpha)
{
    return alpha.real() >= 0.5 ? sf::TricomiScale::Gamma : sf::TricomiScale::PoleFree;
}

sf::TricomiScale outer_scale(cplx alpha)
{
    return alpha.real() >= 0.5 ? sf::TricomiScale::Gamma : sf::TricomiScale::Plain;
}

BasisEval region1_basis(QuantumNumber q, double e, const RingParams& p, double r)
{
    const double eps = e - p.v;
    return pair(exponents(eps, p), [&](cplx k) { return first_kind(q, k, eps, p, r); });
}

Region2Eval region2_basis(QuantumNumber q, double e, const RingParams& p, double r)
{
    const auto ex = exponents(e, p);
    return {pair(ex, [&](cplx k) { return first_kind(q, k, e, p, r); }),
            pair(ex, [&](cplx k) { return second_kind(q, k, e, p, r, inner_second_scale); })};
}

BasisEval region3_basis(QuantumNumber q, double e, const RingParams& p, double r)
{
    const double eps = e - p.v;
    return pair(exponents(eps, p), [&](cplx k) { return second_kind(q, k, eps, p, r, outer_scale); });
}

double decoupled_alpha(QuantumNumber q, Spin spin, double eps, const RingParams& p)
{
    const double c = half_offset(p);
    const double shift = eps / (4.0 * p.b);
    if (spin == Spin::Up) {
        return 0.5 * (q.up_power() + q.m) + 1.0 - (shift - c);
    }
    return 0.5 * (q.down_power() + q.m + 1) - (shift + c);
}

namespace {

int decoupled_beta(QuantumNumber q, Spin spin)
{
    return (spin == Spin::Up ? q.up_power() : q.down_power()) + 1;
}

SpinColumn decoupled_second(double alpha, int n, double xi, double dxi, sf::TricomiScale scale)
{
    const auto s = sf::tricomi_set(alpha, n, xi, scale);
    const double dfac = scale == sf::TricomiScale::Plain ? alpha : 1.0;
    return {s.base.real(), -dfac * s.raised.real() * dxi};
}

} // namespace

SpinColumn decoupled_region1(QuantumNumber q, Spin spin, double e, const RingParams& p, double r)
{
    const double alpha = decoupled_alpha(q, spin, e - p.v, p);
    const double beta = decoupled_beta(q, spin);
    const double xi = p.b * r * r;
    return {sf::kummer_m({alpha, beta, xi}).real(), sf::kummer_m_dxi({alpha, beta, xi}).real() * 2.0 * p.b * r};
}

SpinColumn decoupled_region2(QuantumNumber q, Spin spin, double e, const RingParams& p, double r, bool second)
{
    const double alpha = decoupled_alpha(q, spin, e, p);
    const int beta = decoupled_beta(q, spin);
    const double xi = p.b * r * r;
    if (!second) {
        return {sf::kummer_m({alpha, double(beta), xi}).real(),
                sf::kummer_m_dxi({alpha, double(beta), xi}).real() * 2.0 * p.b * r};
    }
    return decoupled_second(alpha, beta, xi, 2.0 * p.b * r, inner_second_scale(alpha));
}

SpinColumn decoupled_region3(QuantumNumber q, Spin spin, double e, const RingParams& p, double r)
{
    const double alpha = decoupled_alpha(q, spin, e - p.v, p);
    const int beta = decoupled_beta(q, spin);
    const double xi = p.b * r * r;
    return decoupled_second(alpha, beta, xi, 2.0 * p.b * r, outer_scale(alpha));
}

UW assemble_uw(QuantumNumber q, const RingParams& p, cplx f, cplx g, double r)
{
    const double envelope = std::exp(-0.5 * p.b * r * r);
    const double x = std::sqrt(p.b) * r;
    return {envelope * std::pow(x, q.up_power()) * f, envelope * std::pow(x, q.down_power()) * g};
}

double initial_cutoff(double e, const RingParams& p)
{
    if (e >= p.v) {
        return 6.0;
    }
    return std::clamp(1.0 + 8.0 / std::sqrt(p.v - e), 1.5, 6.0);
}

} // namespace qring::radial
