#pragma once

// The coupled radial equations written out directly, for residual checks and
// for step-by-step integration with odeint.

#include <algorithm>
#include <array>
#include <cmath>

#include <boost/numeric/odeint.hpp>

#include "qring/model.hpp"
#include "qring/specfun.hpp"

namespace qring::testing {

// u, u', w, w' at one radius.
struct Spinor {
    cplx u, du, w, dw;
};

inline double ring_potential(const RingParams& p, double r) { return (r < p.r_i || r > 1.0) ? p.v : 0.0; }

// u, w and first derivatives from f, g and their r-derivatives; g here is
// the basis g without the common factor a / (2 sqrt b).
inline Spinor spinor_from_basis(QuantumNumber q, const RingParams& p, double r, cplx f, cplx df, cplx g, cplx dg)
{
    const double c = p.a / (2.0 * std::sqrt(p.b));
    const double env = std::exp(-0.5 * p.b * r * r);
    const double x = std::sqrt(p.b) * r;
    const int mu = q.up_power(), md = q.down_power();
    const double pu = env * std::pow(x, mu), pw = env * std::pow(x, md);
    const double dpu = pu * (-p.b * r + mu / r), dpw = pw * (-p.b * r + md / r);
    return {pu * f, dpu * f + pu * df, c * pw * g, c * (dpw * g + pw * dg)};
}

// Second derivatives demanded by the radial equations with potential v_c.
inline std::pair<cplx, cplx> second_derivatives(QuantumNumber q, const RingParams& p, double e, double v_c, double r,
                                                const Spinor& s)
{
    const double m = q.m, b = p.b;
    const double au = e - v_c - m * m / (r * r) - 2 * b * m - b * b * r * r - 4 * p.s * b;
    const double aw = e - v_c - (m + 1) * (m + 1) / (r * r) - 2 * b * (m + 1) - b * b * r * r + 4 * p.s * b;
    const cplx d2u = -s.du / r - au * s.u + p.a * (s.dw + (m + 1) / r * s.w + b * r * s.w);
    const cplx d2w = -s.dw / r - aw * s.w + p.a * (-s.du + m / r * s.u + b * r * s.u);
    return {d2u, d2w};
}

// Residual of both equations, relative to the largest term in each, with
// the second derivatives taken by central differences of the analytic first
// derivatives.
template <class Eval>
double ode_residual(QuantumNumber q, const RingParams& p, double e, double v_c, double r, Eval&& eval, double h = 1e-5)
{
    const Spinor s = eval(r);
    const Spinor lo = eval(r - h), hi = eval(r + h);
    const cplx d2u = (hi.du - lo.du) / (2 * h);
    const cplx d2w = (hi.dw - lo.dw) / (2 * h);
    const auto [want_u, want_w] = second_derivatives(q, p, e, v_c, r, s);
    const double m = q.m, b = p.b;
    const double su = std::max({std::abs(d2u), std::abs(s.du / r), std::abs((e - v_c) * s.u),
                                std::abs(m * m / (r * r) * s.u), std::abs(b * b * r * r * s.u),
                                std::abs(p.a * s.dw), std::abs(p.a * (m + 1) / r * s.w)});
    const double sw = std::max({std::abs(d2w), std::abs(s.dw / r), std::abs((e - v_c) * s.w),
                                std::abs((m + 1) * (m + 1) / (r * r) * s.w), std::abs(b * b * r * r * s.w),
                                std::abs(p.a * s.du), std::abs(p.a * m / r * s.u)});
    double res = 0.0;
    if (su > 0.0) {
        res = std::max(res, std::abs(d2u - want_u) / su);
    }
    if (sw > 0.0) {
        res = std::max(res, std::abs(d2w - want_w) / sw);
    }
    return res;
}

// Integrates the real system (u, u', w, w') from r0 to r1 at constant v_c.
inline std::array<double, 4> integrate_radial(QuantumNumber q, const RingParams& p, double e, double v_c,
                                              std::array<double, 4> y, double r0, double r1)
{
    namespace odeint = boost::numeric::odeint;
    auto rhs = [&](const std::array<double, 4>& s, std::array<double, 4>& d, double r) {
        const Spinor sp{s[0], s[1], s[2], s[3]};
        const auto [d2u, d2w] = second_derivatives(q, p, e, v_c, r, sp);
        d = {s[1], d2u.real(), s[3], d2w.real()};
    };
    auto stepper = odeint::make_controlled(1e-13, 1e-13, odeint::runge_kutta_dopri5<std::array<double, 4>>());
    odeint::integrate_adaptive(stepper, rhs, y, r0, r1, (r1 - r0) * 1e-3);
    return y;
}

// Complex solution by integrating real and imaginary parts separately.
inline Spinor integrate_spinor(QuantumNumber q, const RingParams& p, double e, double v_c, const Spinor& s, double r0,
                               double r1)
{
    // unit scale so the absolute tolerance of the stepper is meaningful
    const double k = std::max({std::abs(s.u), std::abs(s.du), std::abs(s.w), std::abs(s.dw)});
    const Spinor n{s.u / k, s.du / k, s.w / k, s.dw / k};
    const auto re = integrate_radial(q, p, e, v_c, {n.u.real(), n.du.real(), n.w.real(), n.dw.real()}, r0, r1);
    const auto im = integrate_radial(q, p, e, v_c, {n.u.imag(), n.du.imag(), n.w.imag(), n.dw.imag()}, r0, r1);
    return {k * cplx(re[0], im[0]), k * cplx(re[1], im[1]), k * cplx(re[2], im[2]), k * cplx(re[3], im[3])};
}

inline double spinor_distance(const Spinor& a, const Spinor& b)
{
    const double scale = std::max({std::abs(b.u), std::abs(b.w), std::abs(b.du), std::abs(b.dw)});
    return std::max({std::abs(a.u - b.u), std::abs(a.w - b.w), std::abs(a.du - b.du), std::abs(a.dw - b.dw)}) /
           scale;
}

} // namespace qring::testing
