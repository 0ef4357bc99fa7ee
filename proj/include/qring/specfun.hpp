#pragma once

/// \file specfun.hpp
///
/// Confluent hypergeometric functions M (Kummer) and U (Tricomi) for complex
/// first parameter, real second parameter and nonnegative real argument,
/// together with the gamma/digamma helpers they need.
///
/// Everything here is a pure function of its arguments.

#include <complex>

#include "qring/error.hpp"

namespace qring {

using cplx = std::complex<double>;

namespace specfun {

/// Parameters of M(alpha, beta, xi) and U(alpha, beta, xi).
struct HyperParams {
    cplx alpha;
    double beta = 1.0;
    double xi = 0.0;
};

/// Kummer's function M(a, b, x) = sum_n (a)_n x^n / ((b)_n n!).
/// Throws DomainError for b a nonpositive integer or x < 0 and
/// ConvergenceError when the series has not settled after 10000 terms.
cplx kummer_m(const HyperParams& p);

/// dM/dxi = (a/b) M(a+1, b+1, xi).
cplx kummer_m_dxi(const HyperParams& p);

/// Tricomi's function U(a, n, x) for positive integer n and x > 0.
///
/// Route selection:
///  - a = 0, -1, -2, ... : terminating polynomial;
///  - x > 30 with a converging asymptotic expansion: asymptotic series;
///  - Re a >= 1/2: Laplace integral  Gamma(a) U = int_0^inf e^{-xt} t^{a-1} (1+t)^{n-a-1} dt;
///  - small |a| x: logarithmic series for integer n;
///  - otherwise: downward recurrence in a from the integral route.
cplx tricomi_u(const HyperParams& p);

/// dU/dxi = -a U(a+1, n+1, xi).
cplx tricomi_u_dxi(const HyperParams& p);

double digamma(double x);
cplx digamma(cplx z);

/// Principal-sheet-agnostic log Gamma: exp(log_gamma(z)) == Gamma(z).
cplx log_gamma(cplx z);
cplx gamma(cplx z);
/// 1/Gamma(z); entire, exact zero at nonpositive integers.
cplx rgamma(cplx z);

double sin_pi(double x);
double cos_pi(double x);
cplx sin_pi(cplx z);
cplx cot_pi(cplx z);

/// Normalisation of a second-kind solution of Kummer's equation.
///
///  Plain    : U(a, n, x).
///  Gamma    : Gamma(a) U(a, n, x). Regular for Re a > 0.
///  PoleFree : Gamma(a) U(a, n, x) + pi cot(pi a) (-1)^n (a-n+1)_{n-1}/(n-1)! M(a, n, x).
///             Differs from the Gamma form by a multiple of M(a, n, x), is finite at
///             a = 0, -1, -2, ... and never proportional to M there.
///
/// Gamma and PoleFree both satisfy d/dx S(a, n) = -S(a+1, n+1) and the
/// contiguous relations of U.
enum class TricomiScale { Plain, Gamma, PoleFree };

/// Second-kind solution with the given normalisation; n is a positive integer.
cplx tricomi_scaled(cplx a, int n, double x, TricomiScale scale);

/// The four second-kind values a radial basis column needs, all carrying the
/// same normalisation factor: S(a, n), S(a+1, n+1), S(a, n+1), S(a+1, n+2).
struct TricomiSet {
    cplx base;
    cplx raised;
    cplx beta_up;
    cplx raised_beta_up;
};

TricomiSet tricomi_set(cplx a, int n, double x, TricomiScale scale);

namespace detail {

/// Gamma(a) U(a, n, x) by trapezoidal quadrature of the Laplace integral in
/// log t, for Re a > 0. Returns S(a,n), S(a+1,n+1), S(a,n+1), S(a+1,n+2)
/// and Gamma(a+1) U(a+1, n, x) in `same_beta`.
struct LaplaceMoments {
    cplx base;
    cplx raised;
    cplx beta_up;
    cplx raised_beta_up;
    cplx raised_same_beta;
};
LaplaceMoments laplace_moments(cplx a, int n, double x);

/// Logarithmic series for integer n in the requested normalisation.
cplx log_series(cplx a, int n, double x, TricomiScale scale);

/// Asymptotic expansion x^{-a} sum_k (a)_k (a-n+1)_k (-x)^{-k} / k!.
/// Returns false if the smallest term is not below 1e-12 of the partial sum.
bool asymptotic(cplx a, int n, double x, cplx& out);

} // namespace detail

} // namespace specfun
} // namespace qring
