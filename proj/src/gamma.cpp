// Gamma, reciprocal gamma and digamma for real and complex arguments.

#include <array>
#include <cmath>
#include <numbers>

#include "qring/specfun.hpp"

namespace qring::specfun {

namespace {

constexpr double pi = std::numbers::pi;

bool is_nonpositive_integer(cplx z)
{
    return z.imag() == 0.0 && z.real() <= 0.0 && std::floor(z.real()) == z.real();
}

// Lanczos approximation, g = 7, n = 9.
constexpr double lanczos_g = 7.0;
constexpr std::array<double, 9> lanczos_coef{
    0.99999999999980993,  676.5203681218851,      -1259.1392167224028,
    771.32342877765313,   -176.61502916214059,    12.507343278686905,
    -0.13857109526572012, 9.9843695780195716e-6,  1.5056327351493116e-7};

template <class T>
T digamma_asymptotic(T z)
{
    // ln z - 1/(2z) - sum B_2k / (2k z^2k), |z| >= 10
    const T w = T(1.0) / (z * z);
    const T series =
        w * (1.0 / 12 -
             w * (1.0 / 120 -
                  w * (1.0 / 252 -
                       w * (1.0 / 240 -
                            w * (1.0 / 132 - w * (691.0 / 32760 - w * (1.0 / 12 - w * (3617.0 / 8160))))))));
    return std::log(z) - 0.5 / z - series;
}

template <class T>
T digamma_shifted(T z)
{
    T acc = 0.0;
    while (std::abs(z) < 10.0) {
        acc -= T(1.0) / z;
        z += 1.0;
    }
    return acc + digamma_asymptotic(z);
}

} // namespace

double sin_pi(double x)
{
    // Exact reduction to [-1/2, 1/2] keeps full relative accuracy near the zeros.
    double r = std::remainder(x, 2.0); // [-1, 1]
    if (r > 0.5) {
        r = 1.0 - r;
    } else if (r < -0.5) {
        r = -1.0 - r;
    }
    return std::sin(pi * r);
}

double cos_pi(double x)
{
    const double r = std::abs(std::remainder(x, 2.0)); // [0, 1]
    return std::sin(pi * (0.5 - r));
}

cplx sin_pi(cplx z)
{
    const double x = z.real();
    const double y = pi * z.imag();
    return {sin_pi(x) * std::cosh(y), cos_pi(x) * std::sinh(y)};
}

cplx cot_pi(cplx z)
{
    const double x = z.real();
    const double y = pi * z.imag();
    const cplx s{sin_pi(x) * std::cosh(y), cos_pi(x) * std::sinh(y)};
    const cplx c{cos_pi(x) * std::cosh(y), -sin_pi(x) * std::sinh(y)};
    return c / s;
}

double digamma(double x)
{
    if (x <= 0.0 && std::floor(x) == x) {
        throw DomainError("digamma: pole at nonpositive integer");
    }
    if (x < 0.5) {
        return digamma(1.0 - x) - pi * cos_pi(x) / sin_pi(x);
    }
    return digamma_shifted(x);
}

cplx digamma(cplx z)
{
    if (is_nonpositive_integer(z)) {
        throw DomainError("digamma: pole at nonpositive integer");
    }
    if (z.imag() == 0.0) {
        return digamma(z.real());
    }
    if (z.real() < 0.5) {
        return digamma(1.0 - z) - pi * cot_pi(z);
    }
    return digamma_shifted(z);
}

cplx log_gamma(cplx z)
{
    if (is_nonpositive_integer(z)) {
        throw DomainError("log_gamma: pole at nonpositive integer");
    }
    if (z.real() < 0.5) {
        return std::log(pi) - std::log(sin_pi(z)) - log_gamma(1.0 - z);
    }
    z -= 1.0;
    cplx x = lanczos_coef[0];
    for (std::size_t i = 1; i < lanczos_coef.size(); ++i) {
        x += lanczos_coef[i] / (z + static_cast<double>(i));
    }
    const cplx t = z + lanczos_g + 0.5;
    return 0.5 * std::log(2.0 * pi) + (z + 0.5) * std::log(t) - t + std::log(x);
}

cplx gamma(cplx z)
{
    if (is_nonpositive_integer(z)) {
        throw DomainError("gamma: pole at nonpositive integer");
    }
    if (z.real() < 0.5) {
        return pi / (sin_pi(z) * std::exp(log_gamma(1.0 - z)));
    }
    return std::exp(log_gamma(z));
}

cplx rgamma(cplx z)
{
    if (is_nonpositive_integer(z)) {
        return 0.0;
    }
    if (z.real() < 0.5) {
        return sin_pi(z) / pi * std::exp(log_gamma(1.0 - z));
    }
    return std::exp(-log_gamma(z));
}

} // namespace qring::specfun
