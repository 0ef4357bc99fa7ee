#include "qring/specfun.hpp"

#include <array>
#include <cmath>
#include <limits>
#include <numbers>

namespace qring::specfun {

namespace {

constexpr double eps = std::numeric_limits<double>::epsilon();
constexpr double euler_gamma = 0.57721566490153286061;
constexpr int max_terms = 10000;

bool is_nonpositive_integer(cplx z)
{
    return z.imag() == 0.0 && z.real() <= 0.0 && std::floor(z.real()) == z.real();
}

bool is_positive_integer(cplx z)
{
    return z.imag() == 0.0 && z.real() >= 1.0 && std::floor(z.real()) == z.real();
}

/// Neumaier-compensated complex accumulator.
class CompensatedSum {
public:
    void add(cplx x)
    {
        add_part(re_, re_c_, x.real());
        add_part(im_, im_c_, x.imag());
    }
    cplx value() const { return {re_ + re_c_, im_ + im_c_}; }

private:
    static void add_part(double& s, double& c, double x)
    {
        const double t = s + x;
        if (std::abs(s) >= std::abs(x)) {
            c += (s - t) + x;
        } else {
            c += (x - t) + s;
        }
        s = t;
    }
    double re_ = 0.0, re_c_ = 0.0, im_ = 0.0, im_c_ = 0.0;
};

/// Tracks the "3 consecutive negligible terms past the peak" stopping rule.
class SeriesStop {
public:
    bool negligible(double term, double sum, double ratio)
    {
        if (term <= eps * sum && ratio < 0.5) {
            return ++count_ >= 3;
        }
        count_ = 0;
        return false;
    }

private:
    int count_ = 0;
};

void check_integer_beta(double beta, const char* who)
{
    if (!(beta >= 1.0) || std::floor(beta) != beta) {
        throw DomainError(std::string(who) + ": second parameter must be a positive integer");
    }
}

void check_positive_xi(double xi, const char* who)
{
    if (!(xi > 0.0) || !std::isfinite(xi)) {
        throw DomainError(std::string(who) + ": argument must be positive and finite");
    }
}

// log(1 + 1/t) and log(1 + t) for t = e^u without overflow.
double log1p_inv_exp(double u)
{
    return u > 0.0 ? std::log1p(std::exp(-u)) : -u + std::log1p(std::exp(u));
}

double log1p_exp(double u)
{
    return u > 0.0 ? u + std::log1p(std::exp(-u)) : std::log1p(std::exp(u));
}

// Terminating case U(-N, n, x) = (-1)^N (n)_N M(-N, n, x).
cplx tricomi_polynomial(int N, int n, double x)
{
    double poch = 1.0;
    for (int j = 0; j < N; ++j) {
        poch *= n + j;
    }
    const double sign = (N % 2 == 0) ? 1.0 : -1.0;
    return sign * poch * kummer_m({cplx(-N, 0.0), static_cast<double>(n), x});
}

cplx tricomi_recurrence(cplx a, int n, double x)
{
    // Downward recurrence U(c-1) = -(n - 2c - x) U(c) - c (c - n + 1) U(c+1),
    // started where the Laplace integral converges.
    const int shift = static_cast<int>(std::ceil(0.5 - a.real()));
    const cplx top = a + static_cast<double>(shift);
    const auto mom = detail::laplace_moments(top, n, x);
    cplx u_c = mom.base * rgamma(top);
    cplx u_next = mom.raised_same_beta * rgamma(top + 1.0);
    for (int j = 0; j < shift; ++j) {
        const cplx c = top - static_cast<double>(j);
        const cplx u_prev = -(static_cast<double>(n) - 2.0 * c - x) * u_c - c * (c - static_cast<double>(n) + 1.0) * u_next;
        u_next = u_c;
        u_c = u_prev;
    }
    return u_c;
}

} // namespace

cplx kummer_m(const HyperParams& p)
{
    if (p.beta <= 0.0 && std::floor(p.beta) == p.beta) {
        throw DomainError("kummer_m: second parameter is a nonpositive integer");
    }
    if (!(p.xi >= 0.0) || !std::isfinite(p.xi)) {
        throw DomainError("kummer_m: argument must be nonnegative and finite");
    }
    if (p.xi == 0.0) {
        return 1.0;
    }
    // Extended precision: for large negative Re(alpha) the terms exceed the
    // sum by up to e^{2 sqrt(|alpha| xi)} and double loses those digits.
    using ld = long double;
    using lcplx = std::complex<ld>;
    const lcplx alpha(p.alpha.real(), p.alpha.imag());
    const ld xi = p.xi;
    const ld beta = p.beta;
    lcplx sum = 1.0L, term = 1.0L;
    SeriesStop stop;
    auto value = [&] { return cplx(static_cast<double>(sum.real()), static_cast<double>(sum.imag())); };
    for (int n = 0; n < max_terms; ++n) {
        const ld dn = n;
        const lcplx ratio = (alpha + dn) * (xi / ((beta + dn) * (dn + 1.0L)));
        term *= ratio;
        if (term == lcplx(0.0L)) {
            return value();
        }
        sum += term;
        if (stop.negligible(static_cast<double>(std::abs(term)), static_cast<double>(std::abs(sum)),
                            static_cast<double>(std::abs(ratio)))) {
            return value();
        }
    }
    throw ConvergenceError("kummer_m: series did not converge within 10000 terms");
}

cplx kummer_m_dxi(const HyperParams& p)
{
    return p.alpha / p.beta * kummer_m({p.alpha + 1.0, p.beta + 1.0, p.xi});
}

cplx tricomi_u(const HyperParams& p)
{
    check_integer_beta(p.beta, "tricomi_u");
    check_positive_xi(p.xi, "tricomi_u");
    return tricomi_scaled(p.alpha, static_cast<int>(p.beta), p.xi, TricomiScale::Plain);
}

cplx tricomi_u_dxi(const HyperParams& p)
{
    check_integer_beta(p.beta, "tricomi_u_dxi");
    check_positive_xi(p.xi, "tricomi_u_dxi");
    if (p.alpha == 0.0) {
        return 0.0;
    }
    return -p.alpha * tricomi_u({p.alpha + 1.0, p.beta + 1.0, p.xi});
}

cplx tricomi_scaled(cplx a, int n, double x, TricomiScale scale)
{
    check_integer_beta(n, "tricomi_scaled");
    check_positive_xi(x, "tricomi_scaled");
    switch (scale) {
    case TricomiScale::Plain: {
        if (is_nonpositive_integer(a)) {
            return tricomi_polynomial(static_cast<int>(-a.real()), n, x);
        }
        if (x > 30.0) {
            cplx out;
            if (detail::asymptotic(a, n, x, out)) {
                return out;
            }
        }
        if (a.real() >= 0.5) {
            return detail::laplace_moments(a, n, x).base * rgamma(a);
        }
        if (x <= 2.0 && std::abs(a) * x <= 4.0) {
            return detail::log_series(a, n, x, TricomiScale::Plain);
        }
        return tricomi_recurrence(a, n, x);
    }
    case TricomiScale::Gamma:
        if (a.real() > 0.0) {
            return detail::laplace_moments(a, n, x).base;
        }
        return detail::log_series(a, n, x, TricomiScale::Gamma);
    case TricomiScale::PoleFree:
        return detail::log_series(a, n, x, TricomiScale::PoleFree);
    }
    return 0.0;
}

TricomiSet tricomi_set(cplx a, int n, double x, TricomiScale scale)
{
    if (scale == TricomiScale::Gamma && a.real() > 0.0) {
        const auto mom = detail::laplace_moments(a, n, x);
        return {mom.base, mom.raised, mom.beta_up, mom.raised_beta_up};
    }
    return {tricomi_scaled(a, n, x, scale), tricomi_scaled(a + 1.0, n + 1, x, scale),
            tricomi_scaled(a, n + 1, x, scale), tricomi_scaled(a + 1.0, n + 2, x, scale)};
}

namespace detail {

LaplaceMoments laplace_moments(cplx a, int n, double x)
{
    const double ar = a.real();
    const double ai = a.imag();
    if (!(ar > 0.0)) {
        throw DomainError("laplace_moments: requires Re(a) > 0");
    }
    const double nm1 = n - 1.0;

    // Peak of L(u) = -x e^u - ar log(1 + e^-u) + (n-1) log(1 + e^u).
    const double B = x - n + 1.0;
    const double disc = std::sqrt(B * B + 4.0 * x * ar);
    const double t_peak = B > 0.0 ? 2.0 * ar / (B + disc) : (disc - B) / (2.0 * x);
    const double u_peak = std::log(t_peak);
    const double curv = -x * t_peak + (nm1 - ar) * t_peak / ((1.0 + t_peak) * (1.0 + t_peak));
    double sigma = curv < 0.0 ? 1.0 / std::sqrt(-curv) : 1.0;
    sigma = std::min(sigma, 4.0);

    auto log_mag = [&](double u) {
        const double t = std::exp(u);
        return -x * t - ar * log1p_inv_exp(u) + nm1 * log1p_exp(u);
    };
    const double l_peak = log_mag(u_peak);

    // Integrand in v, u = u_peak + sigma sinh(v); slot 0..4 = weights 1, t, 1+t, t(1+t), t/(1+t).
    struct Sample {
        std::array<cplx, 5> val;
        double log_size;
    };
    auto sample = [&](double v) -> Sample {
        const double u = u_peak + sigma * std::sinh(v);
        const double jac = sigma * std::cosh(v);
        Sample s{};
        if (u > 700.0 || u < -745.0) {
            s.log_size = -std::numeric_limits<double>::infinity();
            return s;
        }
        const double t = std::exp(u);
        const double lg_inv = log1p_inv_exp(u);
        const double lg = log1p_exp(u);
        const double l = -x * t - ar * lg_inv + nm1 * lg - l_peak;
        const double mag = std::exp(l) * jac;
        const double theta = -ai * lg_inv;
        const cplx base = mag * cplx(std::cos(theta), std::sin(theta));
        const double one_t = 1.0 + t;
        s.val = {base, base * t, base * one_t, base * (t * one_t), base * (t / one_t)};
        s.log_size = l + std::log(jac) + std::max(0.0, std::log(t * one_t));
        return s;
    };

    constexpr double cutoff = -46.0;
    std::array<cplx, 5> sum{};
    std::array<double, 5> abs_sum{}; // sets the round-off floor under cancellation
    auto accumulate = [&](const Sample& s) {
        for (std::size_t i = 0; i < sum.size(); ++i) {
            sum[i] += s.val[i];
            abs_sum[i] += std::abs(s.val[i]);
        }
    };

    double h = 0.5;
    accumulate(sample(0.0));
    double v_hi = 0.0;
    for (int j = 1;; ++j) {
        const auto s = sample(j * h);
        accumulate(s);
        v_hi = j * h;
        if (s.log_size < cutoff || j > 64) {
            break;
        }
    }
    double v_lo = 0.0;
    for (int j = 1;; ++j) {
        const auto s = sample(-j * h);
        accumulate(s);
        v_lo = -j * h;
        if (s.log_size < cutoff || j > 64) {
            break;
        }
    }

    std::array<cplx, 5> estimate;
    for (std::size_t i = 0; i < sum.size(); ++i) {
        estimate[i] = h * sum[i];
    }
    bool converged = false;
    for (int level = 0; level < 9; ++level) {
        // add midpoints
        for (double v = v_lo + 0.5 * h; v < v_hi; v += h) {
            accumulate(sample(v));
        }
        h *= 0.5;
        double change = 0.0;
        double size = 0.0;
        std::array<cplx, 5> refined;
        for (std::size_t i = 0; i < sum.size(); ++i) {
            refined[i] = h * sum[i];
            const double floor = 64.0 * std::numeric_limits<double>::epsilon() * h * abs_sum[i];
            change = std::max(change, std::max(0.0, std::abs(refined[i] - estimate[i]) - floor) / std::abs(refined[i]));
            size = std::max(size, std::abs(refined[i]));
        }
        estimate = refined;
        if (level >= 1 && change < 1e-14) {
            converged = true;
            break;
        }
    }
    if (!converged) {
        throw ConvergenceError("laplace_moments: quadrature did not converge");
    }
    const double scale = std::exp(l_peak);
    return {estimate[0] * scale, estimate[1] * scale, estimate[2] * scale, estimate[3] * scale,
            estimate[4] * scale};
}

cplx log_series(cplx a, int n, double x, TricomiScale scale)
{
    const int nn = n - 1; // the handbook's n for U(a, nn+1, x)
    const bool pole_free = scale == TricomiScale::PoleFree;
    if (pole_free && is_positive_integer(a)) {
        throw DomainError("log_series: pole-free form is singular at positive integer a");
    }
    if (scale == TricomiScale::Gamma && is_nonpositive_integer(a)) {
        throw DomainError("log_series: Gamma(a) U(a, n, x) has a pole at nonpositive integer a");
    }
    if (scale == TricomiScale::Plain && is_nonpositive_integer(a)) {
        return tricomi_polynomial(static_cast<int>(-a.real()), n, x);
    }

    // prefactor (-1)^{nn+1} (a - nn)_nn / nn!
    cplx prefactor = (nn % 2 == 0) ? -1.0 : 1.0;
    for (int j = 0; j < nn; ++j) {
        prefactor *= (a - static_cast<double>(nn) + static_cast<double>(j)) / static_cast<double>(j + 1);
    }

    // Extended precision as in kummer_m. The digamma values advance by exact
    // recurrence steps so a rounding error in the start value only multiplies
    // the (small) plain sum, not the large individual terms.
    using ld = long double;
    using lcplx = std::complex<ld>;
    const lcplx la(a.real(), a.imag());
    const ld lx = x;
    const ld log_lx = std::log(lx);
    ld psi_k1 = -static_cast<ld>(euler_gamma); // psi(1 + k)
    ld psi_kn = psi_k1;                          // psi(nn + 1 + k)
    for (int j = 1; j <= nn; ++j) {
        psi_kn += 1.0L / j;
    }
    const cplx psi0 = pole_free ? digamma(1.0 - a) : digamma(a);
    lcplx psi_a(psi0.real(), psi0.imag()); // psi(1 - a - k) or psi(a + k)

    lcplx sum = 0.0L;
    SeriesStop stop;
    lcplx poch = 1.0L;    // (a)_k
    lcplx poch_nz = 1.0L; // (a)_k without an exact zero factor
    bool zero_factor = false;
    ld scale_k = 1.0L; // x^k / ((nn+1)_k k!)
    for (int k = 0; k < max_terms; ++k) {
        lcplx term;
        if (zero_factor) {
            // (a)_k psi(1-a-k) -> prod_{j != N} (a+j) when a = -N exactly
            term = scale_k * poch_nz;
        } else {
            term = scale_k * poch * (log_lx + psi_a - psi_k1 - psi_kn);
        }
        sum += term;

        const lcplx factor = la + static_cast<ld>(k);
        const ld ratio_x = lx / ((nn + 1.0L + k) * (k + 1.0L));
        if (factor == 0.0L) {
            zero_factor = true;
        } else {
            poch_nz *= factor;
            psi_a += 1.0L / factor; // same step for psi(1 - a - k) and psi(a + k)
        }
        poch *= factor;
        scale_k *= ratio_x;
        psi_k1 += 1.0L / (k + 1.0L);
        psi_kn += 1.0L / (nn + 1.0L + k);

        const double ratio = static_cast<double>(std::abs(factor) * ratio_x);
        if (!zero_factor && poch == 0.0L) {
            break;
        }
        if (stop.negligible(static_cast<double>(std::abs(term)), static_cast<double>(std::abs(sum)), ratio)) {
            break;
        }
        if (k == max_terms - 1) {
            throw ConvergenceError("log_series: series did not converge within 10000 terms");
        }
    }

    // sum_{k=1}^{nn} (k-1)! (1-a+k)_{nn-k} / (nn-k)! x^{-k}
    cplx finite = 0.0;
    for (int k = 1; k <= nn; ++k) {
        cplx c = 1.0;
        for (int j = 1; j < k; ++j) {
            c *= static_cast<double>(j);
        }
        for (int j = 0; j < nn - k; ++j) {
            c *= (1.0 - a + static_cast<double>(k + j)) / static_cast<double>(j + 1);
        }
        finite += c * std::pow(x, -k);
    }

    const cplx gamma_form = prefactor * cplx(static_cast<double>(sum.real()), static_cast<double>(sum.imag())) + finite;
    if (scale == TricomiScale::Plain) {
        return rgamma(a) * gamma_form;
    }
    return gamma_form;
}

bool asymptotic(cplx a, int n, double x, cplx& out)
{
    const cplx b1 = a - static_cast<double>(n) + 1.0;
    CompensatedSum sum;
    cplx term = 1.0;
    sum.add(term);
    bool converged = false;
    for (int k = 0; k < 500; ++k) {
        const cplx next = term * (a + static_cast<double>(k)) * (b1 + static_cast<double>(k)) / ((k + 1.0) * -x);
        if (next == 0.0) {
            converged = true;
            break;
        }
        if (std::abs(next) >= std::abs(term)) {
            // truncate at the smallest term; `next` is the first omitted one
            converged = std::abs(next) < 1e-12 * std::abs(sum.value());
            break;
        }
        if (std::abs(next) < 0.1 * eps * std::abs(sum.value())) {
            sum.add(next);
            converged = true;
            break;
        }
        sum.add(next);
        term = next;
    }
    if (!converged) {
        return false;
    }
    out = std::exp(-a * std::log(x)) * sum.value();
    return true;
}

} // namespace detail

} // namespace qring::specfun
