#include "qring/matching.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include <boost/math/tools/toms748_solve.hpp>

namespace qring::matching {

namespace {

using radial::BasisColumn;
using radial::Regime;

constexpr int nudge_attempts = 8;

void set_column(Eigen::MatrixXcd& m, int col, int row0, const BasisColumn& c, double sign)
{
    m(row0, col) = sign * c.f;
    m(row0 + 1, col) = sign * c.df;
    m(row0 + 2, col) = sign * c.g;
    m(row0 + 3, col) = sign * c.dg;
}

void set_spin(Eigen::MatrixXcd& m, int col, int row0, const radial::SpinColumn& c, double sign)
{
    m(row0, col) = sign * c.f;
    m(row0 + 1, col) = sign * c.df;
}

radial::Spin spin_of(Block b) { return b == Block::SpinUp ? radial::Spin::Up : radial::Spin::Down; }

// Adaptive Simpson on [a, b] with absolute tolerance.
template <class F>
double simpson_step(const F& f, double a, double b, double fa, double fm, double fb, double whole, double tol, int depth)
{
    const double m = 0.5 * (a + b);
    const double lm = 0.5 * (a + m);
    const double rm = 0.5 * (m + b);
    const double flm = f(lm);
    const double frm = f(rm);
    const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    const double diff = left + right - whole;
    if (depth <= 0 || std::abs(diff) <= 15.0 * tol) {
        return left + right + diff / 15.0;
    }
    return simpson_step(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
           simpson_step(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

template <class F>
double adaptive_simpson(const F& f, double a, double b, double tol)
{
    // Start from a few panels so narrow features are not skipped.
    constexpr int panels = 8;
    const double h = (b - a) / panels;
    double total = 0.0;
    for (int i = 0; i < panels; ++i) {
        const double x0 = a + i * h;
        const double x1 = i + 1 == panels ? b : x0 + h;
        const double f0 = f(x0), f1 = f(x1), fm = f(0.5 * (x0 + x1));
        const double whole = (x1 - x0) / 6.0 * (f0 + 4.0 * fm + f1);
        total += simpson_step(f, x0, x1, f0, fm, f1, whole, tol / panels, 40);
    }
    return total;
}

} // namespace

const char* block_name(Block b)
{
    switch (b) {
    case Block::Coupled:
        return "coupled";
    case Block::SpinUp:
        return "spin-up";
    case Block::SpinDown:
        return "spin-down";
    }
    return "?";
}

MatchingMatrix assemble(QuantumNumber q, double e, const RingParams& p, Block block)
{
    MatchingMatrix mm;
    mm.block = block;
    if (block == Block::Coupled) {
        Eigen::MatrixXcd raw = Eigen::MatrixXcd::Zero(8, 8);
        const auto outer = radial::exponents(e - p.v, p);
        const auto inner = radial::exponents(e, p);
        const auto b1 = radial::region1_basis(q, e, p, p.r_i);
        const auto b2i = radial::region2_basis(q, e, p, p.r_i);
        const auto b2o = radial::region2_basis(q, e, p, 1.0);
        const auto b3 = radial::region3_basis(q, e, p, 1.0);

        set_column(raw, 0, 0, b1.plus, 1.0);
        set_column(raw, 1, 0, b1.minus, 1.0);
        set_column(raw, 2, 0, b2i.first.plus, -1.0);
        set_column(raw, 3, 0, b2i.first.minus, -1.0);
        set_column(raw, 4, 0, b2i.second.plus, -1.0);
        set_column(raw, 5, 0, b2i.second.minus, -1.0);
        set_column(raw, 2, 4, b2o.first.plus, 1.0);
        set_column(raw, 3, 4, b2o.first.minus, 1.0);
        set_column(raw, 4, 4, b2o.second.plus, 1.0);
        set_column(raw, 5, 4, b2o.second.minus, 1.0);
        set_column(raw, 6, 4, b3.plus, -1.0);
        set_column(raw, 7, 4, b3.minus, -1.0);

        mm.conjugate_pairs = 2 * (outer.regime == Regime::ConjugatePair) + 2 * (inner.regime == Regime::ConjugatePair);
        mm.entries = raw;
        mm.column_scales = Eigen::VectorXd::Ones(8);
    } else {
        const auto spin = spin_of(block);
        Eigen::MatrixXcd raw = Eigen::MatrixXcd::Zero(4, 4);
        set_spin(raw, 0, 0, radial::decoupled_region1(q, spin, e, p, p.r_i), 1.0);
        set_spin(raw, 1, 0, radial::decoupled_region2(q, spin, e, p, p.r_i, false), -1.0);
        set_spin(raw, 2, 0, radial::decoupled_region2(q, spin, e, p, p.r_i, true), -1.0);
        set_spin(raw, 1, 2, radial::decoupled_region2(q, spin, e, p, 1.0, false), 1.0);
        set_spin(raw, 2, 2, radial::decoupled_region2(q, spin, e, p, 1.0, true), 1.0);
        set_spin(raw, 3, 2, radial::decoupled_region3(q, spin, e, p, 1.0), -1.0);
        mm.entries = raw;
        mm.column_scales = Eigen::VectorXd::Ones(4);
    }
    for (Eigen::Index j = 0; j < mm.entries.cols(); ++j) {
        const double peak = mm.entries.col(j).cwiseAbs().maxCoeff();
        if (!(peak > 0.0) || !std::isfinite(peak)) {
            std::ostringstream os;
            os << "matching column " << j << " is zero or not finite at e = " << e;
            throw ConvergenceError(os.str());
        }
        mm.column_scales(j) /= peak;
        mm.entries.col(j) *= mm.column_scales(j);
    }
    return mm;
}

DetValue det_value(const MatchingMatrix& mm)
{
    cplx det = mm.entries.determinant();
    for (int i = 0; i < mm.conjugate_pairs; ++i) {
        det /= cplx(0.0, -2.0);
    }
    double hadamard = 1.0;
    for (Eigen::Index j = 0; j < mm.entries.cols(); ++j) {
        hadamard *= mm.entries.col(j).norm();
    }
    hadamard /= std::pow(2.0, mm.conjugate_pairs);
    return {det.real(), std::abs(det.imag()) / hadamard};
}

double scaled_det(const MatchingMatrix& mm)
{
    const auto d = det_value(mm);
    if (d.imag_ratio > imag_det_tol || !std::isfinite(d.value)) {
        std::ostringstream os;
        os << "matching determinant has imaginary part " << d.imag_ratio << " of its scale";
        throw ImaginaryDetTooLarge(os.str());
    }
    return d.value;
}

double det_at(QuantumNumber q, double& e, const RingParams& p, Block block)
{
    for (int attempt = 0;; ++attempt) {
        try {
            return scaled_det(assemble(q, e, p, block));
        } catch (const DegenerateDenominator&) {
            if (attempt + 1 >= nudge_attempts) {
                throw;
            }
            e += 1e-9 * (1.0 + std::abs(e));
        }
    }
}

std::vector<double> artifact_points(const RingParams& p, Block block)
{
    if (block != Block::Coupled || p.a == 0.0) {
        return {};
    }
    // discriminant a^2 (eps + a^2/4) + 16 b^2 (s - 1/2)^2 = 0: the +/- columns coincide
    const double c = p.s - 0.5;
    const double eps_disc = -0.25 * p.a * p.a - 16.0 * p.b * p.b * c * c / (p.a * p.a);
    // D^- = 0 at eps = -4 b (s - 1/2): g of one exponent blows up in both its columns
    const double eps_pole = -4.0 * p.b * c;
    return {p.v + eps_disc, eps_disc, p.v + eps_pole, eps_pole};
}

ScanResult scan_levels(QuantumNumber q, const RingParams& p, double e_lo, double e_hi, double de, Block block)
{
    ScanResult out;
    if (!(de > 0.0) || !(e_hi > e_lo)) {
        return out;
    }
    struct Point {
        double e;
        double det;
        bool artifact_left; // interval ending here straddles an artifact
    };
    std::vector<double> grid;
    const int steps = static_cast<int>(std::floor((e_hi - e_lo) / de + 1e-9));
    for (int k = 0; k <= steps; ++k) {
        grid.push_back(e_lo + k * de);
    }
    if (grid.back() < e_hi) {
        grid.push_back(e_hi);
    }
    std::vector<std::pair<double, double>> excluded;
    for (double x : artifact_points(p, block)) {
        const double eta = 1e-6 * (1.0 + std::abs(x));
        if (x - eta > e_lo && x + eta < e_hi) {
            grid.push_back(x - eta);
            grid.push_back(x + eta);
            excluded.emplace_back(x - eta, x + eta);
        }
    }
    std::sort(grid.begin(), grid.end());

    std::vector<Point> pts;
    pts.reserve(grid.size());
    for (double e : grid) {
        double at = e;
        const double d = det_at(q, at, p, block);
        ++out.evaluations;
        bool straddle = false;
        if (!pts.empty()) {
            for (const auto& [l, h] : excluded) {
                straddle = straddle || (pts.back().e <= l && at >= h);
            }
        }
        pts.push_back({at, d, straddle});
    }
    for (std::size_t i = 1; i < pts.size(); ++i) {
        const auto& a = pts[i - 1];
        const auto& b = pts[i];
        if (std::signbit(a.det) != std::signbit(b.det) && !b.artifact_left) {
            out.brackets.push_back({a.e, b.e, a.det, b.det});
        }
        if (i + 1 < pts.size()) {
            const auto& c = pts[i + 1];
            const double mid = std::abs(b.det);
            const double scale = std::max(std::abs(a.det), std::abs(c.det));
            if (mid < std::abs(a.det) && mid < std::abs(c.det) && mid < 1e-9 * scale &&
                std::signbit(a.det) == std::signbit(c.det)) {
                out.suspects.push_back(b.e);
            }
        }
    }
    return out;
}

double refine_bracket(const std::function<double(double)>& f, double lo, double hi, double f_lo, double f_hi)
{
    if (f_lo == 0.0) {
        return lo;
    }
    if (f_hi == 0.0) {
        return hi;
    }
    if (std::signbit(f_lo) == std::signbit(f_hi)) {
        throw DomainError("refine_bracket: endpoints do not bracket a sign change");
    }
    constexpr std::uintmax_t budget = 200;
    std::uintmax_t iters = budget;
    auto tol = [](double a, double b) { return std::abs(b - a) <= 4e-15 * std::max(1.0, std::abs(a)); };
    const auto r = boost::math::tools::toms748_solve(f, lo, hi, f_lo, f_hi, tol, iters);
    if (iters >= budget) {
        std::ostringstream os;
        os << "root refinement exhausted " << budget << " iterations in [" << lo << ", " << hi << "]";
        throw MaxIterations(os.str());
    }
    return 0.5 * (r.first + r.second);
}

double refine_root(const Bracket& br, QuantumNumber q, const RingParams& p, Block block)
{
    auto f = [&](double e) {
        double at = e;
        return det_at(q, at, p, block);
    };
    return refine_bracket(f, br.lo, br.hi, br.det_lo, br.det_hi);
}

double singular_ratio(QuantumNumber q, double e, const RingParams& p, Block block)
{
    const auto mm = assemble(q, e, p, block);
    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(mm.entries);
    const auto& sv = svd.singularValues();
    return sv(sv.size() - 1) / sv(0);
}

radial::UW wavefunction(const BoundState& s, double r)
{
    const QuantumNumber q{s.m};
    const RingParams& p = s.params;
    const auto& c = s.coeffs;
    if (s.block != Block::Coupled) {
        const auto spin = spin_of(s.block);
        cplx val;
        if (r <= p.r_i) {
            val = c[0] * radial::decoupled_region1(q, spin, s.e, p, r).f;
        } else if (r <= 1.0) {
            val = c[1] * radial::decoupled_region2(q, spin, s.e, p, r, false).f +
                  c[2] * radial::decoupled_region2(q, spin, s.e, p, r, true).f;
        } else {
            val = c[3] * radial::decoupled_region3(q, spin, s.e, p, r).f;
        }
        return spin == radial::Spin::Up ? radial::assemble_uw(q, p, val, 0.0, r)
                                        : radial::assemble_uw(q, p, 0.0, val, r);
    }
    cplx f, g;
    auto add = [&](const radial::BasisEval& be, std::size_t j) {
        f += c[j] * be.plus.f + c[j + 1] * be.minus.f;
        g += c[j] * be.plus.g + c[j + 1] * be.minus.g;
    };
    if (r <= p.r_i) {
        add(radial::region1_basis(q, s.e, p, r), 0);
    } else if (r <= 1.0) {
        const auto b2 = radial::region2_basis(q, s.e, p, r);
        add(b2.first, 2);
        add(b2.second, 4);
    } else {
        add(radial::region3_basis(q, s.e, p, r), 6);
    }
    const double coupling = p.a / (2.0 * std::sqrt(p.b));
    return radial::assemble_uw(q, p, f, coupling * g, r);
}

BoundState solve_state(QuantumNumber q, double e_root, const RingParams& p, Block block)
{
    BoundState s;
    s.m = q.m;
    s.e = e_root;
    s.block = block;
    s.params = p;

    const auto mm = assemble(q, e_root, p, block);
    const auto dv = det_value(mm);
    s.det_residual = std::abs(dv.value);
    s.imag_det_ratio = dv.imag_ratio;

    Eigen::JacobiSVD<Eigen::MatrixXcd> svd(mm.entries, Eigen::ComputeFullV);
    const auto& sv = svd.singularValues();
    const Eigen::Index n = sv.size();
    s.sigma_ratio = sv(n - 1) / sv(0);
    if (s.sigma_ratio >= singular_tol) {
        std::ostringstream os;
        os << "matching matrix is not singular at e = " << e_root << " (sigma ratio " << s.sigma_ratio << ")";
        throw ConvergenceError(os.str());
    }
    if (sv(n - 2) / sv(0) < singular_tol) {
        std::ostringstream os;
        os << "two null directions at e = " << e_root << ":\n"
           << svd.matrixV().col(n - 1).transpose() << "\n"
           << svd.matrixV().col(n - 2).transpose();
        throw RankDeficiencyAmbiguous(os.str());
    }
    const Eigen::VectorXcd x = svd.matrixV().col(n - 1);

    const Eigen::VectorXcd res = mm.entries * x;
    const Eigen::VectorXd scale = (mm.entries.cwiseAbs() * x.cwiseAbs());
    s.continuity_residual = res.cwiseAbs().maxCoeff() / scale.maxCoeff();

    s.coeffs.resize(n);
    for (Eigen::Index j = 0; j < n; ++j) {
        s.coeffs[j] = x(j) * mm.column_scales(j);
    }

    // Global phase: the rotation that makes the sampled u, w most nearly real,
    // then the sign that makes u(r_mid) positive (w if u vanishes there).
    {
        constexpr int phase_samples = 200;
        const double r_hi = radial::initial_cutoff(e_root, p);
        cplx sq = 0.0;
        for (int i = 1; i <= phase_samples; ++i) {
            const auto uw = wavefunction(s, r_hi * i / phase_samples);
            sq += uw.u * uw.u + uw.w * uw.w;
        }
        const cplx phase = std::abs(sq) > 0.0 ? std::conj(std::sqrt(sq / std::abs(sq))) : cplx(1.0);
        for (auto& c : s.coeffs) {
            c *= phase;
        }
        const double r_mid = 0.5 * (p.r_i + 1.0);
        const auto mid = wavefunction(s, r_mid);
        const double ref = std::abs(mid.u) > 1e-8 * std::abs(mid.w) ? mid.u.real() : mid.w.real();
        if (ref < 0.0) {
            for (auto& c : s.coeffs) {
                c = -c;
            }
        }
    }

    auto density = [&](double r) {
        const auto uw = wavefunction(s, r);
        return (std::norm(uw.u) + std::norm(uw.w)) * r;
    };

    // Truncation radius: extend until the density has dropped by 1e-14.
    constexpr int samples = 400;
    double r_cut = radial::initial_cutoff(e_root, p);
    double peak = 0.0;
    for (int i = 1; i <= samples; ++i) {
        peak = std::max(peak, density(r_cut * i / samples));
    }
    while (density(r_cut) > 1e-14 * peak && r_cut < 30.0) {
        r_cut += 0.5;
    }
    s.r_cut = r_cut;

    double max_amp = 0.0, max_imag = 0.0, rough = 0.0;
    for (int i = 0; i <= samples; ++i) {
        const double r = r_cut * i / samples;
        const auto uw = wavefunction(s, r);
        max_amp = std::max({max_amp, std::abs(uw.u.real()), std::abs(uw.w.real())});
        max_imag = std::max({max_imag, std::abs(uw.u.imag()), std::abs(uw.w.imag())});
        rough += (std::norm(uw.u) + std::norm(uw.w)) * r * (i == 0 || i == samples ? 0.5 : 1.0);
    }
    s.realness_residual = max_imag / max_amp;
    if (s.realness_residual > 1e-8) {
        std::ostringstream os;
        os << "null vector at e = " << e_root << " is not real up to a phase (residual " << s.realness_residual << ")";
        throw ConvergenceError(os.str());
    }
    rough *= r_cut / samples;
    for (auto& c : s.coeffs) {
        c /= std::sqrt(rough);
    }

    auto integral = [&] {
        constexpr double tol = 1e-10;
        return adaptive_simpson(density, 0.0, p.r_i, tol / 3) + adaptive_simpson(density, p.r_i, 1.0, tol / 3) +
               adaptive_simpson(density, 1.0, r_cut, tol / 3);
    };
    const double norm = integral();
    for (auto& c : s.coeffs) {
        c /= std::sqrt(norm);
    }
    s.norm_check = integral();
    return s;
}

std::vector<BoundState> solve_levels(QuantumNumber q, const RingParams& p, const SolveOptions& opts)
{
    p.validate();
    const double lo = std::max(0.0, opts.e_lo);
    const double hi = opts.e_hi > 0.0 ? std::min(opts.e_hi, p.v) : p.v;
    std::vector<Block> blocks;
    if (p.a == 0.0) {
        blocks = {Block::SpinUp, Block::SpinDown};
    } else {
        blocks = {Block::Coupled};
    }
    std::vector<BoundState> states;
    for (Block block : blocks) {
        // Chunked scan so a level cap can stop early.
        const double chunk = opts.max_levels > 0 ? std::max(2.0, 40.0 * opts.de) : hi - lo;
        const int per_chunk = std::max(1, static_cast<int>(std::round(chunk / opts.de)));
        int found = 0;
        for (double start = lo; start < hi; start += per_chunk * opts.de) {
            const double stop = std::min(hi, start + per_chunk * opts.de);
            const auto scan = scan_levels(q, p, start, stop, opts.de, block);
            for (const auto& br : scan.brackets) {
                const double e = refine_root(br, q, p, block);
                if (singular_ratio(q, e, p, block) >= singular_tol) {
                    continue; // pole-like sign change, not a level
                }
                states.push_back(solve_state(q, e, p, block));
                ++found;
            }
            if (opts.max_levels > 0 && found >= opts.max_levels) {
                break;
            }
            if (stop >= hi) {
                break;
            }
        }
    }
    std::sort(states.begin(), states.end(), [](const BoundState& a, const BoundState& b) { return a.e < b.e; });
    if (opts.max_levels > 0 && static_cast<int>(states.size()) > opts.max_levels) {
        states.resize(opts.max_levels);
    }
    for (std::size_t i = 0; i < states.size(); ++i) {
        states[i].level_index = static_cast<int>(i);
    }
    return states;
}

} // namespace qring::matching
