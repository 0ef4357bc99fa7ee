#include "qring/oracle.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include "qring/error.hpp"

namespace qring::oracle {

namespace {

using Sparse = Eigen::SparseMatrix<double>;
using Ldlt = Eigen::SimplicialLDLT<Sparse, Eigen::Lower, Eigen::NaturalOrdering<int>>;

// Fraction of the r-weighted cell [lo, hi] lying outside the ring.
double barrier_fraction(double lo, double hi, double r_i)
{
    auto weight = [](double x0, double x1) { return x1 > x0 ? 0.5 * (x1 * x1 - x0 * x0) : 0.0; };
    const double outside = weight(lo, std::min(hi, r_i)) + weight(std::max(lo, 1.0), hi);
    return outside / weight(lo, hi);
}

/// Stiffness K and weight W with K x = e W x; unknowns interleaved (u_j, w_j).
struct Discretization {
    Sparse K;
    Eigen::VectorXd W;
};

Discretization build(QuantumNumber q, const RingParams& p, const FdGrid& g)
{
    const int n = g.n_points;
    const double h = g.spacing();
    const double m = q.m;
    std::vector<Eigen::Triplet<double>> t;
    t.reserve(static_cast<std::size_t>(n) * 14);
    Eigen::VectorXd W(2 * n);
    auto U = [](int j) { return 2 * j; };
    auto Wc = [](int j) { return 2 * j + 1; };
    for (int j = 0; j < n; ++j) {
        const double r = g.radius(j);
        const double face_lo = j * h;
        const double face_hi = (j + 1) * h;
        const double v_cell = p.v * barrier_fraction(face_lo, face_hi, p.r_i);
        W(U(j)) = r;
        W(Wc(j)) = r;

        // -(r u')' with zero flux through r = 0 and u = 0 at r_max
        double diag = face_lo / (h * h) + face_hi / (h * h);
        if (j + 1 == n) {
            diag += face_hi / (h * h);
        } else {
            t.emplace_back(U(j), U(j + 1), -face_hi / (h * h));
            t.emplace_back(U(j + 1), U(j), -face_hi / (h * h));
            t.emplace_back(Wc(j), Wc(j + 1), -face_hi / (h * h));
            t.emplace_back(Wc(j + 1), Wc(j), -face_hi / (h * h));
        }
        const double common = v_cell + p.b * p.b * r * r;
        t.emplace_back(U(j), U(j), diag + m * m / r + r * (common + 2.0 * p.b * m + 4.0 * p.s * p.b));
        t.emplace_back(Wc(j), Wc(j),
                       diag + (m + 1) * (m + 1) / r + r * (common + 2.0 * p.b * (m + 1) - 4.0 * p.s * p.b));

        // r H_uw w = a ((r w)' + m w + b r^2 w); its transpose is r H_wu u.
        const double cd = p.a * (m + p.b * r * r);
        if (cd != 0.0) {
            t.emplace_back(U(j), Wc(j), cd);
            t.emplace_back(Wc(j), U(j), cd);
        }
        if (p.a != 0.0 && j + 1 < n) {
            const double up = p.a * g.radius(j + 1) / (2.0 * h); // u_j <- w_{j+1}
            const double down = -p.a * r / (2.0 * h);            // u_{j+1} <- w_j
            t.emplace_back(U(j), Wc(j + 1), up);
            t.emplace_back(Wc(j + 1), U(j), up);
            t.emplace_back(U(j + 1), Wc(j), down);
            t.emplace_back(Wc(j), U(j + 1), down);
        }
    }
    Discretization d;
    d.K.resize(2 * n, 2 * n);
    d.K.setFromTriplets(t.begin(), t.end());
    d.W = W;
    return d;
}

Sparse shifted(const Discretization& d, double sigma)
{
    Sparse a = d.K;
    for (Eigen::Index i = 0; i < a.rows(); ++i) {
        a.coeffRef(i, i) -= sigma * d.W(i);
    }
    return a;
}

int count_below(const Discretization& d, double sigma)
{
    Ldlt ldlt(shifted(d, sigma));
    if (ldlt.info() != Eigen::Success) {
        throw ConvergenceError("fd oracle: factorisation failed");
    }
    // Sylvester: negative pivots of K - sigma W count eigenvalues below sigma.
    return static_cast<int>((ldlt.vectorD().array() < 0.0).count());
}

double lower_bound(const Discretization& d)
{
    // Gershgorin on W^{-1/2} K W^{-1/2}.
    double lo = std::numeric_limits<double>::infinity();
    Eigen::VectorXd radius = Eigen::VectorXd::Zero(d.K.rows());
    Eigen::VectorXd diag = Eigen::VectorXd::Zero(d.K.rows());
    for (int k = 0; k < d.K.outerSize(); ++k) {
        for (Sparse::InnerIterator it(d.K, k); it; ++it) {
            const double val = it.value() / std::sqrt(d.W(it.row()) * d.W(it.col()));
            if (it.row() == it.col()) {
                diag(it.row()) = val;
            } else {
                radius(it.row()) += std::abs(val);
            }
        }
    }
    for (Eigen::Index i = 0; i < diag.size(); ++i) {
        lo = std::min(lo, diag(i) - radius(i));
    }
    return lo;
}

} // namespace

void FdGrid::validate() const
{
    if (n_points < 500 || r_max < 2.0) {
        std::ostringstream os;
        os << "fd grid needs n_points >= 500 and r_max >= 2 (got " << n_points << ", " << r_max << ")";
        throw ConfigError(os.str());
    }
}

int fd_count_below(QuantumNumber q, const RingParams& p, const FdGrid& grid, double sigma)
{
    grid.validate();
    return count_below(build(q, p, grid), sigma);
}

std::vector<FdLevel> fd_spectrum(QuantumNumber q, const RingParams& p, const FdGrid& grid, int n_levels, bool vectors)
{
    grid.validate();
    p.validate();
    const auto d = build(q, p, grid);
    const int available = std::min(n_levels, count_below(d, p.v));
    const double floor = lower_bound(d);
    std::vector<FdLevel> out;
    double lo = floor;
    for (int k = 0; k < available; ++k) {
        double a = lo;
        double b = p.v;
        while (b - a > 1e-12 * std::max(1.0, std::abs(b))) {
            const double mid = 0.5 * (a + b);
            if (count_below(d, mid) > k) {
                b = mid;
            } else {
                a = mid;
            }
        }
        FdLevel level;
        level.e = 0.5 * (a + b);
        lo = a;
        if (vectors) {
            // Inverse iteration with a shift just below the eigenvalue.
            const double shift = level.e - 1e-7 * (1.0 + std::abs(level.e));
            Ldlt ldlt(shifted(d, shift));
            Eigen::VectorXd x = Eigen::VectorXd::Ones(d.K.rows());
            for (int it = 0; it < 4; ++it) {
                x = ldlt.solve(d.W.asDiagonal() * x);
                x /= std::sqrt(x.dot(d.W.asDiagonal() * x) * grid.spacing());
            }
            const int n = grid.n_points;
            level.u.resize(n);
            level.w.resize(n);
            for (int j = 0; j < n; ++j) {
                level.u(j) = x(2 * j);
                level.w(j) = x(2 * j + 1);
            }
        }
        out.push_back(std::move(level));
    }
    return out;
}

} // namespace qring::oracle
