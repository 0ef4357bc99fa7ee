#pragma once

/// \file oracle.hpp
///
/// Finite-difference eigen-solver for the coupled radial equations, kept
/// independent of the hypergeometric basis so it can cross-check it.

#include <vector>

#include <Eigen/Core>

#include "qring/model.hpp"

namespace qring::oracle {

/// Cell-centred grid r_j = (j + 1/2) h, h = r_max / n_points, with u = w = 0
/// at r_max. The origin is a cell face, so no point sits on r = 0.
struct FdGrid {
    int n_points = 4000;
    double r_max = 3.0;

    double spacing() const { return r_max / n_points; }
    double radius(int j) const { return (j + 0.5) * spacing(); }
    void validate() const;
};

struct FdLevel {
    double e = 0.0;
    Eigen::VectorXd u; // at grid radii, normalised: sum h r (u^2 + w^2) = 1
    Eigen::VectorXd w;
};

/// Number of eigenvalues below sigma.
int fd_count_below(QuantumNumber q, const RingParams& p, const FdGrid& grid, double sigma);

/// Lowest n_levels eigenvalues below v, ascending, with eigenvectors if requested.
std::vector<FdLevel> fd_spectrum(QuantumNumber q, const RingParams& p, const FdGrid& grid, int n_levels,
                                 bool vectors = true);

} // namespace qring::oracle
