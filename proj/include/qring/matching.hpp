#pragma once

/// \file matching.hpp
///
/// Continuity system at r = r_i and r = 1, its determinant, and bound states.

#include <functional>
#include <vector>

#include <Eigen/Dense>

#include "qring/model.hpp"
#include "qring/radial.hpp"

namespace qring::matching {

/// Coupled: the full 8x8 system (a > 0). SpinUp/SpinDown: the 4x4 blocks
/// the system splits into at a = 0.
enum class Block { Coupled, SpinUp, SpinDown };

const char* block_name(Block b);

/// Columns (c1+, c1-, c21+, c21-, c22+, c22-, c3+, c3-) for the coupled
/// system, (c1, c21, c22, c3) for a spin block. Rows are f, f', g, g' at r_i
/// then at 1 (f, f' only for a spin block).
struct MatchingMatrix {
    Eigen::MatrixXcd entries;      // raw columns times column_scales
    Eigen::VectorXd column_scales; // 1 / max |entry| of each raw column
    Block block = Block::Coupled;
    int conjugate_pairs = 0;
};

MatchingMatrix assemble(QuantumNumber q, double e, const RingParams& p, Block block = Block::Coupled);

inline constexpr double imag_det_tol = 1e-10;
inline constexpr double singular_tol = 1e-8;

struct DetValue {
    double value = 0.0;
    double imag_ratio = 0.0; // |Im det| over the product of column norms
};

/// det(entries) / (-2i)^{conjugate_pairs}; real up to round-off.
DetValue det_value(const MatchingMatrix& mm);

/// Real part of det_value; throws ImaginaryDetTooLarge past imag_det_tol.
double scaled_det(const MatchingMatrix& mm);

/// scaled_det(assemble(...)), stepping e by 1e-9 (1 + |e|) off degenerate denominators.
/// `e` is updated to the point actually evaluated.
double det_at(QuantumNumber q, double& e, const RingParams& p, Block block);

struct Bracket {
    double lo = 0.0, hi = 0.0;
    double det_lo = 0.0, det_hi = 0.0;
};

struct ScanResult {
    std::vector<Bracket> brackets;
    std::vector<double> suspects; // near-zero local minima of |det| without a sign change
    int evaluations = 0;
};

/// Energies where the determinant changes sign without a level: two basis
/// columns coincide (zero exponent discriminant) or a g denominator
/// vanishes. Sign changes across these points are discarded.
std::vector<double> artifact_points(const RingParams& p, Block block);

ScanResult scan_levels(QuantumNumber q, const RingParams& p, double e_lo, double e_hi, double de,
                       Block block = Block::Coupled);

/// Safeguarded bracketing root of f on [lo, hi] (TOMS 748).
double refine_bracket(const std::function<double(double)>& f, double lo, double hi, double f_lo, double f_hi);

double refine_root(const Bracket& br, QuantumNumber q, const RingParams& p, Block block = Block::Coupled);

struct BoundState {
    int m = 0;
    double e = 0.0;
    int level_index = 0;
    Block block = Block::Coupled;
    RingParams params;
    std::vector<cplx> coeffs; // on the unscaled basis, normalised and phase-fixed
    double norm_check = 0.0;
    double det_residual = 0.0;
    double imag_det_ratio = 0.0;
    double continuity_residual = 0.0;
    double realness_residual = 0.0;
    double sigma_ratio = 0.0; // smallest over largest singular value at e
    double r_cut = 0.0;
};

BoundState solve_state(QuantumNumber q, double e_root, const RingParams& p, Block block = Block::Coupled);

/// Smallest singular value over the largest of the scaled matrix.
double singular_ratio(QuantumNumber q, double e, const RingParams& p, Block block);

struct SolveOptions {
    double e_lo = 0.0;
    double e_hi = -1.0; // negative: up to v
    double de = 0.05;
    int max_levels = 0; // 0: all levels in the window
};

/// All bound states for m in the window, ascending, with level indices.
/// For a = 0 both spin blocks are solved and merged.
std::vector<BoundState> solve_levels(QuantumNumber q, const RingParams& p, const SolveOptions& opts = {});

/// u, w at radius r (complex; imaginary parts vanish up to realness_residual).
radial::UW wavefunction(const BoundState& s, double r);

} // namespace qring::matching
