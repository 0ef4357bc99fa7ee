#pragma once

/// \file radial.hpp
///
/// Closed-form radial solutions in the three constant-potential regions.
///
/// With xi = b r^2 the radial functions are written as
///   u = exp(-xi/2) xi^{|m|/2} f,   w = exp(-xi/2) xi^{|m+1|/2} (a / 2 sqrt(b)) g.
/// The factor a / (2 sqrt b) is common to every g and is left out of the
/// basis values below; assemble_uw expects the full g.

#include "qring/model.hpp"
#include "qring/specfun.hpp"

namespace qring::radial {

enum class Regime { RealPair, ConjugatePair };

struct Exponents {
    cplx k_plus;
    cplx k_minus;
    double discriminant = 0.0;
    Regime regime = Regime::RealPair;
};

/// k^pm = (eps + a^2/2 pm sqrt(a^2 (eps + a^2/4) + 16 b^2 (s - 1/2)^2)) / (4b),
/// eps = e - v outside the ring and e inside it.
Exponents exponents(double eps, const RingParams& p);

/// One basis solution: f, g and their r-derivatives.
struct BasisColumn {
    cplx f, df, g, dg;
};

struct BasisEval {
    BasisColumn plus;
    BasisColumn minus;
};

struct Region2Eval {
    BasisEval first;  // Kummer M type
    BasisEval second; // Tricomi U type
};

/// Denominator -k + eps/(4b) + s - 1/2 shared by the g components.
cplx denominator(cplx k, double eps, const RingParams& p);

/// |D| below this (times max(1, |k|)) raises DegenerateDenominator.
inline constexpr double degenerate_denominator_tol = 1e-10;

BasisEval region1_basis(QuantumNumber q, double e, const RingParams& p, double r);
Region2Eval region2_basis(QuantumNumber q, double e, const RingParams& p, double r);
BasisEval region3_basis(QuantumNumber q, double e, const RingParams& p, double r);

/// Normalisation used for the second-kind functions. Columns built with a
/// different choice differ by a constant factor or by a multiple of the
/// first-kind column of the same region, which leaves the matching
/// determinant's zeros alone.
specfun::TricomiScale inner_second_scale(cplx alpha);
specfun::TricomiScale outer_scale(cplx alpha);

/// Spin-resolved solutions for a = 0, where the two components decouple.
enum class Spin { Up, Down };

struct SpinColumn {
    double f, df;
};

/// First parameter of the hypergeometric functions for a decoupled spin.
double decoupled_alpha(QuantumNumber q, Spin spin, double eps, const RingParams& p);

/// Basis for one decoupled spin component at radius r. Only the members
/// valid for the region containing r are meaningful.
SpinColumn decoupled_region1(QuantumNumber q, Spin spin, double e, const RingParams& p, double r);
SpinColumn decoupled_region2(QuantumNumber q, Spin spin, double e, const RingParams& p, double r, bool second);
SpinColumn decoupled_region3(QuantumNumber q, Spin spin, double e, const RingParams& p, double r);

struct UW {
    cplx u, w;
};

/// u = exp(-b r^2/2) (sqrt(b) r)^{|m|} f and w = exp(-b r^2/2) (sqrt(b) r)^{|m+1|} g.
UW assemble_uw(QuantumNumber q, const RingParams& p, cplx f, cplx g, double r);

/// Starting truncation radius for the outer region: 1 + 8/sqrt(v - e) clamped to [1.5, 6].
double initial_cutoff(double e, const RingParams& p);

} // namespace qring::radial
