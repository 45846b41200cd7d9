#pragma once

// Finite differences and homogeneous Besov seminorms on the periodic grid,
// together with the two divergence counterexamples for B^{1,1}.

#include <array>
#include <limits>
#include <vector>

#include "besovlab/spectral.hpp"

namespace besovlab::besov {

using spectral::GridFunction;
using spectral::GridSpec;
using spectral::Point;

/// Offset h = steps * (L/N) per axis and difference order k.
struct DifferenceSpec {
  std::array<int, 2> steps{1, 0};
  int order = 1;
};

/// Iterated Δ_h(Δ_h(...f)).
GridFunction difference(const GridFunction& f, const DifferenceSpec& d);
/// sum_i (-1)^{k-i} C(k,i) f(x + i h).
GridFunction binomial_difference(const GridFunction& f, const DifferenceSpec& d);

struct BesovParams {
  double s = 1.0;
  double p = 1.0;
  double q = 1.0;

  static BesovParams make(double s, double p, double q);
  /// Derivative order ℓ: 0 for s <= 1, max{m in N : m < s} otherwise.
  int derivative_order() const;
  /// floor(s - ℓ) + 1.
  int difference_order() const;
  double reduced_smoothness() const { return s - derivative_order(); }
};

enum class OriginCell { Include, Omit };

struct BesovOptions {
  OriginCell origin = OriginCell::Include;
  /// Lattice offsets with |h| below this are dropped (and the origin cell with them).
  double floor = 0.0;
};

struct Shell {
  double r_min = 0.0;
  double r_max = 0.0;
  double contribution = 0.0;
};

struct SeminormReport {
  double value = 0.0;     // integral^{1/q}
  double integral = 0.0;  // sum of the shell contributions
  double cutoff_low = 0.0;
  double cutoff_high = 0.0;
  double origin_correction = 0.0;
  std::vector<Shell> shells;
};

/// Lattice discretization of (∫ ‖Δ_h^k ∂^α f‖_p^q dh/|h|^{n+sq})^{1/q} over
/// |h| <= L/2, summed over |α| = ℓ. The cell |h| < Δx/2 is added from the
/// Taylor expansion of the difference unless omitted. q = ∞ gives the
/// sup over h of ‖Δ_h^k ∂^α f‖_p / |h|^s.
SeminormReport besov_seminorm(const GridFunction& f, const BesovParams& bp,
                              const BesovOptions& options = {});

/// ∫_0^{L/2} sup_{|h|<=r} ‖Δ_h^2 f‖_1 dr/r^2, integrated exactly on the
/// step function of lattice radii.
double besov_sup_seminorm_111(const GridFunction& f, OriginCell origin = OriginCell::Include);

/// sup over lattice h of ‖Δ_h^k f‖_p / |h|^s.
double zygmund_seminorm(const GridFunction& f, double s, int k,
                        double p = std::numeric_limits<double>::infinity());

/// Samples of the indicator of [0,1)^n.
GridFunction indicator_counterexample(const GridSpec& spec);

struct DivergenceStudy {
  std::vector<double> floors;
  std::vector<double> values;
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};

struct LinearFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
LinearFit fit_line(const std::vector<double>& x, const std::vector<double>& y);

/// Truncated seminorm for each floor and its least-squares slope in log(1/floor).
DivergenceStudy divergence_study(const GridFunction& f, const BesovParams& bp,
                                 const std::vector<double>& floors);

/// φ(x) times the (k-1)-fold integral in x_n from -1 of χ_{s>0} φ(x', s), with
/// φ the product bump equal to 1 on [0,1]^n; integrals are cumulative sums.
GridFunction higher_counterexample_psi(const GridSpec& spec, int k);
/// (k-1)-fold forward difference quotient along the last axis.
GridFunction normal_difference_quotient(const GridFunction& f, int order);

struct FtcRow {
  std::array<int, 2> steps{0, 0};
  double h = 0.0;
  double lhs = 0.0;  // ‖Δ_h^2 f‖_1
  double rhs = 0.0;  // |h|^2 ‖∇^2 f‖_1
};

struct FtcEmbedding {
  std::vector<FtcRow> rows;
  int violations = 0;
  double max_ratio = 0.0;
  double hessian_l1 = 0.0;
  double f_l1 = 0.0;
  double seminorm = 0.0;       // |f|_{B^{1,1}}
  double constant = 0.0;       // seminorm / (‖∇²f‖_1 + ‖f‖_1)
  double large_h_part = 0.0;   // lattice contribution from |h| >= 1
  double large_h_bound = 0.0;  // 4 ‖f‖_1 ∫_{1<=|h|<=L/2} |h|^{-n-1} dh
};

/// Checks ‖Δ_h^2 f‖_1 <= |h|^2 ‖∇^2 f‖_1 for every lattice h with |h| <= L/2,
/// with the Hessian norm taken pointwise in Frobenius form.
FtcEmbedding ftc_embedding_check(const GridFunction& f);

}  // namespace besovlab::besov
