#pragma once

// Half-space fields u(x,t) built from boundary data, their mixed derivatives,
// the weighted seminorms ∫ t^a |∇^{m+1}u|^p dx dt, and the ratio experiments
// comparing them with Besov seminorms of the data.

#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <string>
#include <vector>

#include "besovlab/kernels.hpp"
#include "besovlab/spectral.hpp"

namespace besovlab::extension {

using kernels::KernelKind;
using spectral::GridFunction;
using spectral::GridSpec;
using spectral::MultiIndex;
using spectral::SpectralFunction;

/// Geometric t-cells [t_k, t_{k+1}] with t_k = t_min rho^k (the last node
/// clipped to t_max) and exact weights ∫_cell t^a dt.
class TQuadrature {
 public:
  static TQuadrature make(double a, double t_min, double t_max, double rho);
  /// t_min = 1e-3 (1e-3^{1/(a+1)} for a < 0), t_max = 2L, rho = 1.05.
  static TQuadrature defaults(double a, double L);

  double a() const { return a_; }
  double t_min() const { return t_min_; }
  double t_max() const { return t_max_; }
  double rho() const { return rho_; }
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  std::size_t cells() const { return weights_.size(); }
  /// Geometric midpoint of cell k.
  double midpoint(std::size_t k) const;
  double total_weight() const;

 private:
  double a_ = 0.0, t_min_ = 0.0, t_max_ = 0.0, rho_ = 0.0;
  std::vector<double> nodes_;
  std::vector<double> weights_;
};

struct WeightParams {
  int m = 0;
  double a = 0.0;
  double p = 1.0;

  static WeightParams make(int m, double a, double p);
};

/// A function on the half-space sampled on the boundary grid for each t.
class HalfSpaceField {
 public:
  virtual ~HalfSpaceField() = default;
  virtual const GridSpec& spec() const = 0;
  /// ∂^beta ∂_t^l F(·, t).
  virtual GridFunction derivative(const MultiIndex& alpha, double t) const = 0;
  GridFunction value(double t) const { return derivative(MultiIndex{}, t); }
  /// Bound on sup_{0 < t <= t_min} ‖∂^alpha F(t)‖_p. The default reads the
  /// value at t_min, which is exact for fields constant near t = 0.
  virtual double head_sup(const MultiIndex& alpha, double p, double t_min) const;
  /// Bound on ∫_{t_max}^∞ t^a ‖∂^alpha F(t)‖_p^p dt. The default is 0 when
  /// the field vanishes beyond t_max and throws otherwise.
  virtual double tail_integral(const MultiIndex& alpha, double a, double p, double t_max) const;
  /// F vanishes for t >= support_end().
  virtual double support_end() const { return std::numeric_limits<double>::infinity(); }
};

/// u = K_t * f for the Gauss-Weierstrass or Poisson kernel, evaluated by
/// multipliers on the transform of f. Values at each t are cached.
class ExtensionField : public HalfSpaceField {
 public:
  ExtensionField(GridFunction source, KernelKind kind);

  const GridSpec& spec() const override { return source_.spec(); }
  const GridFunction& source() const { return source_; }
  KernelKind kind() const { return kind_; }
  GridFunction derivative(const MultiIndex& alpha, double t) const override;
  /// ‖g(0)‖_p plus the spectral bound on ‖g(t) - g(0)‖_p for t <= t_min.
  double head_sup(const MultiIndex& alpha, double p, double t_min) const override;
  /// Per-mode bound with the multiplier decay in t integrated in closed form.
  double tail_integral(const MultiIndex& alpha, double a, double p, double t_max) const override;

 private:
  GridFunction source_;
  KernelKind kind_;
  SpectralFunction spectrum_;
  mutable std::mutex mutex_;
  mutable std::map<double, GridFunction> cache_;
};

GridFunction extend(const GridFunction& f, KernelKind kind, double t);
GridFunction extension_derivative(const GridFunction& f, KernelKind kind, const MultiIndex& alpha,
                                  double t);

/// One component ∂^alpha F of a gradient tensor with its multiplicity.
struct TensorEntry {
  MultiIndex alpha;
  double multiplicity = 1.0;
};

/// All (beta, l) with |beta| + l = order, weighted by order!/(beta! l!).
std::vector<TensorEntry> gradient_entries(int order, int dim);

/// sqrt(Σ multiplicity (∂^alpha F)^2) over the given entries.
GridFunction tensor_norm(const HalfSpaceField& field, const std::vector<TensorEntry>& entries, double t);
GridFunction gradient_tensor_norm(const GridFunction& f, KernelKind kind, int order, double t);

struct WeightedIntegral {
  double interior = 0.0;    // Σ_k weight_k ‖|T|(t̄_k)‖_p^p
  double head_bound = 0.0;  // (0, t_min)
  double tail_bound = 0.0;  // (t_max, ∞)
  double p = 1.0;

  double total() const { return interior + head_bound + tail_bound; }
  double value() const;  // total^{1/p}
};

/// ∫ t^a ‖ tensor_norm(entries) ‖_p^p dt with head and tail bounds. Throws
/// ResolutionError when the bounds exceed `tolerance` times the interior sum.
WeightedIntegral weighted_integral(const HalfSpaceField& field, const std::vector<TensorEntry>& entries,
                                   double p, const TQuadrature& tq, double tolerance = 0.01);

/// (∫ t^a |∇^{m+1}u|^p dx dt)^{1/p} for u the extension of f.
WeightedIntegral weighted_seminorm(const GridFunction& f, KernelKind kind, const WeightParams& wp,
                                   const TQuadrature& tq);

/// ‖K_t * f - f‖_1 for each t.
std::vector<double> trace_limit(const GridFunction& f, KernelKind kind, const std::vector<double>& ts);

struct RatioRow {
  std::string experiment;
  std::string function_id;
  int m = 0;
  double a = 0.0;
  double p = 1.0;
  KernelKind kind = KernelKind::GaussWeierstrass;
  double lhs = 0.0;
  double rhs = 0.0;
  double ratio = 0.0;  // NaN when flagged
  bool flagged = false;
  double head_bound = 0.0;
  double tail_bound = 0.0;
  double boundary_tail = 0.0;
};

struct RatioReport {
  std::vector<RatioRow> rows;

  void add(RatioRow row) { rows.push_back(std::move(row)); }
  /// Largest ratio over unflagged rows.
  double constant() const;
};

/// LHS = ∫ t^a |∇^{m+1}u| dx dt, RHS = |f|_{B^{m-a}_{1,1}}, for -1 < a < m.
RatioRow main_estimate_ratio(const GridFunction& f, const WeightParams& wp,
                             KernelKind kind = KernelKind::GaussWeierstrass,
                             const std::string& function_id = "f");
RatioRow main_estimate_ratio(const GridFunction& f, const WeightParams& wp, KernelKind kind,
                             const TQuadrature& tq, const std::string& function_id = "f");

/// LHS = ∫ t^a |∇^{m+1}u|^p dx dt, RHS = |f|^p_{B^{m+1-(a+1)/p}_{p,p}}.
RatioRow p_estimate_ratio(const GridFunction& f, const WeightParams& wp,
                          KernelKind kind = KernelKind::GaussWeierstrass,
                          const std::string& function_id = "f");
RatioRow p_estimate_ratio(const GridFunction& f, const WeightParams& wp, KernelKind kind,
                          const TQuadrature& tq, const std::string& function_id = "f");

struct CrossTerm {
  double lhs = 0.0;  // ∫∫ |∂_i ∂_t u|
  double rhs = 0.0;  // max_j ∫∫ |∂_i ∂_j u|
  double ratio = 0.0;
  bool flagged = false;
};

/// Poisson extension, a = 0, axis i counted from 0.
CrossTerm cross_term_check(const GridFunction& f, int i = 0);
CrossTerm cross_term_check(const GridFunction& f, int i, const TQuadrature& tq);

/// sup |∂_i∂_j u - ½ Σ_h ∂_i∂_j K_t(h) [f(x+h) + f(x-h) - 2f(x)] cellvol| / sup |∂_i∂_j u|.
/// The Poisson kernel is sampled as t^{-n-2} ∂_i∂_j P_1(h/t).
double uspenskii_ansatz_residual(const GridFunction& f, KernelKind kind, int i, int j, double t);
/// Absolute sup difference of the two sides.
double uspenskii_ansatz_difference(const GridFunction& f, KernelKind kind, int i, int j, double t);

}  // namespace besovlab::extension
