#pragma once

// Inhomogeneous liftings: cutoff of the heat extension, the f(x)φ(lt)
// profiles, moment lifts t^j/j! (W_t * f_j), the composite lifting with
// prescribed normal derivatives, and the cutoff approximation for a > m.

#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "besovlab/extension.hpp"
#include "besovlab/profiles.hpp"

namespace besovlab::liftings {

using extension::HalfSpaceField;
using extension::TQuadrature;
using spectral::GridFunction;
using spectral::GridSpec;
using spectral::MultiIndex;

using FieldPtr = std::shared_ptr<const HalfSpaceField>;

/// A scalar factor τ(t) with derivatives to order 4.
struct TimeProfile {
  std::function<double(double t, int k)> derivative;
  /// sup over 0 < t <= t_min of |τ^{(k)}(t)|.
  std::function<double(double t_min, int k)> head_sup;
  double support_end = std::numeric_limits<double>::infinity();
  /// τ = t^d/d! when d >= 0.
  int monomial_degree = -1;

  /// ψ(scale t).
  static TimeProfile cutoff(double scale = 1.0);
  /// t^d/d!.
  static TimeProfile monomial(int d);
  /// t^d/d! ψ(scale t).
  static TimeProfile monomial_cutoff(int d, double scale);
};

/// τ(t) G(x,t).
class ProductField : public HalfSpaceField {
 public:
  ProductField(TimeProfile profile, FieldPtr base);
  const GridSpec& spec() const override { return base_->spec(); }
  GridFunction derivative(const MultiIndex& alpha, double t) const override;
  double head_sup(const MultiIndex& alpha, double p, double t_min) const override;
  double tail_integral(const MultiIndex& alpha, double a, double p, double t_max) const override;
  double support_end() const override;

 private:
  TimeProfile profile_;
  FieldPtr base_;
};

/// g(x), constant in t.
class BoundaryDataField : public HalfSpaceField {
 public:
  explicit BoundaryDataField(GridFunction g) : g_(std::move(g)) {}
  const GridSpec& spec() const override { return g_.spec(); }
  GridFunction derivative(const MultiIndex& alpha, double t) const override;
  double head_sup(const MultiIndex& alpha, double p, double t_min) const override;

 private:
  GridFunction g_;
};

class SumField : public HalfSpaceField {
 public:
  explicit SumField(std::vector<FieldPtr> terms);
  const GridSpec& spec() const override { return terms_.front()->spec(); }
  GridFunction derivative(const MultiIndex& alpha, double t) const override;
  double head_sup(const MultiIndex& alpha, double p, double t_min) const override;
  double tail_integral(const MultiIndex& alpha, double a, double p, double t_max) const override;
  double support_end() const override;

 private:
  std::vector<FieldPtr> terms_;
};

/// j-th central difference quotient in t at t_min with step t_min/4.
GridFunction normal_derivative_trace(const HalfSpaceField& field, int j, double t_min);

struct LiftingResult {
  FieldPtr field;
  int m = 0;
  double a = 0.0;
  double p = 1.0;
  std::map<int, GridFunction> declared_traces;
  TQuadrature quadrature;
  /// (∫ t^a |F|^p)^{1/p}; NaN when not assembled.
  double lp_term = std::numeric_limits<double>::quiet_NaN();
  /// |F|_{W_a^{j,p}} for j = 1..m+1 (index j-1); NaN entries were not assembled.
  std::vector<double> seminorms;
  double head_bound = 0.0;
  double tail_bound = 0.0;

  /// lp_term + Σ seminorms.
  double norm() const;
  /// ‖measured - declared‖_1 / ‖declared‖_1 (absolute when the declared trace is 0),
  /// with the measured trace from normal_derivative_trace at the quadrature's t_min.
  double trace_error(int j) const;
  double max_trace_error() const;
};

/// Orders 0..m+1 of the Triebel norm of `field` on the quadrature.
void assemble_norm(LiftingResult& result);

struct CutoffExtension {
  LiftingResult lifting;
  double trace_error = 0.0;   // ‖F(t_min) - f‖_1
  double l1_bound = 0.0;      // (∫_0^2 t^a dt) ‖f‖_1
  double besov_norm = 0.0;    // ‖f‖_1 + |f|_{B^{m-a}_{1,1}}
  double remark_lhs = 0.0;    // a = 0 evaluation: |F|_{W^{m+1,1}} + ‖F‖_{L^1}
  double constant = 0.0;      // norm / besov_norm
};

/// F = ψ(t) (W_t * f), -1 < a <= m.
CutoffExtension cutoff_extension(const GridFunction& f, int m, double a);

/// ∫_0^∞ r^e |ψ^{(i)}(r)| dr.
double profile_moment(int i, double e);

struct DecayFit {
  double slope = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
};
/// Least squares of log(value) against log(param).
DecayFit fit_decay(const std::vector<double>& params, const std::vector<double>& values);

struct DecayRow {
  std::string construction;
  double param = 0.0;  // l or j
  std::string bucket;
  double value = 0.0;
};

struct MironescuLift {
  LiftingResult lifting;
  double l = 1.0;
  double beta_part = 0.0;       // Σ_{|beta|>=1} ∫∫ t^m |∂^beta ∂_t^i v_l|
  double beta_part_bound = 0.0; // Σ l^{-(m-i+1)} ‖∂^beta f‖_1 ∫ r^m |ψ^{(i)}|
  double beta0_part = 0.0;      // ∫∫ t^m |∂_t^{m+1} v_l|
  double beta0_formula = 0.0;   // ‖f‖_1 ∫ r^m |ψ^{(m+1)}|
};

/// v_l = f(x) ψ(l t) for the case a = m.
MironescuLift mironescu_lift(const GridFunction& f, int m, double l);

struct DecayStudy {
  std::vector<DecayRow> rows;
  std::map<std::string, DecayFit> fits;
};
DecayStudy mironescu_decay(const GridFunction& f, int m, const std::vector<double>& ls);

struct NormalTraceLift {
  LiftingResult lifting;
  double l = 1.0;
  /// Direct ∫∫ t^k |∂^beta ∂_t^{m+1-|beta|} v_l| summed per |beta| = 1..m+1.
  std::map<int, double> buckets;
  std::map<int, double> bucket_bounds;  // the right side per |beta|
  double beta0_part = 0.0;              // ∫∫ t^k |∂_t^{m+1} v_l|
  double beta0_bound = 0.0;             // ‖g‖_1 Σ_i l^i/l^{k+(i-1-k)_+ +1} ∫ r^{k+(i-1-k)_+}|ψ^{(i)}|
};

/// v_l = g(x) t^{m-k}/(m-k)! ψ(l t), 0 <= k < m, weight t^k.
NormalTraceLift normal_trace_lift(const GridFunction& g, int m, int k, double l);
DecayStudy normal_trace_decay(const GridFunction& g, int m, int k, const std::vector<double>& ls);

struct MomentLift {
  LiftingResult lifting;
  double seminorm = 0.0;  // |u_j|_{W_a^{m+1,1}}
  double besov = 0.0;     // |f_j|_{B^{m-a-j}_{1,1}}
  double ratio = 0.0;
};

/// u_j = t^j/j! (W_t * f_j); the seminorm uses weight t^a and order m+1.
MomentLift moment_lift(const GridFunction& f_j, int j, int m, double a);

struct CompositeLift {
  LiftingResult lifting;
  std::vector<GridFunction> corrected_data;  // datum actually lifted at each order
  double data_norm = 0.0;  // Σ_j |f_j|_{B^{m-a-j,1}} (+ ‖f_{m-k}‖_1 for integer a)
  double constant = 0.0;   // norm / data_norm
};

/// F = ψ(t) Σ v_j with Tr ∂_t^j F = f_j. For integer a = k the last datum
/// (j = m - k) only needs to be integrable and is lifted by normal_trace_lift.
/// Trailing data may be omitted; their traces are then not prescribed.
CompositeLift composite_lift(const std::vector<GridFunction>& data, int m, double a);

struct GrisvardRow {
  double j = 1.0;
  double distance = 0.0;           // ‖∇^{m+1}(u - v_j)‖_{L^1_a}
  double relative = 0.0;           // distance / ‖∇^{m+1}u‖_{L^1_a}
  std::vector<double> buckets;     // index i = 0..m+1
};

struct GrisvardStudy {
  double reference = 0.0;
  std::vector<GrisvardRow> rows;
  std::map<int, DecayFit> bucket_fits;
};

/// v_j = u (1 - ψ(j t)); requires a > m.
GrisvardRow grisvard_approximation(const LiftingResult& source, double a, double j);
GrisvardStudy grisvard_study(const LiftingResult& source, double a, const std::vector<double>& js);

}  // namespace besovlab::liftings
