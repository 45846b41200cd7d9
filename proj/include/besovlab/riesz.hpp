#pragma once

// Riesz transforms on the torus, a physical-space principal-value oracle,
// and the Poisson-kernel identities they satisfy.

#include <string>

#include "besovlab/extension.hpp"

namespace besovlab::riesz {

using spectral::Complex;
using spectral::Frequency;
using spectral::GridFunction;
using spectral::GridSpec;

/// Direction j in 1..n.
struct RieszIndex {
  int j = 1;
  static RieszIndex make(int j, int dim);
  int axis() const { return j - 1; }
};

/// -i xi_j/|xi|, 0 at xi = 0.
Complex riesz_symbol(int j, const Frequency& xi);

/// Multiplier form. Zero on the mean and on Nyquist indices along axis j.
GridFunction riesz_transform(const GridFunction& f, int j);

/// c_n Σ_{|y| >= epsilon} f(x-y) y_j/|y|^{n+1} cellvol with the kernel
/// periodized over image cells plus the far-field linear term.
GridFunction riesz_pv_oracle(const GridFunction& f, int j, double epsilon);

/// sup |R_j(∂_t P_t) - ∂_j P_t| on the grid.
double riesz_kernel_identity(const GridSpec& spec, double t, int j);
/// sup |R_i(∂_t∂_j P_t) - ∂_i(∂_j P_t)|.
double riesz_hessian_identity(const GridSpec& spec, double t, int i, int j);

struct PairingCheck {
  double lhs = 0.0;  // ∫ f g
  double rhs = 0.0;  // Σ_j ∫ R_j f R_j g
  double relative_error = 0.0;
  double mean_contribution = 0.0;  // f̂(0) ĝ(0)/|T|, what the pairing loses
};
PairingCheck parseval_pairing_check(const GridFunction& f, const GridFunction& g);

struct DecompositionCheck {
  /// sup |P_t*f - Σ_i R_i(P_t)(-·) * R_i f|
  double residual = 0.0;
  double relative = 0.0;  // residual / sup |P_t*f|
  /// sup |P_t*f - Σ_i R_i(P_t) * R_i f| / sup |P_t*f|; equals 2 for nonzero f.
  double literal_relative = 0.0;
};
/// f must be mean-zero.
DecompositionCheck poisson_decomposition_check(const GridFunction& f, double t);

/// |R_j f|_{B^{1,1}} / |f|_{B^{1,1}}; flagged when the denominator vanishes.
extension::RatioRow riesz_besov_ratio(const GridFunction& f, int j, const std::string& function_id = "f");

}  // namespace besovlab::riesz
