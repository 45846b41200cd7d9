#pragma once

// Periodic grids on the torus [0,L)^n, n in {1,2}, and the Fourier multiplier
// calculus every other module is built on.
//
// Transform convention: f^(xi) = \int f(x) e^{-2 pi i x.xi} dx with xi = k/L,
// discretized so that coeff(0) = mean(f) * L^n.

#include <array>
#include <complex>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <span>
#include <vector>

namespace besovlab::spectral {

using Point = std::array<double, 2>;
using Frequency = std::array<double, 2>;
using Complex = std::complex<double>;

inline constexpr int kMaxDerivativeOrder = 4;

class GridSpec {
 public:
  /// Validating factory: dim in {1,2}, N a power of two with N >= 8, L > 0.
  static GridSpec make(int dim, int samples_per_axis, double length);

  int dim() const { return dim_; }
  int samples_per_axis() const { return n_; }
  double length() const { return length_; }
  std::size_t size() const;
  double step() const { return length_ / n_; }
  double cell_volume() const;
  double volume() const;

  /// Signed wavenumber of FFT index i along one axis, in [-N/2, N/2).
  int wavenumber(int i) const { return i < n_ / 2 ? i : i - n_; }
  /// Node coordinate in the centered window [-L/2, L/2).
  double centered_coordinate(int i) const { return wavenumber(i) * step(); }
  /// Axis indices of flat index `idx` (axis 0 is the slow one).
  std::array<int, 2> axis_indices(std::size_t idx) const;
  Point centered_point(std::size_t idx) const;
  Frequency frequency(std::size_t idx) const;
  std::size_t flat_index(int i0, int i1) const;

  GridSpec refined() const { return make(dim_, 2 * n_, length_); }

  bool operator==(const GridSpec&) const = default;

 private:
  GridSpec(int dim, int n, double length) : dim_(dim), n_(n), length_(length) {}
  int dim_ = 1;
  int n_ = 8;
  double length_ = 1.0;
};

/// Real samples of a periodic function; value index k sits at x = (L/N) k.
class GridFunction {
 public:
  GridFunction(GridSpec spec, std::vector<double> values);
  static GridFunction zeros(const GridSpec& spec);
  static GridFunction constant(const GridSpec& spec, double c);
  /// Samples `fn` at the centered coordinates of every node.
  static GridFunction sample(const GridSpec& spec, const std::function<double(const Point&)>& fn);

  const GridSpec& spec() const { return spec_; }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::size_t size() const { return values_.size(); }

  double integral() const;
  double mean() const { return integral() / spec_.volume(); }
  double max_abs() const;

  GridFunction operator+(const GridFunction& other) const;
  GridFunction operator-(const GridFunction& other) const;
  GridFunction operator*(double c) const;
  GridFunction& operator+=(const GridFunction& other);
  GridFunction& operator-=(const GridFunction& other);
  /// Pointwise product.
  GridFunction times(const GridFunction& other) const;
  GridFunction minus_mean() const;

  std::vector<double>& mutable_values() { return values_; }

 private:
  void check_compatible(const GridFunction& other) const;
  GridSpec spec_;
  std::vector<double> values_;
};

/// Fourier coefficients in FFT index order.
class SpectralFunction {
 public:
  SpectralFunction(GridSpec spec, std::vector<Complex> coeffs);

  const GridSpec& spec() const { return spec_; }
  std::span<const Complex> coeffs() const { return coeffs_; }
  Complex operator[](std::size_t i) const { return coeffs_[i]; }
  std::size_t size() const { return coeffs_.size(); }
  /// Coefficient at signed wavenumber (k0, k1); k1 ignored when n=1.
  Complex at(int k0, int k1 = 0) const;

  SpectralFunction operator+(const SpectralFunction& other) const;
  SpectralFunction operator*(Complex c) const;
  SpectralFunction times(const SpectralFunction& other) const;

 private:
  GridSpec spec_;
  std::vector<Complex> coeffs_;
};

struct MultiIndex {
  std::array<int, 2> beta{0, 0};
  int l = 0;

  int space_order() const { return beta[0] + beta[1]; }
  int order() const { return space_order() + l; }
  bool operator==(const MultiIndex&) const = default;
  auto operator<=>(const MultiIndex&) const = default;
};

/// Validates |beta| + l <= 4 and, for a 1-d grid, beta[1] == 0.
void check_multi_index(const MultiIndex& alpha, int dim);

using Symbol = std::function<Complex(const Frequency&)>;

SpectralFunction forward_transform(const GridFunction& f);
GridFunction inverse_transform(const SpectralFunction& F);

/// coeffs(k) <- mult(k/L) coeffs(k). On a Nyquist index the symbol is
/// averaged over the +-N/2 representatives, which zeroes odd symbols there
/// and keeps real inputs real. Throws PreconditionError on non-finite values.
SpectralFunction apply_multiplier(const SpectralFunction& F, const Symbol& mult);

/// (2 pi i xi)^beta.
Complex derivative_symbol(const std::array<int, 2>& beta, const Frequency& xi);
GridFunction partial_derivative(const GridFunction& f, const MultiIndex& alpha);
/// Derivative of order k along the unit direction `dir`: symbol (2 pi i xi.dir)^k.
GridFunction directional_derivative(const GridFunction& f, const Point& dir, int k);

/// (sum |f|^p cellvol)^{1/p}; p = infinity gives max |f|.
double lp_norm(const GridFunction& f, double p);

/// x -> f(lambda x) for lambda = 2^j, represented on the torus of period L/lambda
/// with the same samples.
GridFunction dilate(const GridFunction& f, double lambda);

/// Resamples a band-limited function on a grid with the same L and a
/// different N (zero padding or truncation in frequency).
GridFunction resample(const GridFunction& f, int samples_per_axis);

/// Largest |f| over nodes in the outermost cell layer of the centered window.
double boundary_tail(const GridFunction& f);

/// Discrete circular convolution sum_y a(x-y) b(y) cellvol, evaluated via FFT.
GridFunction circular_convolution(const GridFunction& a, const GridFunction& b);

}  // namespace besovlab::spectral
