#include "besovlab/spectral.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <mutex>
#include <numbers>
#include <tuple>

#include "besovlab/errors.hpp"

namespace besovlab::spectral {

namespace {

struct FftwBuffer {
  explicit FftwBuffer(std::size_t n)
      : data(static_cast<fftw_complex*>(fftw_malloc(sizeof(fftw_complex) * n))) {
    if (data == nullptr) throw std::bad_alloc();
  }
  ~FftwBuffer() { fftw_free(data); }
  FftwBuffer(const FftwBuffer&) = delete;
  FftwBuffer& operator=(const FftwBuffer&) = delete;
  fftw_complex* data;
};

// Plans are created once per (dim, N, sign) and reused through the new-array
// execute interface, which is safe to call concurrently.
fftw_plan cached_plan(int dim, int n, int sign) {
  static std::mutex mutex;
  static std::map<std::tuple<int, int, int>, fftw_plan> plans;
  std::lock_guard<std::mutex> lock(mutex);
  auto key = std::make_tuple(dim, n, sign);
  auto it = plans.find(key);
  if (it != plans.end()) return it->second;
  std::size_t total = dim == 1 ? static_cast<std::size_t>(n) : static_cast<std::size_t>(n) * n;
  FftwBuffer in(total), out(total);
  fftw_plan plan = dim == 1 ? fftw_plan_dft_1d(n, in.data, out.data, sign, FFTW_ESTIMATE)
                            : fftw_plan_dft_2d(n, n, in.data, out.data, sign, FFTW_ESTIMATE);
  if (plan == nullptr) throw std::runtime_error("fftw planning failed");
  plans.emplace(key, plan);
  return plan;
}

std::vector<Complex> run_fft(const GridSpec& spec, const std::vector<Complex>& input, int sign) {
  std::size_t total = spec.size();
  FftwBuffer in(total), out(total);
  for (std::size_t i = 0; i < total; ++i) {
    in.data[i][0] = input[i].real();
    in.data[i][1] = input[i].imag();
  }
  fftw_execute_dft(cached_plan(spec.dim(), spec.samples_per_axis(), sign), in.data, out.data);
  std::vector<Complex> result(total);
  for (std::size_t i = 0; i < total; ++i) result[i] = Complex(out.data[i][0], out.data[i][1]);
  return result;
}

bool is_power_of_two(int n) { return n > 0 && (n & (n - 1)) == 0; }

}  // namespace

GridSpec GridSpec::make(int dim, int samples_per_axis, double length) {
  require(dim == 1 || dim == 2, "dim must be 1 or 2");
  require(is_power_of_two(samples_per_axis) && samples_per_axis >= 8,
          "N must be a power of two with N >= 8");
  require(std::isfinite(length) && length > 0.0, "L must be positive");
  return GridSpec(dim, samples_per_axis, length);
}

std::size_t GridSpec::size() const {
  return dim_ == 1 ? static_cast<std::size_t>(n_) : static_cast<std::size_t>(n_) * n_;
}

double GridSpec::cell_volume() const { return dim_ == 1 ? step() : step() * step(); }

double GridSpec::volume() const { return dim_ == 1 ? length_ : length_ * length_; }

std::array<int, 2> GridSpec::axis_indices(std::size_t idx) const {
  if (dim_ == 1) return {static_cast<int>(idx), 0};
  return {static_cast<int>(idx / n_), static_cast<int>(idx % n_)};
}

Point GridSpec::centered_point(std::size_t idx) const {
  auto ij = axis_indices(idx);
  if (dim_ == 1) return {centered_coordinate(ij[0]), 0.0};
  return {centered_coordinate(ij[0]), centered_coordinate(ij[1])};
}

Frequency GridSpec::frequency(std::size_t idx) const {
  auto ij = axis_indices(idx);
  if (dim_ == 1) return {wavenumber(ij[0]) / length_, 0.0};
  return {wavenumber(ij[0]) / length_, wavenumber(ij[1]) / length_};
}

std::size_t GridSpec::flat_index(int i0, int i1) const {
  auto wrap = [this](int i) { return ((i % n_) + n_) % n_; };
  if (dim_ == 1) return static_cast<std::size_t>(wrap(i0));
  return static_cast<std::size_t>(wrap(i0)) * n_ + static_cast<std::size_t>(wrap(i1));
}

GridFunction::GridFunction(GridSpec spec, std::vector<double> values)
    : spec_(spec), values_(std::move(values)) {
  require(values_.size() == spec_.size(), "sample count does not match the grid");
}

GridFunction GridFunction::zeros(const GridSpec& spec) {
  return GridFunction(spec, std::vector<double>(spec.size(), 0.0));
}

GridFunction GridFunction::constant(const GridSpec& spec, double c) {
  return GridFunction(spec, std::vector<double>(spec.size(), c));
}

GridFunction GridFunction::sample(const GridSpec& spec,
                                  const std::function<double(const Point&)>& fn) {
  std::vector<double> values(spec.size());
  for (std::size_t i = 0; i < values.size(); ++i) values[i] = fn(spec.centered_point(i));
  return GridFunction(spec, std::move(values));
}

double GridFunction::integral() const {
  double sum = 0.0;
  for (double v : values_) sum += v;
  return sum * spec_.cell_volume();
}

double GridFunction::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

void GridFunction::check_compatible(const GridFunction& other) const {
  require(spec_ == other.spec_, "grid functions live on different grids");
}

GridFunction GridFunction::operator+(const GridFunction& other) const {
  GridFunction r = *this;
  r += other;
  return r;
}

GridFunction GridFunction::operator-(const GridFunction& other) const {
  GridFunction r = *this;
  r -= other;
  return r;
}

GridFunction GridFunction::operator*(double c) const {
  GridFunction r = *this;
  for (double& v : r.values_) v *= c;
  return r;
}

GridFunction& GridFunction::operator+=(const GridFunction& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] += other.values_[i];
  return *this;
}

GridFunction& GridFunction::operator-=(const GridFunction& other) {
  check_compatible(other);
  for (std::size_t i = 0; i < values_.size(); ++i) values_[i] -= other.values_[i];
  return *this;
}

GridFunction GridFunction::times(const GridFunction& other) const {
  check_compatible(other);
  GridFunction r = *this;
  for (std::size_t i = 0; i < values_.size(); ++i) r.values_[i] *= other.values_[i];
  return r;
}

GridFunction GridFunction::minus_mean() const {
  GridFunction r = *this;
  double m = mean();
  for (double& v : r.values_) v -= m;
  return r;
}

SpectralFunction::SpectralFunction(GridSpec spec, std::vector<Complex> coeffs)
    : spec_(spec), coeffs_(std::move(coeffs)) {
  require(coeffs_.size() == spec_.size(), "coefficient count does not match the grid");
}

Complex SpectralFunction::at(int k0, int k1) const {
  return coeffs_[spec_.flat_index(k0, spec_.dim() == 1 ? 0 : k1)];
}

SpectralFunction SpectralFunction::operator+(const SpectralFunction& other) const {
  require(spec_ == other.spec_, "spectral functions live on different grids");
  std::vector<Complex> c = coeffs_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] += other.coeffs_[i];
  return SpectralFunction(spec_, std::move(c));
}

SpectralFunction SpectralFunction::operator*(Complex s) const {
  std::vector<Complex> c = coeffs_;
  for (auto& v : c) v *= s;
  return SpectralFunction(spec_, std::move(c));
}

SpectralFunction SpectralFunction::times(const SpectralFunction& other) const {
  require(spec_ == other.spec_, "spectral functions live on different grids");
  std::vector<Complex> c = coeffs_;
  for (std::size_t i = 0; i < c.size(); ++i) c[i] *= other.coeffs_[i];
  return SpectralFunction(spec_, std::move(c));
}

void check_multi_index(const MultiIndex& alpha, int dim) {
  require(alpha.beta[0] >= 0 && alpha.beta[1] >= 0 && alpha.l >= 0,
          "multi-index entries must be non-negative");
  require(alpha.order() <= kMaxDerivativeOrder, "|beta| + l <= 4");
  require(dim == 2 || alpha.beta[1] == 0, "beta[1] must vanish in one dimension");
}

SpectralFunction forward_transform(const GridFunction& f) {
  const auto& spec = f.spec();
  std::vector<Complex> input(f.size());
  for (std::size_t i = 0; i < input.size(); ++i) input[i] = f[i];
  auto out = run_fft(spec, input, FFTW_FORWARD);
  double scale = spec.cell_volume();
  for (auto& c : out) c *= scale;
  return SpectralFunction(spec, std::move(out));
}

GridFunction inverse_transform(const SpectralFunction& F) {
  const auto& spec = F.spec();
  std::vector<Complex> input(F.coeffs().begin(), F.coeffs().end());
  auto out = run_fft(spec, input, FFTW_BACKWARD);
  double scale = 1.0 / spec.volume();
  std::vector<double> values(out.size());
  for (std::size_t i = 0; i < out.size(); ++i) values[i] = out[i].real() * scale;
  return GridFunction(spec, std::move(values));
}

SpectralFunction apply_multiplier(const SpectralFunction& F, const Symbol& mult) {
  const auto& spec = F.spec();
  const int n = spec.samples_per_axis();
  const double nyquist = 0.5 * n / spec.length();
  std::vector<Complex> out(F.size());
  for (std::size_t idx = 0; idx < out.size(); ++idx) {
    auto ij = spec.axis_indices(idx);
    Frequency xi = spec.frequency(idx);
    bool nyq0 = ij[0] == n / 2;
    bool nyq1 = spec.dim() == 2 && ij[1] == n / 2;
    Complex m;
    if (!nyq0 && !nyq1) {
      m = mult(xi);
    } else {
      Complex sum = 0.0;
      int count = 0;
      for (double s0 : {-1.0, 1.0}) {
        if (!nyq0 && s0 > 0) continue;
        for (double s1 : {-1.0, 1.0}) {
          if (!nyq1 && s1 > 0) continue;
          Frequency x = xi;
          if (nyq0) x[0] = s0 * nyquist;
          if (nyq1) x[1] = s1 * nyquist;
          sum += mult(x);
          ++count;
        }
      }
      m = sum / static_cast<double>(count);
    }
    if (!std::isfinite(m.real()) || !std::isfinite(m.imag()))
      throw PreconditionError("multiplier is not finite on the grid");
    out[idx] = m * F[idx];
  }
  return SpectralFunction(spec, std::move(out));
}

Complex derivative_symbol(const std::array<int, 2>& beta, const Frequency& xi) {
  const Complex two_pi_i(0.0, 2.0 * std::numbers::pi);
  Complex r = 1.0;
  for (int a = 0; a < 2; ++a)
    for (int k = 0; k < beta[a]; ++k) r *= two_pi_i * xi[a];
  return r;
}

GridFunction partial_derivative(const GridFunction& f, const MultiIndex& alpha) {
  check_multi_index(alpha, f.spec().dim());
  require(alpha.l == 0, "grid functions carry no t variable");
  if (alpha.space_order() == 0) return f;
  auto beta = alpha.beta;
  auto F = apply_multiplier(forward_transform(f),
                            [beta](const Frequency& xi) { return derivative_symbol(beta, xi); });
  return inverse_transform(F);
}

GridFunction directional_derivative(const GridFunction& f, const Point& dir, int k) {
  require(k >= 0 && k <= kMaxDerivativeOrder, "derivative order must lie in [0, 4]");
  if (k == 0) return f;
  const Complex two_pi_i(0.0, 2.0 * std::numbers::pi);
  auto F = apply_multiplier(forward_transform(f), [&](const Frequency& xi) {
    Complex base = two_pi_i * (xi[0] * dir[0] + xi[1] * dir[1]);
    Complex r = 1.0;
    for (int j = 0; j < k; ++j) r *= base;
    return r;
  });
  return inverse_transform(F);
}

double lp_norm(const GridFunction& f, double p) {
  require(p >= 1.0, "p >= 1");
  if (std::isinf(p)) return f.max_abs();
  double sum = 0.0;
  if (p == 1.0) {
    for (double v : f.values()) sum += std::abs(v);
    return sum * f.spec().cell_volume();
  }
  if (p == 2.0) {
    for (double v : f.values()) sum += v * v;
    return std::sqrt(sum * f.spec().cell_volume());
  }
  for (double v : f.values()) sum += std::pow(std::abs(v), p);
  return std::pow(sum * f.spec().cell_volume(), 1.0 / p);
}

GridFunction dilate(const GridFunction& f, double lambda) {
  require(std::isfinite(lambda) && lambda > 0.0, "lambda > 0");
  int exponent = 0;
  double mantissa = std::frexp(lambda, &exponent);
  require(mantissa == 0.5, "lambda must be a power of two");
  const auto& spec = f.spec();
  auto scaled = GridSpec::make(spec.dim(), spec.samples_per_axis(), spec.length() / lambda);
  return GridFunction(scaled, std::vector<double>(f.values().begin(), f.values().end()));
}

GridFunction resample(const GridFunction& f, int samples_per_axis) {
  const auto& spec = f.spec();
  auto target = GridSpec::make(spec.dim(), samples_per_axis, spec.length());
  if (target == spec) return f;
  const int n_old = spec.samples_per_axis();
  const int n_new = samples_per_axis;
  auto F = forward_transform(f);
  std::vector<Complex> out(target.size(), 0.0);

  // Targets of one old wavenumber along an axis, with weights.
  auto targets = [&](int k) {
    std::vector<std::pair<int, double>> t;
    if (n_new > n_old) {
      if (k == -n_old / 2) {
        t.push_back({k, 0.5});
        t.push_back({-k, 0.5});
      } else {
        t.push_back({k, 1.0});
      }
    } else {
      if (std::abs(k) < n_new / 2) t.push_back({k, 1.0});
      else if (std::abs(k) == n_new / 2) t.push_back({-n_new / 2, 1.0});
    }
    return t;
  };

  for (std::size_t idx = 0; idx < F.size(); ++idx) {
    auto ij = spec.axis_indices(idx);
    int k0 = spec.wavenumber(ij[0]);
    auto t0 = targets(k0);
    if (spec.dim() == 1) {
      for (auto [k, w] : t0) out[target.flat_index(k, 0)] += w * F[idx];
      continue;
    }
    int k1 = spec.wavenumber(ij[1]);
    auto t1 = targets(k1);
    for (auto [a, wa] : t0)
      for (auto [b, wb] : t1) out[target.flat_index(a, b)] += wa * wb * F[idx];
  }
  return inverse_transform(SpectralFunction(target, std::move(out)));
}

double boundary_tail(const GridFunction& f) {
  const auto& spec = f.spec();
  const int n = spec.samples_per_axis();
  auto edge = [&](int i) {
    int k = spec.wavenumber(i);
    return k == -n / 2 || k == n / 2 - 1;
  };
  double m = 0.0;
  for (std::size_t idx = 0; idx < f.size(); ++idx) {
    auto ij = spec.axis_indices(idx);
    bool on_edge = edge(ij[0]) || (spec.dim() == 2 && edge(ij[1]));
    if (on_edge) m = std::max(m, std::abs(f[idx]));
  }
  return m;
}

GridFunction circular_convolution(const GridFunction& a, const GridFunction& b) {
  require(a.spec() == b.spec(), "grid functions live on different grids");
  return inverse_transform(forward_transform(a).times(forward_transform(b)));
}

}  // namespace besovlab::spectral
