#include "fraclaw/grid.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <map>
#include <mutex>

namespace fraclaw {

namespace {

bool is_power_of_two(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::uint64_t fnv1a64(const void* data, std::size_t len) {
  const auto* p = static_cast<const unsigned char*>(data);
  std::uint64_t h = 1469598103934665603ull;
  for (std::size_t i = 0; i < len; ++i) {
    h ^= p[i];
    h *= 1099511628211ull;
  }
  return h;
}

/// FFTW plan pair for one grid size. Plans are created once per size and
/// executed with the new-array interface, which is thread-safe.
struct PlanPair {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
};

PlanPair& plans_for(std::size_t n) {
  static std::mutex mtx;
  static std::map<std::size_t, PlanPair> cache;
  std::lock_guard<std::mutex> lock(mtx);
  auto it = cache.find(n);
  if (it != cache.end()) return it->second;

  std::vector<double> re(n);
  std::vector<std::complex<double>> cx(n / 2 + 1);
  PlanPair p;
  p.fwd = fftw_plan_dft_r2c_1d(static_cast<int>(n), re.data(),
                               reinterpret_cast<fftw_complex*>(cx.data()),
                               FFTW_ESTIMATE);
  p.inv = fftw_plan_dft_c2r_1d(static_cast<int>(n),
                               reinterpret_cast<fftw_complex*>(cx.data()),
                               re.data(), FFTW_ESTIMATE);
  return cache.emplace(n, p).first->second;
}

}  // namespace

TorusGrid::TorusGrid(std::size_t n) : n_(n) {
  if (n < 8 || !is_power_of_two(n)) {
    throw InvalidGrid("grid size must be a power of two >= 8, got " +
                      std::to_string(n));
  }
}

std::uint64_t TorusGrid::hash() const {
  std::uint64_t n64 = n_;
  return fnv1a64(&n64, sizeof(n64));
}

namespace detail {

std::vector<std::complex<double>> dft_forward(const std::vector<double>& v) {
  const std::size_t n = v.size();
  auto& p = plans_for(n);
  std::vector<double> in(v);
  std::vector<std::complex<double>> out(n / 2 + 1);
  fftw_execute_dft_r2c(p.fwd, in.data(),
                       reinterpret_cast<fftw_complex*>(out.data()));
  const double scale = 1.0 / static_cast<double>(n);
  for (auto& c : out) c *= scale;
  return out;
}

std::vector<double> dft_inverse(const std::vector<std::complex<double>>& s,
                                std::size_t n) {
  auto& p = plans_for(n);
  std::vector<std::complex<double>> in(s);
  std::vector<double> out(n);
  fftw_execute_dft_c2r(p.inv, reinterpret_cast<fftw_complex*>(in.data()),
                       out.data());
  return out;  // c2r of (1/n)-scaled coefficients is already unscaled
}

}  // namespace detail

Field::Field(TorusGrid grid)
    : grid_(grid),
      values_(grid.size(), 0.0),
      spectrum_(grid.num_modes(), {0.0, 0.0}) {}

Field::Field(TorusGrid grid, std::vector<double> values) : grid_(grid) {
  if (values.size() != grid.size()) {
    throw InvalidGrid("value count does not match grid size");
  }
  values_ = std::move(values);
  spectrum_ = detail::dft_forward(values_);
}

Field Field::from_spectrum(TorusGrid grid,
                           std::vector<std::complex<double>> spectrum) {
  if (spectrum.size() != grid.num_modes()) {
    throw InvalidGrid("spectrum size does not match grid");
  }
  // Real field: zero mode and Nyquist must be real.
  spectrum[0] = {spectrum[0].real(), 0.0};
  spectrum[grid.size() / 2] = {spectrum[grid.size() / 2].real(), 0.0};
  auto values = detail::dft_inverse(spectrum, grid.size());
  return Field(grid, std::move(values), std::move(spectrum));
}

double Field::l2_norm() const {
  double s = 0.0;
  for (double v : values_) s += v * v;
  return std::sqrt(s / static_cast<double>(values_.size()));
}

double Field::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

bool Field::all_finite() const {
  return std::all_of(values_.begin(), values_.end(),
                     [](double v) { return std::isfinite(v); });
}

double Field::relative_mean() const {
  const double norm = l2_norm();
  if (norm == 0.0) return 0.0;
  return std::abs(mean()) / norm;
}

Field Field::with_mean_removed() const {
  auto spec = std::vector<std::complex<double>>(spectrum_.begin(),
                                                spectrum_.end());
  spec[0] = {0.0, 0.0};
  return from_spectrum(grid_, std::move(spec));
}

namespace {
void require_same_grid(const Field& u, const Field& v) {
  if (!(u.grid() == v.grid())) {
    throw GridMismatch("fields live on different grids");
  }
}
}  // namespace

Field operator+(const Field& u, const Field& v) {
  require_same_grid(u, v);
  std::vector<double> w(u.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = u[i] + v[i];
  return Field(u.grid(), std::move(w));
}

Field operator-(const Field& u, const Field& v) {
  require_same_grid(u, v);
  std::vector<double> w(u.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = u[i] - v[i];
  return Field(u.grid(), std::move(w));
}

Field operator*(double c, const Field& u) {
  std::vector<double> w(u.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = c * u[i];
  return Field(u.grid(), std::move(w));
}

double inner(const Field& u, const Field& v) {
  require_same_grid(u, v);
  double s = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) s += u[i] * v[i];
  return s / static_cast<double>(u.size());
}

Field midpoint(const Field& u, const Field& v) {
  require_same_grid(u, v);
  std::vector<double> w(u.size());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = 0.5 * (u[i] + v[i]);
  return Field(u.grid(), std::move(w));
}

Field reflect(const Field& u) {
  const std::size_t n = u.size();
  std::vector<double> w(n);
  w[0] = u[0];
  for (std::size_t i = 1; i < n; ++i) w[i] = u[n - i];
  return Field(u.grid(), std::move(w));
}

}  // namespace fraclaw
