#include "fraclaw/spectral.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace fraclaw::spectral {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void require_order(double sigma) {
  if (!(sigma >= -2.0 && sigma <= 2.0)) {
    throw InvalidOrder("fractional order " + std::to_string(sigma) +
                       " outside [-2, 2]");
  }
}

void require_mean_free(const Field& u, const char* what) {
  if (u.relative_mean() > kZeroMeanTol) {
    throw NonZeroMean(std::string(what) +
                      " requires a mean-free field (relative mean " +
                      std::to_string(u.relative_mean()) + ")");
  }
}

}  // namespace

Field frac_power(const Field& u, double sigma) {
  require_order(sigma);
  if (sigma < 0.0) require_mean_free(u, "negative fractional power");
  const auto& g = u.grid();
  std::vector<std::complex<double>> spec(u.spectrum().begin(),
                                         u.spectrum().end());
  spec[0] = {0.0, 0.0};
  for (std::size_t j = 1; j < spec.size(); ++j) {
    spec[j] *= std::pow(kTwoPi * static_cast<double>(j), 2.0 * sigma);
  }
  return Field::from_spectrum(g, std::move(spec));
}

Field deriv_x(const Field& u) {
  const auto& g = u.grid();
  std::vector<std::complex<double>> spec(u.spectrum().begin(),
                                         u.spectrum().end());
  for (std::size_t j = 0; j + 1 < spec.size(); ++j) {
    spec[j] *= std::complex<double>(0.0, kTwoPi * static_cast<double>(j));
  }
  spec.back() = {0.0, 0.0};  // Nyquist carries no usable derivative phase
  return Field::from_spectrum(g, std::move(spec));
}

Field project_mean_zero(const Field& u) { return u.with_mean_removed(); }

double sobolev_norm(const Field& u, const SobolevSpec& spec) {
  require_order(spec.order);
  if (spec.homogeneous && spec.order < 0.0) {
    require_mean_free(u, "homogeneous negative-order norm");
  }
  const auto& g = u.grid();
  const auto s = u.spectrum();
  double acc = 0.0;
  for (std::size_t j = 1; j < s.size(); ++j) {
    acc += g.mode_weight(j) *
           std::pow(kTwoPi * static_cast<double>(j), 2.0 * spec.order) *
           std::norm(s[j]);
  }
  if (!spec.homogeneous) acc += std::norm(s[0]);
  return std::sqrt(acc);
}

double h_minus1_metric(const Field& u, const Field& v) {
  if (!(u.grid() == v.grid())) throw GridMismatch("h_minus1_metric");
  const auto& g = u.grid();
  const auto a = u.spectrum();
  const auto b = v.spectrum();
  double acc = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double k = kTwoPi * static_cast<double>(j);
    acc += g.mode_weight(j) * std::norm(a[j] - b[j]) / (1.0 + k * k);
  }
  return std::sqrt(acc);
}

double space_time_dual_norm(const std::vector<Field>& slices, double dt,
                            double s) {
  if (dt <= 0.0) throw Error("space_time_dual_norm: dt must be positive");
  double acc = 0.0;
  for (std::size_t j = 0; j < slices.size(); ++j) {
    if (slices[j].relative_mean() > kZeroMeanTol) {
      throw NonZeroMean("space_time_dual_norm: slice " + std::to_string(j) +
                        " has nonzero mean");
    }
    const double nj = sobolev_norm(slices[j], {.order = -s, .homogeneous = true});
    acc += dt * nj * nj;
  }
  return std::sqrt(acc);
}

double space_time_l2_norm(const std::vector<Field>& slices, double dt) {
  double acc = 0.0;
  for (const auto& f : slices) {
    const double nj = f.l2_norm();
    acc += dt * nj * nj;
  }
  return std::sqrt(acc);
}

}  // namespace fraclaw::spectral
