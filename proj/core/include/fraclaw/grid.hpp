#pragma once

#include <complex>
#include <cstdint>
#include <span>
#include <vector>

#include "fraclaw/errors.hpp"

namespace fraclaw {

/// Uniform grid on the unit torus [0,1) with n points, n a power of two.
///
/// Spectral slot j of the half-complex spectrum corresponds to wavenumber
/// k = j for j = 0..n/2; the slot j = n/2 is the (unpaired) Nyquist mode
/// standing for k = -n/2.
class TorusGrid {
 public:
  explicit TorusGrid(std::size_t n);

  std::size_t size() const { return n_; }
  double dx() const { return 1.0 / static_cast<double>(n_); }
  double x(std::size_t i) const { return static_cast<double>(i) * dx(); }
  std::size_t num_modes() const { return n_ / 2 + 1; }

  /// Multiplicity of spectral slot j under conjugate symmetry (2 for
  /// 0 < j < n/2, else 1).
  double mode_weight(std::size_t j) const {
    return (j == 0 || j == n_ / 2) ? 1.0 : 2.0;
  }

  /// Deterministic hash of the grid metadata, stored in binary headers.
  std::uint64_t hash() const;

  friend bool operator==(const TorusGrid& a, const TorusGrid& b) {
    return a.n_ == b.n_;
  }

 private:
  std::size_t n_;
};

/// Real-valued function sampled on a TorusGrid, with its Fourier spectrum.
///
/// The spectrum is computed at construction and uses the L2-orthonormal
/// convention u_hat_k = (1/n) sum_i u_i e^{-2 pi i k x_i}, so that
/// int |u|^2 dx = sum_k w_k |u_hat_k|^2 with the conjugate-symmetry
/// weights w_k. Fields are immutable after construction.
class Field {
 public:
  /// Zero field.
  explicit Field(TorusGrid grid);
  Field(TorusGrid grid, std::vector<double> values);
  /// Build from a half-complex spectrum (n/2+1 coefficients).
  static Field from_spectrum(TorusGrid grid,
                             std::vector<std::complex<double>> spectrum);

  const TorusGrid& grid() const { return grid_; }
  std::size_t size() const { return grid_.size(); }
  std::span<const double> values() const { return values_; }
  double operator[](std::size_t i) const { return values_[i]; }
  std::span<const std::complex<double>> spectrum() const { return spectrum_; }

  /// Mean value = zero-mode coefficient.
  double mean() const { return spectrum_[0].real(); }
  double l2_norm() const;
  double max_abs() const;
  bool all_finite() const;

  /// |mean| relative to the L2 norm; 0 for the zero field.
  double relative_mean() const;

  Field with_mean_removed() const;

 private:
  Field(TorusGrid grid, std::vector<double> values,
        std::vector<std::complex<double>> spectrum)
      : grid_(grid), values_(std::move(values)), spectrum_(std::move(spectrum)) {}

  TorusGrid grid_;
  std::vector<double> values_;
  std::vector<std::complex<double>> spectrum_;
};

/// u + v, u - v, c*u, pointwise products; grids must match.
Field operator+(const Field& u, const Field& v);
Field operator-(const Field& u, const Field& v);
Field operator*(double c, const Field& u);

/// L2(T) inner product (1/n) sum_i u_i v_i.
double inner(const Field& u, const Field& v);

/// Midpoint average (u + v)/2.
Field midpoint(const Field& u, const Field& v);

/// Index reversal x -> -x about the grid origin (exact on even grids).
Field reflect(const Field& u);

namespace detail {
/// Forward r2c transform with 1/n scaling; thread-safe, plans are cached.
std::vector<std::complex<double>> dft_forward(const std::vector<double>& v);
/// Inverse transform of a half-complex spectrum in the same convention.
std::vector<double> dft_inverse(const std::vector<std::complex<double>>& s,
                                std::size_t n);
}  // namespace detail

}  // namespace fraclaw
