#pragma once

#include <vector>

#include "fraclaw/grid.hpp"

namespace fraclaw::spectral {

/// Relative-mean threshold above which negative-order operators reject a
/// field as carrying mass.
inline constexpr double kZeroMeanTol = 1e-10;

/// Sobolev norm request: signed order sigma in [-2,2], homogeneous
/// (dot-space, zero mode dropped) or full (zero mode added with weight 1).
struct SobolevSpec {
  double order = 0.0;
  bool homogeneous = true;
};

/// Fractional Laplacian power: spectral multiplier (2 pi |k|)^{2 sigma}.
///
/// The zero mode maps to 0. For sigma < 0 the input must be mean-free to
/// within kZeroMeanTol relative (NonZeroMean otherwise); use
/// project_mean_zero first when mass removal is intended.
Field frac_power(const Field& u, double sigma);

/// Spectral derivative d/dx (multiplier 2 pi i k, Nyquist zeroed).
Field deriv_x(const Field& u);

/// Explicit mass-removal helper; see frac_power.
Field project_mean_zero(const Field& u);

double sobolev_norm(const Field& u, const SobolevSpec& spec);

/// Natural metric of C([0,T]; H^-1) evaluated at a single time:
/// (sum_k |u_hat_k - v_hat_k|^2 / (1 + (2 pi k)^2))^{1/2}.
double h_minus1_metric(const Field& u, const Field& v);

/// Discrete space-time dual norm: (sum_j dt * |r_j|_{H^-s}^2)^{1/2} over
/// midpoint slices. Every slice must be mean-free (NonZeroMean with the
/// offending index otherwise).
double space_time_dual_norm(const std::vector<Field>& slices, double dt,
                            double s);

/// L2(dt,dx) norm of a midpoint slice sequence.
double space_time_l2_norm(const std::vector<Field>& slices, double dt);

}  // namespace fraclaw::spectral
