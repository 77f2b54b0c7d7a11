#pragma once

#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "fraclaw/flux.hpp"
#include "fraclaw/solver.hpp"

namespace fraclaw::entropy {

/// Entropy / entropy-flux pair. q is the conjugated flux
/// q(w) = int^w eta'(v) f'(v) dv, cached so that q' matches eta' f' to
/// 1e-8 on the cached range; evaluating outside throws RangeExceeded.
struct EntropyPair {
  std::string name;
  std::function<double(double)> eta;
  std::function<double(double)> etaprime;
  std::function<double(double)> etasecond;
  std::function<double(double)> q;
  double range_lo = -10.0, range_hi = 10.0;
};

/// Build a pair for an arbitrary C^2_b entropy; `feature_scale` is the
/// smallest v-scale on which eta'' varies (it sets the q-cache node
/// spacing).
EntropyPair make_pair(const Flux& flux, std::string name,
                      std::function<double(double)> eta,
                      std::function<double(double)> etaprime,
                      std::function<double(double)> etasecond,
                      double range_lo, double range_hi,
                      double feature_scale = 1.0);

/// eta(v) = v^2/2.
EntropyPair quadratic_pair(const Flux& flux, double range_lo, double range_hi);

/// Affine eta(v) = v: zero production on weak solutions (the gate entropy).
EntropyPair identity_pair(const Flux& flux, double range_lo, double range_hi);

/// Mollified kink at level c with half-width h: eta'' is the normalized
/// Hann bump on [c-h, c+h], eta the C^2 smoothing of (v-c)^+. q has the
/// exact tail q(w) = q(c+h) + f(w) - f(c+h) outside the bump.
EntropyPair kink_pair(const Flux& flux, double center, double halfwidth,
                      double range_lo, double range_hi);

/// Smooth space-time test function with analytic derivatives.
struct TestFunction {
  std::function<double(double, double)> phi;   // (t, x)
  std::function<double(double, double)> dphi_dt;
  std::function<double(double, double)> dphi_dx;
};

/// Tensor Hann bump centered at (tc, xc) with the given half-widths;
/// periodic in x, compactly supported in t.
TestFunction tensor_bump(double tc, double t_halfwidth, double xc,
                         double x_halfwidth);

/// Gridded test function; derivatives by centered differences.
TestFunction gridded_test_function(const std::vector<std::vector<double>>& phi,
                                   double dt, std::size_t n);

/// Entropy production <wp_{eta,u}, phi> = -sum dt dx [eta(u) phi_t
/// + q(u) phi_x], trapezoid in t and exact sums in x. phi must vanish on
/// the first and last time slices (SupportViolation otherwise).
double production(const Trajectory& traj, const EntropyPair& pair,
                  const TestFunction& phi);

/// Rankine-Hugoniot production rate of the jump (u-, u+):
/// q(u+) - q(u-) - sigma (eta(u+)-eta(u-)) with sigma the jump speed.
/// Cross-checked against the chord-deviation integral
/// int eta''(v) (chord(v)-f(v)) dv between the states.
double shock_production_rate(double u_minus, double u_plus, const Flux& flux,
                             const EntropyPair& pair);

/// Both forms, for oracle use.
struct ShockRateForms {
  double jump_form;
  double chord_form;
};
ShockRateForms shock_production_forms(double u_minus, double u_plus,
                                      const Flux& flux,
                                      const EntropyPair& pair);

/// Mollified density estimate of the entropy production measure on a
/// (v, t, x) cell grid. Windows form a partition of unity: Hann windows in
/// x (periodic) and interior Hann windows in t; masses are corrected by
/// the exact time coverage (n_tc-1)/n_tc. No deconvolution is performed:
/// the reported density is the bump-mollified one.
struct EntropyMeasure {
  std::vector<double> v_centers;
  double dv = 0.0;
  std::vector<double> t_centers;
  double t_halfwidth = 0.0;
  std::vector<double> x_centers;
  double x_halfwidth = 0.0;
  std::vector<double> production_raw;  // [iv][it][ix], window-tested values
  std::vector<double> density;         // production_raw / window area
  double window_area = 0.0;
  double coverage = 1.0;
  double positive_mass = 0.0;  // coverage-corrected
  double negative_mass = 0.0;
  std::vector<double> v_marginal_positive;  // d(mass+)/dv per v-cell

  std::size_t idx(std::size_t iv, std::size_t it, std::size_t ix) const {
    return (iv * t_centers.size() + it) * x_centers.size() + ix;
  }
};

EntropyMeasure measure_estimate(
    const Trajectory& traj, std::size_t n_v, std::size_t n_tc,
    std::size_t n_xc,
    std::optional<std::pair<double, double>> v_range = std::nullopt);

/// The hyperbolic cost I(u) with diagnostics. The weak-solution gate tests
/// the affine entropy against every window; failure yields +inf (finite =
/// false), matching the dichotomy of the continuum definition.
struct HyperbolicCost {
  double i = 0.0;              // positive mass of the estimated measure
  double i_theta_sup = 0.0;    // lower-bound functional with 0<=theta''<=1
  double gate_max = 0.0;       // worst affine-entropy production
  double gate_tol = 0.0;       // recorded threshold
  double noise_floor = 0.0;    // estimator floor, reported
  bool finite = true;
  EntropyMeasure measure;
};

HyperbolicCost cost_i(const Trajectory& traj, std::size_t n_v = 64,
                      std::size_t n_tc = 16, std::size_t n_xc = 16);

}  // namespace fraclaw::entropy
