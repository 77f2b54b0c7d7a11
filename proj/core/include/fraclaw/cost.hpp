#pragma once

#include <map>
#include <string>
#include <vector>

#include "fraclaw/solver.hpp"

namespace fraclaw::cost {

/// Parabolic cost evaluation with all intermediate norms.
///
/// The three representations eps^-1/2 |r|_{H*}^2 = eps^-1/2 |Phi|_H^2
/// = eps^-1/2 |E|_{L2(dt,dx)}^2 are computed independently and must agree
/// to 1e-8 relative on finite-cost trajectories.
struct CostReport {
  double i_eps = 0.0;              // +inf when the mass gate fails
  double residual_dual_norm = 0.0; // |dt u + dx f(u) + (eps/2)(-dxx)^s u|_{H*}
  double phi_h_norm = 0.0;         // |Phi|_H
  double control_l2 = 0.0;         // |E|_{L2(dt,dx)}
  std::map<std::string, double> bound_checks;  // named inequality -> margin
  bool finite = true;
  std::string notes;

  double i_eps_from_phi(double eps) const {
    return 0.5 / eps * phi_h_norm * phi_h_norm;
  }
  double i_eps_from_control(double eps) const {
    return 0.5 / eps * control_l2 * control_l2;
  }
};

/// Midpoint residual slices r_{j+1/2} = (u_{j+1}-u_j)/dt + dx f(u_bar)
/// + (eps/2)(-dxx)^s u_bar. Throws MassDrift when a slice mean exceeds
/// 1e-9 in absolute value.
std::vector<Field> residual(const Trajectory& traj, const Flux& flux);

/// Cost functional I_eps with the Riesz reconstruction Phi = (-dxx)^{-s} r
/// and E = (-dxx)^{s/2} Phi. A trajectory failing the residual mean gate
/// yields i_eps = +inf (finite = false), not an exception.
CostReport cost_i_eps(const Trajectory& traj, const Flux& flux);

/// Reconstructed control slices (the E of the Riesz representation).
std::vector<Field> reconstruct_control(const Trajectory& traj,
                                       const Flux& flux);

/// Margins of the a-priori energy bounds:
///   bound1: 2|u0|^2 + 4 I_eps - eps |u|_H^2
///   bound2: 2|u0|^2 + 4 I_eps - sup_t |u(t)|^2
/// Negative margins are reported, not thrown.
std::map<std::string, double> apriori_bounds(const Trajectory& traj,
                                             const CostReport& report);

/// Modulus of continuity of t -> u(t) in the H^-1 metric at the given
/// snapshot lags, and the (log-log) least-squares Holder exponent.
struct ModulusScan {
  std::vector<double> delta;    // time lags
  std::vector<double> modulus;  // sup over pairs at exact lag
  double fitted_exponent = 0.0;
};
ModulusScan time_modulus(const Trajectory& traj, std::size_t lag_min,
                         std::size_t lag_max, std::size_t n_lags);

}  // namespace fraclaw::cost
