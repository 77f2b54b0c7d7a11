#pragma once

#include <optional>
#include <vector>

#include "fraclaw/flux.hpp"
#include "fraclaw/grid.hpp"

namespace fraclaw {

/// Parameters of the viscous/controlled integrators.
struct SolverParams {
  double eps = 0.1;         // viscosity coefficient, > 0
  double s = 0.75;          // fractional exponent, in (1/2, 1]
  double dt = 1e-3;         // time step
  double T = 1.0;           // horizon
  double cfl_safety = 0.5;  // in (0, 1]
  bool dealias = false;     // 2/3-rule filter on the transport term

  void validate() const;
  std::size_t num_steps() const;
};

/// Time-indexed sequence of Fields at t_j = j dt, with solver metadata and
/// an optional record of the control slices at time midpoints.
struct Trajectory {
  SolverParams params;
  std::string flux_id;
  std::vector<Field> snapshots;            // size num_steps()+1
  std::vector<Field> control;              // empty, or size num_steps()

  const TorusGrid& grid() const { return snapshots.front().grid(); }
  double dt() const { return params.dt; }
  double horizon() const {
    return params.dt * static_cast<double>(snapshots.size() - 1);
  }

  /// Largest deviation of snapshot means from the initial mean, relative
  /// to max(1, |initial mean|).
  double mass_drift() const;

  /// Pointwise data range over all snapshots.
  std::pair<double, double> value_range() const;
};

/// Integrate du/dt + dx f(u) = -(eps/2)(-dxx)^s u by an exponential
/// integrating factor (diffusion exact per mode) with Heun's method for
/// the transport term, pseudo-spectral in space.
Trajectory solve_viscous(const Field& u0, const SolverParams& params,
                         const Flux& flux);

/// Same scheme with the source (-dxx)^{s/2} E_j held constant over step j;
/// E slices live at time midpoints and must be mean-free.
Trajectory solve_controlled(const Field& u0, const SolverParams& params,
                            const Flux& flux, const std::vector<Field>& E);

/// Entropic reference: Engquist-Osher first-order finite volume on a grid
/// refined by `refine`, cell-averaged back to the base grid. Snapshots are
/// produced every `snapshot_dt`; the internal step obeys the EO CFL bound.
Trajectory entropic_reference(const Field& u0, double T, const Flux& flux,
                              int refine, double snapshot_dt);

/// Build a trajectory holding the same field at every time (a prescribed
/// stationary weak solution, not a solver output).
Trajectory stationary_trajectory(const Field& u, const SolverParams& params,
                                 const std::string& flux_id);

}  // namespace fraclaw
