#include "fraclaw/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "fraclaw/spectral.hpp"

namespace fraclaw {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

void SolverParams::validate() const {
  if (!(eps > 0.0)) throw ConfigError("eps must be positive");
  if (!(s > 0.5 && s <= 1.0)) throw ConfigError("s must lie in (1/2, 1]");
  if (!(dt > 0.0 && T > 0.0)) throw ConfigError("dt and T must be positive");
  if (!(cfl_safety > 0.0 && cfl_safety <= 1.0)) {
    throw ConfigError("cfl_safety must lie in (0, 1]");
  }
}

std::size_t SolverParams::num_steps() const {
  return static_cast<std::size_t>(std::llround(T / dt));
}

double Trajectory::mass_drift() const {
  const double m0 = snapshots.front().mean();
  double d = 0.0;
  for (const auto& f : snapshots) d = std::max(d, std::abs(f.mean() - m0));
  return d / std::max(1.0, std::abs(m0));
}

std::pair<double, double> Trajectory::value_range() const {
  double lo = snapshots.front()[0], hi = lo;
  for (const auto& f : snapshots) {
    for (double v : f.values()) {
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
  }
  return {lo, hi};
}

namespace {

using Spectrum = std::vector<std::complex<double>>;

/// Shared stepping core. The control slice (may be null) enters through
/// its precomputed (-dxx)^{s/2} image.
class ViscousStepper {
 public:
  ViscousStepper(const TorusGrid& grid, const SolverParams& p, const Flux& fx)
      : grid_(grid), p_(p), fx_(fx), decay_(grid.num_modes()) {
    for (std::size_t j = 0; j < decay_.size(); ++j) {
      const double mult =
          std::pow(kTwoPi * static_cast<double>(j), 2.0 * p.s);
      decay_[j] = std::exp(-0.5 * p.eps * mult * p.dt);
    }
    cut_ = p.dealias ? grid.size() / 3 : grid.num_modes();
  }

  void check_cfl(const Field& u, std::size_t step) const {
    auto [lo, hi] = std::minmax_element(u.values().begin(), u.values().end());
    const double fmax = fx_.max_fprime(*lo, *hi);
    if (fmax <= 0.0) return;
    const double limit = p_.cfl_safety * u.grid().dx() / fmax;
    if (p_.dt > limit * (1.0 + 1e-12)) {
      throw CFLViolation("dt = " + std::to_string(p_.dt) +
                         " exceeds CFL limit " + std::to_string(limit) +
                         " at step " + std::to_string(step));
    }
  }

  /// -dx f(u) (+ source), as a spectrum.
  Spectrum transport(const Field& u, const Field* source) const {
    std::vector<double> fu(u.size());
    for (std::size_t i = 0; i < fu.size(); ++i) fu[i] = fx_.f(u[i]);
    Spectrum s = detail::dft_forward(fu);
    for (std::size_t j = 0; j < s.size(); ++j) {
      if (j >= cut_ || j + 1 == s.size()) {
        s[j] = {0.0, 0.0};
      } else {
        s[j] *= std::complex<double>(0.0, -kTwoPi * static_cast<double>(j));
      }
    }
    if (source != nullptr) {
      const auto src = source->spectrum();
      for (std::size_t j = 1; j < s.size(); ++j) s[j] += src[j];
    }
    return s;
  }

  Field step(const Field& u, const Field* source, std::size_t stepno) const {
    check_cfl(u, stepno);
    const double dt = p_.dt;
    const Spectrum k1 = transport(u, source);
    const auto uh = u.spectrum();

    Spectrum pred(uh.size());
    for (std::size_t j = 0; j < uh.size(); ++j) {
      pred[j] = decay_[j] * (uh[j] + dt * k1[j]);
    }
    const Field ustar = Field::from_spectrum(grid_, std::move(pred));
    const Spectrum k2 = transport(ustar, source);

    Spectrum next(uh.size());
    for (std::size_t j = 0; j < uh.size(); ++j) {
      next[j] = decay_[j] * uh[j] + 0.5 * dt * (decay_[j] * k1[j] + k2[j]);
    }
    Field out = Field::from_spectrum(grid_, std::move(next));
    if (!out.all_finite()) {
      throw NonFinite("solution blew up at step " + std::to_string(stepno));
    }
    return out;
  }

 private:
  TorusGrid grid_;
  SolverParams p_;
  const Flux& fx_;
  std::vector<double> decay_;
  std::size_t cut_;
};

Trajectory integrate(const Field& u0, const SolverParams& params,
                     const Flux& flux, const std::vector<Field>* control) {
  params.validate();
  if (!u0.all_finite()) throw NonFinite("initial datum is not finite");
  const std::size_t nsteps = params.num_steps();
  if (control != nullptr) {
    if (control->size() != nsteps) {
      throw ConfigError("control record must have one slice per step");
    }
    for (std::size_t j = 0; j < control->size(); ++j) {
      if ((*control)[j].relative_mean() > spectral::kZeroMeanTol) {
        throw NonZeroMean("control slice " + std::to_string(j) +
                          " has nonzero mean");
      }
    }
  }

  ViscousStepper stepper(u0.grid(), params, flux);
  Trajectory traj;
  traj.params = params;
  traj.flux_id = flux.id;
  traj.snapshots.reserve(nsteps + 1);
  traj.snapshots.push_back(u0);

  std::vector<Field> sources;
  if (control != nullptr) {
    sources.reserve(nsteps);
    for (const auto& e : *control) {
      sources.push_back(spectral::frac_power(e, params.s / 2.0));
    }
    traj.control = *control;
  }

  for (std::size_t j = 0; j < nsteps; ++j) {
    const Field* src = control != nullptr ? &sources[j] : nullptr;
    traj.snapshots.push_back(stepper.step(traj.snapshots.back(), src, j));
  }
  return traj;
}

}  // namespace

Trajectory solve_viscous(const Field& u0, const SolverParams& params,
                         const Flux& flux) {
  return integrate(u0, params, flux, nullptr);
}

Trajectory solve_controlled(const Field& u0, const SolverParams& params,
                            const Flux& flux, const std::vector<Field>& E) {
  return integrate(u0, params, flux, &E);
}

Trajectory entropic_reference(const Field& u0, double T, const Flux& flux,
                              int refine, double snapshot_dt) {
  if (refine < 1) throw ConfigError("refine must be >= 1");
  if (!(snapshot_dt > 0.0 && T > 0.0)) {
    throw ConfigError("entropic_reference: T and snapshot_dt must be positive");
  }
  const std::size_t nb = u0.size();
  const std::size_t nf = nb * static_cast<std::size_t>(refine);
  const double dxf = 1.0 / static_cast<double>(nf);

  // Piecewise-constant prolongation: monotone, no Gibbs overshoot on
  // shock-like data.
  std::vector<double> u(nf);
  for (std::size_t i = 0; i < nb; ++i) {
    for (int r = 0; r < refine; ++r) u[i * refine + r] = u0[i];
  }

  const std::size_t nsnap =
      static_cast<std::size_t>(std::llround(T / snapshot_dt));
  Trajectory traj;
  traj.params = SolverParams{.eps = 0.0, .s = 1.0, .dt = snapshot_dt, .T = T};
  traj.flux_id = flux.id;
  traj.snapshots.reserve(nsnap + 1);
  traj.snapshots.push_back(u0);

  std::vector<double> F(nf), restricted(nb);
  const double cfl = 0.45;
  for (std::size_t snap = 0; snap < nsnap; ++snap) {
    double amax = 1e-12;
    for (double v : u) amax = std::max(amax, std::abs(v));
    const double fmax = std::max(flux.max_fprime(-amax, amax), 1e-12);
    const double dt_max = cfl * dxf / fmax;
    if (dt_max <= 0.0) throw CFLViolation("entropic_reference: empty step");
    const int m = std::max(1, static_cast<int>(std::ceil(snapshot_dt / dt_max)));
    const double dt = snapshot_dt / m;
    for (int sub = 0; sub < m; ++sub) {
      for (std::size_t i = 0; i < nf; ++i) {
        F[i] = flux.eo_flux(u[i], u[(i + 1) % nf]);
      }
      for (std::size_t i = 0; i < nf; ++i) {
        const double Fl = F[(i + nf - 1) % nf];
        u[i] -= dt / dxf * (F[i] - Fl);
      }
    }
    for (std::size_t i = 0; i < nb; ++i) {
      double acc = 0.0;
      for (int r = 0; r < refine; ++r) acc += u[i * refine + r];
      restricted[i] = acc / refine;
    }
    traj.snapshots.emplace_back(u0.grid(), restricted);
  }
  return traj;
}

Trajectory stationary_trajectory(const Field& u, const SolverParams& params,
                                 const std::string& flux_id) {
  Trajectory traj;
  traj.params = params;
  traj.flux_id = flux_id;
  const std::size_t nsteps = params.num_steps();
  traj.snapshots.assign(nsteps + 1, u);
  return traj;
}

}  // namespace fraclaw
