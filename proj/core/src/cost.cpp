#include "fraclaw/cost.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "fraclaw/spectral.hpp"

namespace fraclaw::cost {

namespace {

constexpr double kResidualMeanTol = 1e-9;

std::vector<Field> residual_impl(const Trajectory& traj, const Flux& flux,
                                 double* worst_mean) {
  if (traj.snapshots.size() < 2) {
    throw ConfigError("residual needs at least two snapshots");
  }
  const double dt = traj.dt();
  const double eps = traj.params.eps;
  const double s = traj.params.s;
  std::vector<Field> r;
  r.reserve(traj.snapshots.size() - 1);
  *worst_mean = 0.0;
  for (std::size_t j = 0; j + 1 < traj.snapshots.size(); ++j) {
    const Field& a = traj.snapshots[j];
    const Field& b = traj.snapshots[j + 1];
    const Field ubar = midpoint(a, b);
    std::vector<double> fu(ubar.size());
    for (std::size_t i = 0; i < fu.size(); ++i) fu[i] = flux.f(ubar[i]);
    const Field dxf = spectral::deriv_x(Field(ubar.grid(), std::move(fu)));
    const Field visc = spectral::frac_power(ubar, s);
    std::vector<double> rv(ubar.size());
    for (std::size_t i = 0; i < rv.size(); ++i) {
      rv[i] = (b[i] - a[i]) / dt + dxf[i] + 0.5 * eps * visc[i];
    }
    Field rj(ubar.grid(), std::move(rv));
    *worst_mean = std::max(*worst_mean, std::abs(rj.mean()));
    r.push_back(std::move(rj));
  }
  return r;
}

}  // namespace

std::vector<Field> residual(const Trajectory& traj, const Flux& flux) {
  double worst = 0.0;
  auto r = residual_impl(traj, flux, &worst);
  if (worst > kResidualMeanTol) {
    throw MassDrift("residual slice mean " + std::to_string(worst) +
                    " exceeds " + std::to_string(kResidualMeanTol));
  }
  return r;
}

CostReport cost_i_eps(const Trajectory& traj, const Flux& flux) {
  const double dt = traj.dt();
  const double eps = traj.params.eps;
  const double s = traj.params.s;

  CostReport rep;
  rep.notes = flux.deviation_note;

  double worst = 0.0;
  auto r = residual_impl(traj, flux, &worst);
  if (worst > kResidualMeanTol) {
    rep.finite = false;
    rep.i_eps = std::numeric_limits<double>::infinity();
    rep.notes += (rep.notes.empty() ? "" : "; ");
    rep.notes += "mass gate failed: residual mean " + std::to_string(worst);
    return rep;
  }

  rep.residual_dual_norm = spectral::space_time_dual_norm(r, dt, s);
  rep.i_eps = 0.5 / eps * rep.residual_dual_norm * rep.residual_dual_norm;

  // Riesz reconstruction, each norm evaluated by its own route.
  double phi2 = 0.0, e2 = 0.0;
  for (const auto& rj : r) {
    const Field phi = spectral::frac_power(rj, -s);
    const Field e = spectral::frac_power(phi, 0.5 * s);
    const double np = spectral::sobolev_norm(phi, {.order = s, .homogeneous = true});
    const double ne = e.l2_norm();
    phi2 += dt * np * np;
    e2 += dt * ne * ne;
  }
  rep.phi_h_norm = std::sqrt(phi2);
  rep.control_l2 = std::sqrt(e2);

  rep.bound_checks = apriori_bounds(traj, rep);
  return rep;
}

std::vector<Field> reconstruct_control(const Trajectory& traj,
                                       const Flux& flux) {
  const double s = traj.params.s;
  auto r = residual(traj, flux);
  std::vector<Field> e;
  e.reserve(r.size());
  for (const auto& rj : r) {
    e.push_back(spectral::frac_power(rj, -0.5 * s));
  }
  return e;
}

std::map<std::string, double> apriori_bounds(const Trajectory& traj,
                                             const CostReport& report) {
  const double dt = traj.dt();
  const double eps = traj.params.eps;
  const double s = traj.params.s;
  const double u0_l2 = traj.snapshots.front().l2_norm();

  // |u|_H^2 by midpoint quadrature, consistent with the residual slices.
  double uh2 = 0.0;
  double sup_l2 = 0.0;
  for (std::size_t j = 0; j + 1 < traj.snapshots.size(); ++j) {
    const Field ubar = midpoint(traj.snapshots[j], traj.snapshots[j + 1]);
    const double nj =
        spectral::sobolev_norm(ubar, {.order = s, .homogeneous = true});
    uh2 += dt * nj * nj;
  }
  for (const auto& f : traj.snapshots) {
    sup_l2 = std::max(sup_l2, f.l2_norm());
  }

  const double rhs = 2.0 * u0_l2 * u0_l2 + 4.0 * report.i_eps;
  return {
      {"bound1", rhs - eps * uh2},
      {"bound2", rhs - sup_l2 * sup_l2},
  };
}

ModulusScan time_modulus(const Trajectory& traj, std::size_t lag_min,
                         std::size_t lag_max, std::size_t n_lags) {
  const std::size_t nt = traj.snapshots.size() - 1;
  lag_max = std::min(lag_max, nt);
  if (lag_min < 1 || lag_min >= lag_max || n_lags < 2) {
    throw ConfigError("time_modulus: bad lag window");
  }
  ModulusScan scan;
  const double ratio = std::pow(static_cast<double>(lag_max) / lag_min,
                                1.0 / static_cast<double>(n_lags - 1));
  std::size_t prev = 0;
  for (std::size_t i = 0; i < n_lags; ++i) {
    const auto lag = static_cast<std::size_t>(
        std::lround(lag_min * std::pow(ratio, static_cast<double>(i))));
    if (lag == prev) continue;
    prev = lag;
    double m = 0.0;
    const std::size_t stride = std::max<std::size_t>(1, lag / 8);
    for (std::size_t j = 0; j + lag <= nt; j += stride) {
      m = std::max(m, spectral::h_minus1_metric(traj.snapshots[j],
                                                traj.snapshots[j + lag]));
    }
    scan.delta.push_back(static_cast<double>(lag) * traj.dt());
    scan.modulus.push_back(m);
  }
  // least squares slope of log(modulus) vs log(delta)
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const auto n = static_cast<double>(scan.delta.size());
  for (std::size_t i = 0; i < scan.delta.size(); ++i) {
    const double x = std::log(scan.delta[i]);
    const double y = std::log(std::max(scan.modulus[i], 1e-300));
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  scan.fitted_exponent = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  return scan;
}

}  // namespace fraclaw::cost
