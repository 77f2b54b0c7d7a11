#include "fraclaw/entropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>

#include "fraclaw/detail/quadrature.hpp"

namespace fraclaw::entropy {

namespace {

constexpr double kPi = std::numbers::pi;

/// Cubic-Hermite table of q(w) = int_0^w eta'(v) f'(v) dv on [lo, hi].
/// Node derivatives are exact (q' = eta' f'), so the interpolant's
/// derivative error is O(h^3 |q''''|) between nodes.
struct QTable {
  std::vector<double> w, q, qp;
  double lo, hi, h;

  double eval(double x) const {
    if (x < lo || x > hi) {
      throw RangeExceeded("entropy flux evaluated at " + std::to_string(x) +
                          " outside cached range [" + std::to_string(lo) +
                          ", " + std::to_string(hi) + "]");
    }
    const double pos = (x - lo) / h;
    auto i = std::min(static_cast<std::size_t>(pos), w.size() - 2);
    const double t = (x - w[i]) / h;
    const double t2 = t * t, t3 = t2 * t;
    const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
    const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
    return h00 * q[i] + h * h10 * qp[i] + h01 * q[i + 1] + h * h11 * qp[i + 1];
  }
};

QTable build_q_table(const Flux& flux,
                     const std::function<double(double)>& etaprime, double lo,
                     double hi, double feature_scale) {
  QTable t;
  t.lo = lo;
  t.hi = hi;
  const double target = std::max(1e-4, feature_scale / 24.0);
  const auto cells = static_cast<std::size_t>(std::ceil((hi - lo) / target));
  t.h = (hi - lo) / static_cast<double>(cells);
  t.w.resize(cells + 1);
  t.q.resize(cells + 1);
  t.qp.resize(cells + 1);
  auto integrand = [&](double v) { return etaprime(v) * flux.fprime(v); };
  for (std::size_t i = 0; i <= cells; ++i) {
    t.w[i] = lo + t.h * static_cast<double>(i);
    t.qp[i] = integrand(t.w[i]);
  }
  t.q[0] = 0.0;
  for (std::size_t i = 1; i <= cells; ++i) {
    t.q[i] = t.q[i - 1] + detail::gauss5(integrand, t.w[i - 1], t.w[i]);
  }
  // anchor q(0) = 0 when 0 is inside the range
  if (lo < 0.0 && hi > 0.0) {
    QTable raw = t;
    const double q0 = raw.eval(0.0);
    for (auto& v : t.q) v -= q0;
  }
  return t;
}

/// Hann-kink primitives on xi = (w-c)/h in [-1, 1].
double kink_S(double xi) {
  if (xi <= -1.0) return 0.0;
  if (xi >= 1.0) return 1.0;
  return 0.5 * (xi + 1.0) + std::sin(kPi * xi) / (2.0 * kPi);
}

double kink_K(double w, double c, double h) {
  const double xi = (w - c) / h;
  if (xi <= -1.0) return 0.0;
  if (xi >= 1.0) return w - c;
  const double p = xi + 1.0;
  return h * (0.25 * p * p - std::cos(kPi * xi) / (2.0 * kPi * kPi) -
              1.0 / (2.0 * kPi * kPi));
}

double kink_bump(double w, double c, double h) {
  const double xi = (w - c) / h;
  if (std::abs(xi) >= 1.0) return 0.0;
  const double cc = std::cos(0.5 * kPi * xi);
  return cc * cc / h;
}

double hann(double xi) {
  if (std::abs(xi) >= 1.0) return 0.0;
  const double c = std::cos(0.5 * kPi * xi);
  return c * c;
}

double dhann(double xi, double halfwidth) {
  if (std::abs(xi) >= 1.0) return 0.0;
  return -kPi / (2.0 * halfwidth) * std::sin(kPi * xi);
}

}  // namespace

EntropyPair make_pair(const Flux& flux, std::string name,
                      std::function<double(double)> eta,
                      std::function<double(double)> etaprime,
                      std::function<double(double)> etasecond,
                      double range_lo, double range_hi,
                      double feature_scale) {
  auto table = std::make_shared<QTable>(
      build_q_table(flux, etaprime, range_lo, range_hi, feature_scale));
  EntropyPair p;
  p.name = std::move(name);
  p.eta = std::move(eta);
  p.etaprime = std::move(etaprime);
  p.etasecond = std::move(etasecond);
  p.q = [table](double w) { return table->eval(w); };
  p.range_lo = range_lo;
  p.range_hi = range_hi;
  return p;
}

EntropyPair quadratic_pair(const Flux& flux, double range_lo,
                           double range_hi) {
  return make_pair(
      flux, "quadratic", [](double v) { return 0.5 * v * v; },
      [](double v) { return v; }, [](double) { return 1.0; }, range_lo,
      range_hi);
}

EntropyPair identity_pair(const Flux& flux, double range_lo, double range_hi) {
  // q = f up to the additive anchor; use f directly.
  const double f0 = flux.f(0.0);
  EntropyPair p;
  p.name = "identity";
  p.eta = [](double v) { return v; };
  p.etaprime = [](double) { return 1.0; };
  p.etasecond = [](double) { return 0.0; };
  p.q = [f = flux.f, f0](double w) { return f(w) - f0; };
  p.range_lo = range_lo;
  p.range_hi = range_hi;
  return p;
}

EntropyPair kink_pair(const Flux& flux, double center, double halfwidth,
                      double range_lo, double range_hi) {
  const double c = center, h = halfwidth;
  // cache q on the bump support only; the tails are exact:
  //   q(w) = 0 below, q(c+h) + f(w) - f(c+h) above.
  auto core = std::make_shared<QTable>(build_q_table(
      flux, [c, h](double v) { return kink_S((v - c) / h); }, c - h, c + h,
      h));
  const double q_hi = core->q.back() - core->q.front();
  const double q_anchor = core->eval(c - h);
  EntropyPair p;
  p.name = "kink@" + std::to_string(center);
  p.eta = [c, h](double v) { return kink_K(v, c, h); };
  p.etaprime = [c, h](double v) { return kink_S((v - c) / h); };
  p.etasecond = [c, h](double v) { return kink_bump(v, c, h); };
  p.q = [core, q_anchor, q_hi, c, h, f = flux.f](double w) {
    if (w <= c - h) return 0.0;
    if (w >= c + h) return q_hi + f(w) - f(c + h);
    return core->eval(w) - q_anchor;
  };
  p.range_lo = range_lo;
  p.range_hi = range_hi;
  return p;
}

TestFunction tensor_bump(double tc, double t_halfwidth, double xc,
                         double x_halfwidth) {
  auto xdist = [xc](double x) {
    double d = x - xc + 0.5;
    d -= std::floor(d);
    return d - 0.5;
  };
  TestFunction tf;
  tf.phi = [=](double t, double x) {
    return hann((t - tc) / t_halfwidth) * hann(xdist(x) / x_halfwidth);
  };
  tf.dphi_dt = [=](double t, double x) {
    return dhann((t - tc) / t_halfwidth, t_halfwidth) *
           hann(xdist(x) / x_halfwidth);
  };
  tf.dphi_dx = [=](double t, double x) {
    return hann((t - tc) / t_halfwidth) *
           dhann(xdist(x) / x_halfwidth, x_halfwidth);
  };
  return tf;
}

TestFunction gridded_test_function(const std::vector<std::vector<double>>& phi,
                                   double dt, std::size_t n) {
  auto grid = std::make_shared<std::vector<std::vector<double>>>(phi);
  const double dx = 1.0 / static_cast<double>(n);
  auto at = [grid](std::size_t j, std::size_t i) { return (*grid)[j][i]; };
  const std::size_t nt = phi.size() - 1;
  auto jx = [=](double t, double x) {
    auto j = static_cast<std::size_t>(std::min(
        std::max(std::lround(t / dt), 0l), static_cast<long>(nt)));
    auto i = static_cast<std::size_t>(std::lround(x / dx)) % n;
    return std::pair{j, i};
  };
  TestFunction tf;
  tf.phi = [=](double t, double x) {
    auto [j, i] = jx(t, x);
    return at(j, i);
  };
  tf.dphi_dt = [=](double t, double x) {
    auto [j, i] = jx(t, x);
    const double up = j < nt ? at(j + 1, i) : 0.0;
    const double dn = j > 0 ? at(j - 1, i) : 0.0;
    return (up - dn) / (2.0 * dt);
  };
  tf.dphi_dx = [=](double t, double x) {
    auto [j, i] = jx(t, x);
    return (at(j, (i + 1) % n) - at(j, (i + n - 1) % n)) / (2.0 * dx);
  };
  return tf;
}

double production(const Trajectory& traj, const EntropyPair& pair,
                  const TestFunction& phi) {
  const std::size_t nt = traj.snapshots.size() - 1;
  const std::size_t n = traj.grid().size();
  const double dt = traj.dt(), dx = traj.grid().dx();
  const double T = traj.horizon();

  for (std::size_t i = 0; i < n; ++i) {
    const double x = traj.grid().x(i);
    if (std::abs(phi.phi(0.0, x)) > 1e-12 ||
        std::abs(phi.phi(T, x)) > 1e-12) {
      throw SupportViolation(
          "test function does not vanish on the first/last time slice");
    }
  }

  double acc = 0.0;
  for (std::size_t j = 0; j <= nt; ++j) {
    const double wj = (j == 0 || j == nt) ? 0.5 : 1.0;
    const double t = dt * static_cast<double>(j);
    const auto& u = traj.snapshots[j];
    double row = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double x = traj.grid().x(i);
      row += pair.eta(u[i]) * phi.dphi_dt(t, x) +
             pair.q(u[i]) * phi.dphi_dx(t, x);
    }
    acc += wj * dt * dx * row;
  }
  return -acc;
}

ShockRateForms shock_production_forms(double u_minus, double u_plus,
                                      const Flux& flux,
                                      const EntropyPair& pair) {
  const double jump = u_plus - u_minus;
  if (std::abs(jump) < 1e-10 * std::max({1.0, std::abs(u_plus),
                                         std::abs(u_minus)})) {
    throw DegenerateJump("states coincide, no jump");
  }
  const double sigma = (flux.f(u_plus) - flux.f(u_minus)) / jump;
  ShockRateForms out;
  out.jump_form = pair.q(u_plus) - pair.q(u_minus) -
                  sigma * (pair.eta(u_plus) - pair.eta(u_minus));
  auto chord_dev = [&](double v) {
    const double chord = flux.f(u_minus) + sigma * (v - u_minus);
    return pair.etasecond(v) * (chord - flux.f(v));
  };
  out.chord_form = detail::integrate(chord_dev, u_minus, u_plus, 1e-12);
  return out;
}

double shock_production_rate(double u_minus, double u_plus, const Flux& flux,
                             const EntropyPair& pair) {
  const auto forms = shock_production_forms(u_minus, u_plus, flux, pair);
  const double scale =
      std::max(1.0, std::max(std::abs(forms.jump_form),
                             std::abs(forms.chord_form)));
  if (std::abs(forms.jump_form - forms.chord_form) > 1e-7 * scale) {
    throw Error("shock production rate: jump and chord forms disagree (" +
                std::to_string(forms.jump_form) + " vs " +
                std::to_string(forms.chord_form) + ")");
  }
  return forms.jump_form;
}

namespace {

struct WindowSet {
  std::vector<double> t_centers, x_centers;
  double t_hw = 0.0, x_hw = 0.0;
  // sampled on the trajectory grid
  std::vector<std::vector<double>> Wt, dWt;    // [ct][j]
  std::vector<std::vector<double>> Wx, dWx;    // [cx][i]
  double coverage = 1.0;
};

WindowSet build_windows(const Trajectory& traj, std::size_t n_tc,
                        std::size_t n_xc) {
  const std::size_t nt = traj.snapshots.size() - 1;
  const std::size_t n = traj.grid().size();
  const double dt = traj.dt();
  const double T = traj.horizon();
  WindowSet ws;
  ws.t_hw = T / static_cast<double>(n_tc);
  ws.x_hw = 1.0 / static_cast<double>(n_xc);
  for (std::size_t c = 1; c < n_tc; ++c) {
    ws.t_centers.push_back(ws.t_hw * static_cast<double>(c));
  }
  for (std::size_t c = 0; c < n_xc; ++c) {
    ws.x_centers.push_back(ws.x_hw * static_cast<double>(c));
  }
  ws.coverage = static_cast<double>(n_tc - 1) / static_cast<double>(n_tc);
  ws.Wt.resize(ws.t_centers.size());
  ws.dWt.resize(ws.t_centers.size());
  for (std::size_t c = 0; c < ws.t_centers.size(); ++c) {
    ws.Wt[c].resize(nt + 1);
    ws.dWt[c].resize(nt + 1);
    for (std::size_t j = 0; j <= nt; ++j) {
      const double xi = (dt * static_cast<double>(j) - ws.t_centers[c]) / ws.t_hw;
      ws.Wt[c][j] = hann(xi);
      ws.dWt[c][j] = dhann(xi, ws.t_hw);
    }
  }
  ws.Wx.resize(n_xc);
  ws.dWx.resize(n_xc);
  for (std::size_t c = 0; c < n_xc; ++c) {
    ws.Wx[c].resize(n);
    ws.dWx[c].resize(n);
    for (std::size_t i = 0; i < n; ++i) {
      double d = traj.grid().x(i) - ws.x_centers[c] + 0.5;
      d -= std::floor(d);
      d -= 0.5;
      ws.Wx[c][i] = hann(d / ws.x_hw);
      ws.dWx[c][i] = dhann(d / ws.x_hw, ws.x_hw);
    }
  }
  return ws;
}

/// Window-tested production of one entropy: out[ct][cx] =
/// -sum_j w_j dt dx sum_i [ev*dWt*Wx + qv*Wt*dWx].
void tested_production(const Trajectory& traj,
                       const std::vector<std::vector<double>>& ev,
                       const std::vector<std::vector<double>>& qv,
                       const WindowSet& ws, std::vector<double>* out) {
  const std::size_t nt = traj.snapshots.size() - 1;
  const std::size_t n = traj.grid().size();
  const double dt = traj.dt(), dx = traj.grid().dx();
  out->assign(ws.t_centers.size() * ws.x_centers.size(), 0.0);
  std::vector<double> a(n), b(n);
  for (std::size_t ct = 0; ct < ws.t_centers.size(); ++ct) {
    std::fill(a.begin(), a.end(), 0.0);
    std::fill(b.begin(), b.end(), 0.0);
    for (std::size_t j = 0; j <= nt; ++j) {
      const double wt = ws.Wt[ct][j], dwt = ws.dWt[ct][j];
      if (wt == 0.0 && dwt == 0.0) continue;
      const double wj = (j == 0 || j == nt) ? 0.5 : 1.0;
      for (std::size_t i = 0; i < n; ++i) {
        a[i] += wj * dt * ev[j][i] * dwt;
        b[i] += wj * dt * qv[j][i] * wt;
      }
    }
    for (std::size_t cx = 0; cx < ws.x_centers.size(); ++cx) {
      double acc = 0.0;
      for (std::size_t i = 0; i < n; ++i) {
        acc += a[i] * ws.Wx[cx][i] + b[i] * ws.dWx[cx][i];
      }
      (*out)[ct * ws.x_centers.size() + cx] = -acc * dx;
    }
  }
}

}  // namespace

EntropyMeasure measure_estimate(
    const Trajectory& traj, std::size_t n_v, std::size_t n_tc,
    std::size_t n_xc, std::optional<std::pair<double, double>> v_range) {
  if (n_v < 2 || n_tc < 2 || n_xc < 1) {
    throw ConfigError("measure_estimate: cell counts too small");
  }
  auto [lo, hi] = traj.value_range();
  if (v_range) {
    if (lo < v_range->first || hi > v_range->second) {
      throw RangeExceeded("trajectory values leave the declared v-range");
    }
    lo = v_range->first;
    hi = v_range->second;
  } else {
    const double pad = 0.1 * (hi - lo + 1e-30);
    lo -= pad;
    hi += pad;
  }

  const Flux flux = make_flux(traj.flux_id);
  const std::size_t nt = traj.snapshots.size() - 1;
  const std::size_t n = traj.grid().size();

  EntropyMeasure m;
  m.dv = (hi - lo) / static_cast<double>(n_v);
  for (std::size_t i = 0; i < n_v; ++i) {
    m.v_centers.push_back(lo + m.dv * (static_cast<double>(i) + 0.5));
  }
  WindowSet ws = build_windows(traj, n_tc, n_xc);
  m.t_centers = ws.t_centers;
  m.t_halfwidth = ws.t_hw;
  m.x_centers = ws.x_centers;
  m.x_halfwidth = ws.x_hw;
  m.coverage = ws.coverage;
  m.window_area = ws.t_hw * ws.x_hw;

  m.production_raw.assign(n_v * ws.t_centers.size() * ws.x_centers.size(),
                          0.0);
  std::vector<std::vector<double>> ev(nt + 1, std::vector<double>(n));
  std::vector<std::vector<double>> qv(nt + 1, std::vector<double>(n));
  std::vector<double> tested;
  for (std::size_t iv = 0; iv < n_v; ++iv) {
    const EntropyPair pair = kink_pair(flux, m.v_centers[iv], m.dv, lo, hi);
    for (std::size_t j = 0; j <= nt; ++j) {
      const auto& u = traj.snapshots[j];
      for (std::size_t i = 0; i < n; ++i) {
        ev[j][i] = pair.eta(u[i]);
        qv[j][i] = pair.q(u[i]);
      }
    }
    tested_production(traj, ev, qv, ws, &tested);
    std::copy(tested.begin(), tested.end(),
              m.production_raw.begin() +
                  static_cast<std::ptrdiff_t>(iv * tested.size()));
  }

  m.density.resize(m.production_raw.size());
  for (std::size_t i = 0; i < m.density.size(); ++i) {
    m.density[i] = m.production_raw[i] / m.window_area;
  }
  m.v_marginal_positive.assign(n_v, 0.0);
  for (std::size_t iv = 0; iv < n_v; ++iv) {
    double pos = 0.0;
    for (std::size_t c = 0; c < tested.size(); ++c) {
      const double p = m.production_raw[iv * tested.size() + c];
      if (p > 0.0) {
        pos += p;
      } else {
        m.negative_mass -= p;
      }
    }
    m.v_marginal_positive[iv] = pos / m.coverage;
    m.positive_mass += pos;
  }
  m.positive_mass *= m.dv / m.coverage;
  m.negative_mass *= m.dv / m.coverage;
  return m;
}

HyperbolicCost cost_i(const Trajectory& traj, std::size_t n_v,
                      std::size_t n_tc, std::size_t n_xc) {
  HyperbolicCost out;
  const Flux flux = make_flux(traj.flux_id);
  auto [lo, hi] = traj.value_range();
  const double pad = 0.1 * (hi - lo + 1e-30);

  // weak-solution gate: affine entropy against every window
  const EntropyPair id_pair = identity_pair(flux, lo - pad, hi + pad);
  WindowSet ws = build_windows(traj, n_tc, n_xc);
  const std::size_t nt = traj.snapshots.size() - 1;
  const std::size_t n = traj.grid().size();
  std::vector<std::vector<double>> ev(nt + 1, std::vector<double>(n));
  std::vector<std::vector<double>> qv(nt + 1, std::vector<double>(n));
  for (std::size_t j = 0; j <= nt; ++j) {
    const auto& u = traj.snapshots[j];
    for (std::size_t i = 0; i < n; ++i) {
      ev[j][i] = u[i];
      qv[j][i] = id_pair.q(u[i]);
    }
  }
  std::vector<double> gate;
  tested_production(traj, ev, qv, ws, &gate);
  double gate_sum_abs = 0.0;
  for (double g : gate) {
    out.gate_max = std::max(out.gate_max, std::abs(g));
    gate_sum_abs += std::abs(g);
  }
  double scale = 1.0;
  for (double v : {std::abs(lo), std::abs(hi)}) {
    scale = std::max(scale, v);
    scale = std::max(scale, std::abs(flux.f(v)));
  }
  out.gate_tol = 20.0 * scale * (traj.grid().dx() + traj.dt());
  if (out.gate_max > out.gate_tol) {
    out.finite = false;
    out.i = std::numeric_limits<double>::infinity();
    out.i_theta_sup = out.i;
    return out;
  }

  out.measure = measure_estimate(traj, n_v, n_tc, n_xc);
  out.i = out.measure.positive_mass;
  out.noise_floor = out.measure.dv * static_cast<double>(n_v) * gate_sum_abs;

  // Lower-bound functional: theta'' = indicator of clearly-positive cells
  // (Hann bump in v, tensor window in (t,x), scaled into [0,1]); evaluated
  // with finite-difference window derivatives, an independent route to the
  // same grid sums.
  const std::size_t ncells = ws.t_centers.size() * ws.x_centers.size();
  double praw_max = 0.0;
  for (double p : out.measure.production_raw) {
    praw_max = std::max(praw_max, p);
  }
  const double thr = 0.02 * praw_max;
  const double dt = traj.dt(), dx = traj.grid().dx();
  double theta_sum = 0.0;
  for (std::size_t iv = 0; iv < n_v; ++iv) {
    bool any = false;
    for (std::size_t c = 0; c < ncells; ++c) {
      if (out.measure.production_raw[iv * ncells + c] > thr) any = true;
    }
    if (!any) continue;
    const EntropyPair pair =
        kink_pair(flux, out.measure.v_centers[iv], out.measure.dv,
                  lo - pad, hi + pad);
    for (std::size_t j = 0; j <= nt; ++j) {
      const auto& u = traj.snapshots[j];
      for (std::size_t i = 0; i < n; ++i) {
        ev[j][i] = pair.eta(u[i]);
        qv[j][i] = pair.q(u[i]);
      }
    }
    for (std::size_t ct = 0; ct < ws.t_centers.size(); ++ct) {
      for (std::size_t cx = 0; cx < ws.x_centers.size(); ++cx) {
        if (out.measure.production_raw[(iv * ws.t_centers.size() + ct) *
                                           ws.x_centers.size() +
                                       cx] <= thr) {
          continue;
        }
        double acc = 0.0;
        for (std::size_t j = 0; j <= nt; ++j) {
          const double wj = (j == 0 || j == nt) ? 0.5 : 1.0;
          const double wt = ws.Wt[ct][j];
          const double dwt_fd =
              ((j < nt ? ws.Wt[ct][j + 1] : 0.0) -
               (j > 0 ? ws.Wt[ct][j - 1] : 0.0)) /
              (2.0 * dt);
          if (wt == 0.0 && dwt_fd == 0.0) continue;
          for (std::size_t i = 0; i < n; ++i) {
            const double dwx_fd = (ws.Wx[cx][(i + 1) % n] -
                                   ws.Wx[cx][(i + n - 1) % n]) /
                                  (2.0 * dx);
            acc += wj * (ev[j][i] * dwt_fd * ws.Wx[cx][i] +
                         qv[j][i] * wt * dwx_fd);
          }
        }
        theta_sum += -acc * dt * dx;
      }
    }
  }
  out.i_theta_sup = theta_sum * out.measure.dv / out.measure.coverage;
  return out;
}

}  // namespace fraclaw::entropy
