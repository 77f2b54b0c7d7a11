#include "fraclaw/flux.hpp"

#include <algorithm>
#include <cmath>

namespace fraclaw {

namespace {

constexpr int kProbePoints = 10001;  // 10^4 intervals on [-10,10]

double adaptive_simpson(const std::function<double(double)>& g, double a,
                        double b, double fa, double fm, double fb, double eps,
                        int depth) {
  const double m = 0.5 * (a + b);
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = g(lm), frm = g(rm);
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  const double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double delta = left + right - whole;
  if (depth <= 0 || std::abs(delta) <= 15.0 * eps) {
    return left + right + delta / 15.0;
  }
  return adaptive_simpson(g, a, m, fa, flm, fm, eps * 0.5, depth - 1) +
         adaptive_simpson(g, m, b, fm, frm, fb, eps * 0.5, depth - 1);
}

double integrate(const std::function<double(double)>& g, double a, double b,
                 double eps = 1e-12) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  return adaptive_simpson(g, a, b, g(a), g(m), g(b), eps, 40);
}

}  // namespace

void Flux::build_tables() const {
  if (!probe_abs_fprime_.empty()) return;
  probe_abs_fprime_.resize(kProbePoints);
  eo_plus_.resize(kProbePoints);
  eo_minus_.resize(kProbePoints);
  const double h = (probe_hi_ - probe_lo_) / (kProbePoints - 1);
  for (int i = 0; i < kProbePoints; ++i) {
    probe_abs_fprime_[i] = std::abs(fprime(probe_lo_ + i * h));
  }
  // Cumulative trapezoid of max(f',0) and min(f',0) anchored at 0.
  std::vector<double> plus(kProbePoints), minus(kProbePoints);
  plus[0] = minus[0] = 0.0;
  for (int i = 1; i < kProbePoints; ++i) {
    const double a = probe_lo_ + (i - 1) * h, b = probe_lo_ + i * h;
    const double pa = std::max(fprime(a), 0.0), pb = std::max(fprime(b), 0.0);
    const double ma = std::min(fprime(a), 0.0), mb = std::min(fprime(b), 0.0);
    plus[i] = plus[i - 1] + 0.5 * h * (pa + pb);
    minus[i] = minus[i - 1] + 0.5 * h * (ma + mb);
  }
  const int i0 = static_cast<int>(std::lround((0.0 - probe_lo_) / h));
  for (int i = 0; i < kProbePoints; ++i) {
    eo_plus_[i] = plus[i] - plus[i0];
    eo_minus_[i] = minus[i] - minus[i0];
  }
}

double Flux::max_fprime(double lo, double hi) const {
  build_tables();
  const double h = (probe_hi_ - probe_lo_) / (kProbePoints - 1);
  int ilo = static_cast<int>(std::floor((lo - probe_lo_) / h));
  int ihi = static_cast<int>(std::ceil((hi - probe_lo_) / h));
  ilo = std::clamp(ilo, 0, kProbePoints - 1);
  ihi = std::clamp(ihi, 0, kProbePoints - 1);
  double m = std::max(std::abs(fprime(lo)), std::abs(fprime(hi)));
  for (int i = ilo; i <= ihi; ++i) m = std::max(m, probe_abs_fprime_[i]);
  return m;
}

double Flux::eo_flux(double a, double b) const {
  build_tables();
  const double h = (probe_hi_ - probe_lo_) / (kProbePoints - 1);
  auto lookup = [&](const std::vector<double>& t, double w) {
    const double pos = (w - probe_lo_) / h;
    if (pos <= 0.0 || pos >= kProbePoints - 1) {
      throw RangeExceeded("eo_flux: state " + std::to_string(w) +
                          " outside the probe range [-10,10]");
    }
    const int i = static_cast<int>(pos);
    const double frac = pos - i;
    return t[i] * (1.0 - frac) + t[i + 1] * frac;
  };
  return f(0.0) + lookup(eo_plus_, a) + lookup(eo_minus_, b);
}

double Flux::conjugate_flux(const std::function<double(double)>& etaprime,
                            double w) const {
  auto g = [&](double v) { return etaprime(v) * fprime(v); };
  return integrate(g, 0.0, w);
}

Flux make_flux(const std::string& id, double linear_speed) {
  Flux fx;
  fx.id = id;
  if (id == "sin") {
    fx.f = [](double u) { return std::sin(u); };
    fx.fprime = [](double u) { return std::cos(u); };
    fx.bounded = true;
    fx.globally_lipschitz = true;
    fx.lipschitz_constant = 1.0;
  } else if (id == "saturated") {
    fx.f = [](double u) { return u / (1.0 + u * u); };
    fx.fprime = [](double u) {
      const double d = 1.0 + u * u;
      return (1.0 - u * u) / (d * d);
    };
    fx.bounded = true;
    fx.globally_lipschitz = true;
    fx.lipschitz_constant = 1.0;
  } else if (id == "burgers") {
    fx.f = [](double u) { return 0.5 * u * u; };
    fx.fprime = [](double u) { return u; };
    fx.bounded = false;
    fx.globally_lipschitz = false;
    fx.lipschitz_constant = 10.0;  // sup |f'| over the probe range
    fx.deviation_note =
        "flux 'burgers' is not bounded/globally Lipschitz; admitted because "
        "all experiments keep data in a fixed compact range";
  } else if (id == "linear") {
    const double c = linear_speed;
    fx.f = [c](double u) { return c * u; };
    fx.fprime = [c](double) { return c; };
    fx.bounded = false;
    fx.globally_lipschitz = true;
    fx.lipschitz_constant = std::abs(c);
    fx.deviation_note = "flux 'linear' is test-only (affine, unbounded)";
  } else {
    throw ConfigError("unknown flux id '" + id + "'");
  }
  // Lipschitz probe on [-10,10].
  fx.build_tables();
  const double measured =
      *std::max_element(fx.probe_abs_fprime_.begin(),
                        fx.probe_abs_fprime_.end());
  if (fx.globally_lipschitz &&
      measured > fx.lipschitz_constant * (1.0 + 1e-9)) {
    throw ConfigError("flux '" + id + "' violates its Lipschitz constant");
  }
  fx.lipschitz_constant = std::max(fx.lipschitz_constant, measured);
  return fx;
}

}  // namespace fraclaw
