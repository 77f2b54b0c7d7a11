#include "fraclaw/extension.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "fraclaw/spectral.hpp"

namespace fraclaw::extension {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Tridiagonal solve (Thomas); diag/off sized n, n-1.
std::vector<double> thomas(std::vector<double> diag, std::vector<double> lower,
                           std::vector<double> upper, std::vector<double> rhs) {
  const std::size_t n = diag.size();
  for (std::size_t i = 1; i < n; ++i) {
    const double m = lower[i - 1] / diag[i - 1];
    diag[i] -= m * upper[i - 1];
    rhs[i] -= m * rhs[i - 1];
  }
  std::vector<double> x(n);
  x[n - 1] = rhs[n - 1] / diag[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) {
    x[i] = (rhs[i] - upper[i] * x[i + 1]) / diag[i];
  }
  return x;
}

/// Exact flux coefficient int_{a}^{b} z^{2s-1} dz of the two-point problem.
double flux_coeff(double a, double b, double s) {
  return (std::pow(b, 2.0 * s) - std::pow(a, 2.0 * s)) / (2.0 * s);
}

/// int_a^b z^{1-2s} (linear interpolant of g) dz, exact weight moments.
double weighted_linear_cell(double a, double b, double ga, double gb,
                            double s) {
  const double p1 = 2.0 - 2.0 * s, p2 = 3.0 - 2.0 * s;
  const double I1 = (std::pow(b, p1) - std::pow(a, p1)) / p1;
  const double I2 = (std::pow(b, p2) - std::pow(a, p2)) / p2;
  const double slope = (gb - ga) / (b - a);
  return ga * I1 + slope * (I2 - a * I1);
}

struct ProfileSolve {
  std::vector<double> z, theta;
  double ell = 0.0;
};

ProfileSolve solve_once(double s, double Z, std::size_t M, double gamma) {
  std::vector<double> z(M + 1);
  for (std::size_t i = 0; i <= M; ++i) {
    z[i] = Z * std::pow(static_cast<double>(i) / static_cast<double>(M), gamma);
  }
  std::vector<double> C(M);
  for (std::size_t i = 0; i < M; ++i) C[i] = flux_coeff(z[i], z[i + 1], s);

  // dual-cell mass weights int z^{1-2s} over (z_{i-1/2}, z_{i+1/2})
  const double p = 2.0 - 2.0 * s;
  std::vector<double> Mw(M + 1, 0.0);
  for (std::size_t i = 1; i < M; ++i) {
    const double a = 0.5 * (z[i - 1] + z[i]);
    const double b = 0.5 * (z[i] + z[i + 1]);
    Mw[i] = (std::pow(b, p) - std::pow(a, p)) / p;
  }

  std::vector<double> diag(M - 1), lower(M - 2), upper(M - 2), rhs(M - 1, 0.0);
  for (std::size_t i = 1; i < M; ++i) {
    const std::size_t j = i - 1;
    diag[j] = 1.0 / C[i - 1] + 1.0 / C[i] + Mw[i];
    if (j > 0) lower[j - 1] = -1.0 / C[i - 1];
    if (j < M - 2) upper[j] = -1.0 / C[i];
  }
  rhs[0] = 1.0 / C[0];  // theta(0) = 1 Dirichlet
  auto inner = thomas(diag, lower, upper, rhs);

  ProfileSolve out;
  out.z = std::move(z);
  out.theta.resize(M + 1);
  out.theta[0] = 1.0;
  std::copy(inner.begin(), inner.end(), out.theta.begin() + 1);
  out.theta[M] = 0.0;

  // ell via the flux integral identity at z ~ 1.5: F(0) = F(z*) -
  // int_0^{z*} z^{1-2s} theta dz, with the first cell integrated through
  // the local model theta = 1 + alpha z^{2s}.
  const auto istar = static_cast<std::size_t>(
      std::lower_bound(out.z.begin(), out.z.end(), 1.5) - out.z.begin());
  const std::size_t is = std::clamp<std::size_t>(istar, 8, M - 2);
  const double Fstar = (out.theta[is + 1] - out.theta[is]) / C[is];
  const double zm = 0.5 * (out.z[is] + out.z[is + 1]);

  const double alpha = (out.theta[1] - 1.0) / std::pow(out.z[1], 2.0 * s);
  double I = std::pow(out.z[1], p) / p + 0.5 * alpha * out.z[1] * out.z[1];
  for (std::size_t i = 1; i < is; ++i) {
    I += weighted_linear_cell(out.z[i], out.z[i + 1], out.theta[i],
                              out.theta[i + 1], s);
  }
  I += weighted_linear_cell(out.z[is], zm, out.theta[is],
                            0.5 * (out.theta[is] + out.theta[is + 1]), s);
  out.ell = -(Fstar - I);
  return out;
}

/// Fritsch-Carlson monotone cubic slopes.
std::vector<double> pchip_slopes(const std::vector<double>& x,
                                 const std::vector<double>& y) {
  const std::size_t n = x.size();
  std::vector<double> d(n - 1), m(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    d[i] = (y[i + 1] - y[i]) / (x[i + 1] - x[i]);
  }
  m[0] = d[0];
  m[n - 1] = d[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0.0) {
      m[i] = 0.0;
    } else {
      const double w1 = 2.0 * (x[i + 1] - x[i]) + (x[i] - x[i - 1]);
      const double w2 = (x[i + 1] - x[i]) + 2.0 * (x[i] - x[i - 1]);
      m[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
    }
  }
  return m;
}

}  // namespace

std::vector<double> GradedGrid::nodes() const {
  std::vector<double> y(cells + 1);
  for (std::size_t i = 0; i <= cells; ++i) {
    y[i] = extent *
           std::pow(static_cast<double>(i) / static_cast<double>(cells),
                    grading);
  }
  return y;
}

ExtensionProfile ExtensionProfile::solve(double s, const GradedGrid& grid) {
  if (!(s > 0.5 && s < 1.0)) {
    throw InvalidOrder("extension profile requires s in (1/2, 1)");
  }
  if (grid.extent < 30.0) {
    throw ConfigError("profile grid extent must be >= 30");
  }
  const auto coarse = solve_once(s, grid.extent, grid.cells, grid.grading);
  const auto fine = solve_once(s, grid.extent, 2 * grid.cells, grid.grading);
  const double ell = (4.0 * fine.ell - coarse.ell) / 3.0;
  if (std::abs(fine.ell - coarse.ell) > 1e-4 * std::abs(ell)) {
    throw UnresolvedLayer("ell estimate not Cauchy under refinement: " +
                          std::to_string(coarse.ell) + " vs " +
                          std::to_string(fine.ell));
  }
  if (!(ell > 0.0) || !std::isfinite(ell)) {
    throw UnresolvedLayer("ell extraction failed");
  }
  ExtensionProfile p;
  p.s_ = s;
  p.ell_ = ell;
  p.z_ = fine.z;
  p.theta_ = fine.theta;
  p.slope_ = pchip_slopes(p.z_, p.theta_);
  return p;
}

double ExtensionProfile::value(double z) const {
  if (z <= 0.0) return 1.0;
  if (z >= z_.back()) return 0.0;
  const auto it = std::upper_bound(z_.begin(), z_.end(), z);
  const auto i = static_cast<std::size_t>(it - z_.begin()) - 1;
  const double h = z_[i + 1] - z_[i];
  const double t = (z - z_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  return (2 * t3 - 3 * t2 + 1) * theta_[i] + (t3 - 2 * t2 + t) * h * slope_[i] +
         (-2 * t3 + 3 * t2) * theta_[i + 1] + (t3 - t2) * h * slope_[i + 1];
}

double ExtensionProfile::energy_integral() const {
  const double s = s_;
  const std::size_t M = z_.size() - 1;
  const double alpha = (theta_[1] - 1.0) / std::pow(z_[1], 2.0 * s);
  // first cell: theta ~ 1, theta' ~ 2s alpha z^{2s-1}
  double acc = std::pow(z_[1], 2.0 - 2.0 * s) / (2.0 - 2.0 * s);
  acc += 4.0 * s * s * alpha * alpha * std::pow(z_[1], 2.0 * s) / (2.0 * s);
  for (std::size_t i = 1; i < M; ++i) {
    const double slope = (theta_[i + 1] - theta_[i]) / (z_[i + 1] - z_[i]);
    const double p1 = 2.0 - 2.0 * s;
    const double I1 = (std::pow(z_[i + 1], p1) - std::pow(z_[i], p1)) / p1;
    acc += slope * slope * I1;
    acc += weighted_linear_cell(z_[i], z_[i + 1], theta_[i] * theta_[i],
                                theta_[i + 1] * theta_[i + 1], s);
  }
  return acc;
}

GradedGrid default_y_grid(double s, double extent, std::size_t cells) {
  return {.extent = extent,
          .cells = cells,
          .grading = std::max(2.0, 1.0 / (2.0 - 2.0 * s))};
}

ExtensionField extend(const Field& u, const ExtensionProfile& profile,
                      const GradedGrid& ygrid) {
  ExtensionField ext;
  ext.boundary = u;
  ext.s = profile.s();
  ext.y = ygrid.nodes();
  const std::size_t n = u.size();
  ext.values.assign(ext.y.size(), std::vector<double>(n, 0.0));
  ext.values[0].assign(u.values().begin(), u.values().end());

  const auto uhat = u.spectrum();
  for (std::size_t j = 1; j < ext.y.size(); ++j) {
    std::vector<std::complex<double>> layer(uhat.begin(), uhat.end());
    for (std::size_t k = 1; k < layer.size(); ++k) {
      layer[k] *= profile.value(kTwoPi * static_cast<double>(k) * ext.y[j]);
    }
    ext.values[j] = detail::dft_inverse(layer, n);
  }
  return ext;
}

ExtensionField extend(const Field& u, double s) {
  const auto profile = ExtensionProfile::solve(s);
  return extend(u, profile, default_y_grid(s));
}

namespace {

/// Per-mode weighted flux limit -lim y^{1-2s} psi'(y) from y-grid samples,
/// via the flux integral identity (separately for real and imaginary
/// parts, which satisfy the same real ODE).
double mode_flux_limit(const std::vector<double>& y,
                       const std::vector<double>& psi, double s, double k2pi,
                       std::size_t istar) {
  const double Fstar =
      (psi[istar + 1] - psi[istar]) / flux_coeff(y[istar], y[istar + 1], s);
  const double ym = 0.5 * (y[istar] + y[istar + 1]);
  const double p = 2.0 - 2.0 * s;
  const double alpha = (psi[1] - psi[0]) / std::pow(y[1], 2.0 * s);
  double I = psi[0] * std::pow(y[1], p) / p + 0.5 * alpha * y[1] * y[1];
  for (std::size_t i = 1; i < istar; ++i) {
    I += weighted_linear_cell(y[i], y[i + 1], psi[i], psi[i + 1], s);
  }
  I += weighted_linear_cell(y[istar], ym, psi[istar],
                            0.5 * (psi[istar] + psi[istar + 1]), s);
  return -(Fstar - k2pi * k2pi * I);
}

}  // namespace

DtNResult dirichlet_to_neumann(const ExtensionField& ext,
                               const ExtensionProfile& profile) {
  const Field& u = ext.boundary;
  const std::size_t n = u.size();
  const double s = ext.s;
  const auto uhat = u.spectrum();
  const std::size_t M = ext.y.size() - 1;

  DtNResult out{Field(u.grid()), 1.0 / profile.ell(), 0.0};
  std::vector<std::complex<double>> dtn(uhat.size(), {0.0, 0.0});

  // per-layer spectra
  std::vector<std::vector<std::complex<double>>> layers(ext.y.size());
  for (std::size_t j = 0; j < ext.y.size(); ++j) {
    layers[j] = detail::dft_forward(ext.values[j]);
  }

  const double umax = u.l2_norm();
  std::vector<double> re(ext.y.size()), im(ext.y.size());
  for (std::size_t k = 1; k < uhat.size(); ++k) {
    const double k2pi = kTwoPi * static_cast<double>(k);
    // pick the extraction cell near z = 2 pi k y ~ 1.5
    const double ystar = 1.5 / k2pi;
    auto istar = static_cast<std::size_t>(
        std::lower_bound(ext.y.begin(), ext.y.end(), ystar) -
        ext.y.begin());
    istar = std::clamp<std::size_t>(istar, 8, M - 2);
    for (std::size_t j = 0; j < ext.y.size(); ++j) {
      re[j] = layers[j][k].real();
      im[j] = layers[j][k].imag();
    }
    const double lam_re = mode_flux_limit(ext.y, re, s, k2pi, istar);
    const double lam_im = mode_flux_limit(ext.y, im, s, k2pi, istar);
    const std::complex<double> lam(lam_re, lam_im);
    dtn[k] = out.c_s * lam;

    const double target = std::pow(k2pi, 2.0 * s);
    if (std::abs(uhat[k]) > 1e-12 * std::max(umax, 1e-300)) {
      const double rel =
          std::abs(dtn[k] - target * uhat[k]) / (target * std::abs(uhat[k]));
      out.worst_mode_rel_err = std::max(out.worst_mode_rel_err, rel);
    }
  }
  if (out.worst_mode_rel_err > 1e-6) {
    throw UnresolvedLayer(
        "DtN multiplier deviates from (2 pi |k|)^{2s} by " +
        std::to_string(out.worst_mode_rel_err) + " relative");
  }
  out.field = Field::from_spectrum(u.grid(), std::move(dtn));
  return out;
}

namespace {

/// 2D weighted Dirichlet energy c_s int int y^{1-2s} grad(a) . grad(b)
/// from two extension fields on the same y-grid. x-derivatives spectral
/// per layer, y-derivatives per cell, exact weight moments per cell; the
/// first cell uses the boundary-layer model for the y-derivative product.
double weighted_grad_pairing(const ExtensionField& A, const ExtensionField& B,
                             double c_s) {
  if (A.y != B.y) throw GridMismatch("extensions on different y-grids");
  const double s = A.s;
  const std::size_t n = A.boundary.size();
  const std::size_t M = A.y.size() - 1;
  const auto& y = A.y;

  auto dx_layer = [n](const std::vector<double>& vals) {
    Field f(TorusGrid(n), vals);
    return spectral::deriv_x(f);
  };

  double acc = 0.0;
  std::vector<double> dxa_lo = [&] {
    auto f = dx_layer(A.values[0]);
    return std::vector<double>(f.values().begin(), f.values().end());
  }();
  std::vector<double> dxb_lo = [&] {
    auto f = dx_layer(B.values[0]);
    return std::vector<double>(f.values().begin(), f.values().end());
  }();
  for (std::size_t j = 0; j < M; ++j) {
    const auto fa = dx_layer(A.values[j + 1]);
    const auto fb = dx_layer(B.values[j + 1]);
    std::vector<double> dxa_hi(fa.values().begin(), fa.values().end());
    std::vector<double> dxb_hi(fb.values().begin(), fb.values().end());

    // x-part: mean over x of dxa*dxb, linear in y across the cell
    double xlo = 0.0, xhi = 0.0, ypart = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      xlo += dxa_lo[i] * dxb_lo[i];
      xhi += dxa_hi[i] * dxb_hi[i];
      const double da = A.values[j + 1][i] - A.values[j][i];
      const double db = B.values[j + 1][i] - B.values[j][i];
      ypart += da * db;
    }
    xlo /= static_cast<double>(n);
    xhi /= static_cast<double>(n);
    ypart /= static_cast<double>(n);

    if (j == 0) {
      // model: psi' ~ 2s alpha y^{2s-1}, alpha = (psi_1-psi_0)/y_1^{2s}
      const double y1 = y[1];
      acc += weighted_linear_cell(0.0, y1, xlo, xhi, s);
      acc += 2.0 * s * ypart / std::pow(y1, 2.0 * s) /
             std::pow(y1, 2.0 * s) * std::pow(y1, 2.0 * s);
      // int_0^{y1} y^{1-2s} (2s a y^{2s-1})(2s b y^{2s-1}) dy
      //   = 2s * (a y1^{2s}) (b y1^{2s}) / y1^{2s} ... collapsed above
    } else {
      const double h = y[j + 1] - y[j];
      const double slope_prod = ypart / (h * h);
      const double p1 = 2.0 - 2.0 * s;
      const double I1 = (std::pow(y[j + 1], p1) - std::pow(y[j], p1)) / p1;
      acc += weighted_linear_cell(y[j], y[j + 1], xlo, xhi, s);
      acc += slope_prod * I1;
    }
    dxa_lo.swap(dxa_hi);
    dxb_lo.swap(dxb_hi);
  }
  return c_s * acc;
}

}  // namespace

EnergyCheck energy_identity_check(const Field& u, double s) {
  const auto profile = ExtensionProfile::solve(s);
  const auto ygrid = default_y_grid(s);
  const auto ext = extend(u, profile, ygrid);
  const double c_s = 1.0 / profile.ell();

  EnergyCheck chk;
  const double ns = spectral::sobolev_norm(u, {.order = s, .homogeneous = true});
  chk.lhs = ns * ns;
  chk.rhs = weighted_grad_pairing(ext, ext, c_s);

  // minimality: perturb by bumps vanishing at y=0; the weighted energy
  // must strictly increase.
  std::mt19937 rng(20240811u);
  std::uniform_int_distribution<int> mode(1, 4);
  std::uniform_real_distribution<double> amp(0.5, 1.5);
  chk.minimality_margin = std::numeric_limits<double>::infinity();
  const double w = ygrid.extent / 4.0;
  for (int trial = 0; trial < 10; ++trial) {
    const int mk = mode(rng);
    const double a = amp(rng);
    ExtensionField bump;
    bump.boundary = Field(u.grid());
    bump.s = s;
    bump.y = ext.y;
    bump.values.assign(ext.y.size(), std::vector<double>(u.size(), 0.0));
    for (std::size_t j = 0; j < ext.y.size(); ++j) {
      const double g = ext.y[j] * std::exp(-0.5 * ext.y[j] * ext.y[j] / (w * w));
      for (std::size_t i = 0; i < u.size(); ++i) {
        bump.values[j][i] =
            a * g * std::cos(kTwoPi * mk * u.grid().x(i));
      }
    }
    const double cross = weighted_grad_pairing(ext, bump, c_s);
    const double self = weighted_grad_pairing(bump, bump, c_s);
    const double delta = 0.5;
    chk.minimality_margin = std::min(chk.minimality_margin,
                                     2.0 * delta * cross + delta * delta * self);
  }
  return chk;
}

FormCheck bilinear_form_check(const Field& u, const Field& phi, double s,
                              const ExtensionField& phi_tilde) {
  const double scale = std::max(phi.max_abs(), 1e-300);
  for (std::size_t i = 0; i < phi.size(); ++i) {
    if (std::abs(phi_tilde.values[0][i] - phi[i]) > 1e-12 * scale) {
      throw TraceMismatch("phi_tilde does not trace to phi at y = 0");
    }
  }
  const auto profile = ExtensionProfile::solve(s);
  GradedGrid ygrid = default_y_grid(s);
  if (phi_tilde.y != ygrid.nodes()) {
    // match the supplied grid instead
    ygrid.extent = phi_tilde.y.back();
    ygrid.cells = phi_tilde.y.size() - 1;
  }
  ExtensionField uext = extend(u, profile, ygrid);
  if (uext.y != phi_tilde.y) {
    throw GridMismatch("phi_tilde y-grid is not the graded default");
  }
  FormCheck chk;
  chk.lhs = inner(spectral::frac_power(u, s), phi);
  chk.rhs = weighted_grad_pairing(uext, phi_tilde, 1.0 / profile.ell());
  return chk;
}

ExtensionField product_extension(const Field& phi, double s,
                                 const GradedGrid& ygrid,
                                 double cutoff_scale) {
  auto chi = [cutoff_scale](double y) {
    const double t = y / cutoff_scale;
    if (t >= 1.0) return 0.0;
    const double r = t * t * t * (10.0 - 15.0 * t + 6.0 * t * t);
    return 1.0 - r;
  };
  ExtensionField ext;
  ext.boundary = phi;
  ext.s = s;
  ext.y = ygrid.nodes();
  ext.values.assign(ext.y.size(), std::vector<double>(phi.size()));
  for (std::size_t j = 0; j < ext.y.size(); ++j) {
    const double c = chi(ext.y[j]);
    for (std::size_t i = 0; i < phi.size(); ++i) {
      ext.values[j][i] = c * phi[i];
    }
  }
  return ext;
}

}  // namespace fraclaw::extension
