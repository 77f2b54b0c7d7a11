#pragma once

#include <functional>
#include <string>
#include <vector>

#include "fraclaw/errors.hpp"

namespace fraclaw {

/// Flux function f with derivative and regularity metadata.
///
/// The registry probes |f(b)-f(a)| <= L |b-a| on a 10^4-point sample of
/// [-10,10] at construction. `burgers` violates the boundedness hypothesis
/// of the continuum theory; it is admitted with `deviation_note` set, and
/// reports that consume the flux echo the note.
struct Flux {
  std::string id;
  std::function<double(double)> f;
  std::function<double(double)> fprime;
  bool bounded = true;
  bool globally_lipschitz = true;
  double lipschitz_constant = 1.0;
  std::string deviation_note;  // empty when the standing hypotheses hold

  /// max |f'| over [lo, hi], from a dense cached probe table.
  double max_fprime(double lo, double hi) const;

  /// Engquist-Osher split fluxes: fplus(a) = f(0) + int_0^a max(f',0),
  /// fminus(b) = int_0^b min(f',0). Tabulated on demand.
  double eo_flux(double a, double b) const;

  /// Antiderivative q of eta' f' from 0, by adaptive Simpson quadrature.
  double conjugate_flux(const std::function<double(double)>& etaprime,
                        double w) const;

 private:
  friend Flux make_flux(const std::string& id, double linear_speed);
  mutable std::vector<double> probe_abs_fprime_;  // on kProbeLo..kProbeHi
  mutable std::vector<double> eo_plus_, eo_minus_;
  void build_tables() const;
  double probe_lo_ = -10.0, probe_hi_ = 10.0;
};

/// Registry: `sin`, `saturated` (u/(1+u^2)), `burgers` (u^2/2, flagged
/// deviation), and the test-only `linear` (c*u).
Flux make_flux(const std::string& id, double linear_speed = 1.0);

}  // namespace fraclaw
