#pragma once

#include <cmath>
#include <functional>

namespace fraclaw::detail {

inline double adaptive_simpson(const std::function<double(double)>& g,
                               double a, double b, double fa, double fm,
                               double fb, double eps, int depth) {
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
  return adaptive_simpson(g, a, m, fa, flm, fm, 0.5 * eps, depth - 1) +
         adaptive_simpson(g, m, b, fm, frm, fb, 0.5 * eps, depth - 1);
}

/// Oriented adaptive quadrature of g over [a, b].
inline double integrate(const std::function<double(double)>& g, double a,
                        double b, double eps = 1e-12) {
  if (a == b) return 0.0;
  const double m = 0.5 * (a + b);
  return adaptive_simpson(g, a, b, g(a), g(m), g(b), eps, 40);
}

/// Five-point Gauss-Legendre on [a, b].
inline double gauss5(const std::function<double(double)>& g, double a,
                     double b) {
  static const double xs[5] = {-0.9061798459386640, -0.5384693101056831, 0.0,
                               0.5384693101056831, 0.9061798459386640};
  static const double ws[5] = {0.2369268850561891, 0.4786286704993665,
                               0.5688888888888889, 0.4786286704993665,
                               0.2369268850561891};
  const double c = 0.5 * (a + b), h = 0.5 * (b - a);
  double acc = 0.0;
  for (int i = 0; i < 5; ++i) acc += ws[i] * g(c + h * xs[i]);
  return acc * h;
}

}  // namespace fraclaw::detail
