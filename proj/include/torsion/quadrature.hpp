#pragma once

#include <cmath>
#include <functional>

namespace torsion {

// Adaptive Simpson quadrature with Richardson correction.
inline double integrate_adaptive(const std::function<double(double)>& f, double a,
                                 double b, double tol = 1e-13) {
  struct Rec {
    static double go(const std::function<double(double)>& f, double a, double b,
                     double fa, double fm, double fb, double whole, double tol,
                     int depth) {
      double m = 0.5 * (a + b);
      double flm = f(0.5 * (a + m)), frm = f(0.5 * (m + b));
      double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
      double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
      if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
        return left + right + (left + right - whole) / 15.0;
      return go(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
             go(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
    }
  };
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return Rec::go(f, a, b, fa, fm, fb, whole, tol, 50);
}

}  // namespace torsion
