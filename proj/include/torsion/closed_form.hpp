#pragma once

#include "torsion/geometry.hpp"

#include <functional>
#include <vector>

namespace torsion {

// ---------------------------------------------------------------------------
// Radial source terms f(r) > 0
// ---------------------------------------------------------------------------

// constant(c): f = c;  power(s, c): f = c r^s.  A generic evaluator falls
// back to adaptive 1D quadrature for the ball average.
class RadialProfile {
 public:
  static RadialProfile constant(double value);
  static RadialProfile power(double exponent, double scale = 1.0);
  static RadialProfile generic(std::function<double(double)> eval);

  double operator()(double r) const { return eval_(r); }
  double at_boundary(double R) const { return eval_(R); }

  // (1/|B_R|) int_{B_R} f dx in dimension n; closed form c n R^s / (n+s) for
  // power profiles, quadrature otherwise.
  double ball_average(int n, double R) const;

  bool is_power() const { return tag_ != Tag::Generic; }
  double exponent() const { return exponent_; }
  double scale() const { return scale_; }

 private:
  enum class Tag { Constant, Power, Generic };
  Tag tag_ = Tag::Constant;
  double exponent_ = 0.0;
  double scale_ = 1.0;
  std::function<double(double)> eval_;
};

// ---------------------------------------------------------------------------
// Closed-form energies and solutions
// ---------------------------------------------------------------------------

struct EnergyPair {
  double E;  // int_Omega u dx
  double T;  // -E/2 for f = 1
};

// E(P_N) for area pi is pi^2 (3 + tan^2(pi/N)) / (24 N tan(pi/N)); general
// areas rescale by (area/pi)^2.
EnergyPair regular_polygon_energy(int sides, double area);

// E = (rho/16) int_{boundary} |x|^2 ds for a tangential polygon, edge-wise
// exact.  Throws std::invalid_argument naming the offending edge when the
// polygon is not tangential.
EnergyPair tangential_polygon_energy(const std::vector<Vec2>& vertices);

// u(x) = (1/(4P)) int_{boundary} |x|^2 ds - |x - center|^2 / 4 on a
// tangential polygon.
double tangential_torsion_eval(const Vec2& x, const std::vector<Vec2>& vertices);

struct BallTorsion {
  std::function<double(double)> u;  // radial profile of the solution, u(R) = 0
  double T;                         // -(1/2) int f u
  double E;                         // int u
  double c;                         // boundary flux -(R/n) fbar
};

// Solution of the constrained torsion problem on B_R with radial source f.
BallTorsion ball_torsion(int n, double R, const RadialProfile& f);

// u = a1 |x|^2 + a2 log|x| + a3 (n = 2) or a1 |x|^2 + a2 |x|^{2-n} + a3.
struct AnnulusSolution {
  int n;
  double b;
  double a1, a2, a3;
  double u(double r) const;
  double u_r(double r) const;
};

// Coefficients on {1 < |x| < b}: a1 = -1/(2n), a2 from the flux condition,
// a3 from the zero boundary mean.
AnnulusSolution annulus_solution(int n, double b);

struct AnnulusDiskGap {
  double integral_disk;     // (pi/8)(b^2-1)^2
  double integral_annulus;  // integral_disk - gap
  double gap;               // (pi/4) h(b), h(b) = 2b^3 - b^2 - 2b^2 log b - 2b + 1
  bool annulus_energy_larger;  // T(annulus) > T(disk) iff gap > 0
};

AnnulusDiskGap annulus_disk_gap(double b);

// Difference between the stationarity ratio u(b)/u(1) forced by the boundary
// residual and the ratio -1/b^{n-1} forced by the zero boundary mean;
// strictly positive, so no annulus is stationary.
double annulus_stationarity_gap(int n, double b);

struct BoxSolution {
  int n;
  std::vector<double> half_widths;
  double sigma1, sigma_nm1, sigma_n;  // elementary symmetric values
  double kappa;                       // sigma_n / (2 sigma_{n-1})
  double c;                           // -sigma_n / sigma_{n-1}
  double mean_zero_offset;            // constant d making the boundary mean vanish
  double E;                           // int (u0 + d) dx

  // u(x) = -kappa sum x_i^2 / a_i + d
  double u(const std::vector<double>& x) const;
};

BoxSolution box_solution(int n, const std::vector<double>& half_widths);

struct BoxOscillation {
  double osc_closure;   // sigma1 sigma_n / (2 sigma_{n-1})
  double osc_boundary;  // kappa (sigma1 - a1)
  bool bound_holds;     // n = 2 only: osc_boundary >= |Omega|/16
};

BoxOscillation box_oscillations(int n, const std::vector<double>& half_widths);

// Second variation of T_beta at B_R along the boundary mode zeta = cos(l
// theta) (n = 2): |zeta|^2 F(R) R (fbar/n - F(R)/(l + beta R)) with
// F(R) = f(R) - ((n-1-beta R)/n) fbar and |zeta|^2 = pi R.
double mode_second_variation(int n, double R, double beta, const RadialProfile& f, int l);

// Both inequalities of the stability condition
// ((n-1-beta R)/n) fbar <= f(R) <= fbar, with 1e-12 slack at equality.
bool stability_condition(int n, double R, double beta, const RadialProfile& f);

// kappa_1 = -1/(2T) for T < 0.
double kappa1_from_T(double T);

}  // namespace torsion
