#include "torsion/closed_form.hpp"

#include "torsion/quadrature.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace torsion {

namespace {

constexpr double kPi = std::numbers::pi;

// volume of the unit ball in R^n
double unit_ball_volume(int n) {
  return std::pow(kPi, 0.5 * n) / std::tgamma(0.5 * n + 1.0);
}

}  // namespace

// ---------------------------------------------------------------------------
// RadialProfile
// ---------------------------------------------------------------------------

RadialProfile RadialProfile::constant(double value) {
  if (!(value > 0)) throw std::domain_error("RadialProfile: constant must be positive");
  RadialProfile p;
  p.tag_ = Tag::Constant;
  p.exponent_ = 0.0;
  p.scale_ = value;
  p.eval_ = [value](double) { return value; };
  return p;
}

RadialProfile RadialProfile::power(double exponent, double scale) {
  if (exponent < 0) throw std::domain_error("RadialProfile: exponent must be >= 0");
  if (!(scale > 0)) throw std::domain_error("RadialProfile: scale must be positive");
  RadialProfile p;
  p.tag_ = exponent == 0.0 ? Tag::Constant : Tag::Power;
  p.exponent_ = exponent;
  p.scale_ = scale;
  p.eval_ = [exponent, scale](double r) { return scale * std::pow(r, exponent); };
  return p;
}

RadialProfile RadialProfile::generic(std::function<double(double)> eval) {
  RadialProfile p;
  p.tag_ = Tag::Generic;
  p.eval_ = std::move(eval);
  return p;
}

double RadialProfile::ball_average(int n, double R) const {
  if (tag_ != Tag::Generic) return scale_ * n / (n + exponent_) * std::pow(R, exponent_);
  double integral = integrate_adaptive(
      [&](double r) { return eval_(r) * std::pow(r, n - 1); }, 0.0, R, 1e-14);
  return n * integral / std::pow(R, n);
}

// ---------------------------------------------------------------------------
// Polygon energies
// ---------------------------------------------------------------------------

EnergyPair regular_polygon_energy(int sides, double area) {
  if (sides < 3) throw std::domain_error("regular_polygon_energy: N must be >= 3");
  if (!(area > 0)) throw std::domain_error("regular_polygon_energy: area must be positive");
  double tn = std::tan(kPi / sides);
  double e_pi = kPi * kPi * (3.0 + tn * tn) / (24.0 * sides * tn);
  double scale = (area / kPi) * (area / kPi);  // T scales as lambda^4 in 2D
  EnergyPair out;
  out.E = e_pi * scale;
  out.T = -0.5 * out.E;
  return out;
}

namespace {

// int over the boundary of |x - center|^2 ds, edge-wise exact (the integrand
// is quadratic along each segment).
double boundary_second_moment(const std::vector<Vec2>& vertices, const Vec2& center) {
  double total = 0.0;
  const int m = static_cast<int>(vertices.size());
  for (int i = 0; i < m; ++i) {
    Vec2 a = vertices[i] - center;
    Vec2 d = vertices[(i + 1) % m] - vertices[i];
    double len = d.norm();
    total += len * (a.squaredNorm() + a.dot(d) + d.squaredNorm() / 3.0);
  }
  return total;
}

std::pair<Vec2, double> require_tangential(const std::vector<Vec2>& vertices) {
  auto inc = tangential_incircle(vertices, 1e-12);
  if (!inc) {
    // name the worst edge for the error message
    auto loose = tangential_incircle(vertices, 1e30);
    int worst = 0;
    double worst_resid = -1.0;
    if (loose) {
      const int m = static_cast<int>(vertices.size());
      for (int i = 0; i < m; ++i) {
        Vec2 a = vertices[i], b = vertices[(i + 1) % m];
        Vec2 e = (b - a).normalized();
        Vec2 nu(e.y(), -e.x());
        double resid = std::abs((a - loose->first).dot(nu) - loose->second);
        if (resid > worst_resid) {
          worst_resid = resid;
          worst = i;
        }
      }
    }
    throw std::invalid_argument("polygon is not tangential: edge " + std::to_string(worst) +
                                " misses the incircle");
  }
  return *inc;
}

}  // namespace

EnergyPair tangential_polygon_energy(const std::vector<Vec2>& vertices) {
  auto [center, rho] = require_tangential(vertices);
  EnergyPair out;
  out.E = rho / 16.0 * boundary_second_moment(vertices, center);
  out.T = -0.5 * out.E;
  return out;
}

double tangential_torsion_eval(const Vec2& x, const std::vector<Vec2>& vertices) {
  auto [center, rho] = require_tangential(vertices);
  // point-in-polygon by winding (boundary counts as inside)
  const int m = static_cast<int>(vertices.size());
  for (int i = 0; i < m; ++i) {
    Vec2 a = vertices[i], b = vertices[(i + 1) % m];
    Vec2 e = b - a;
    double cr = e.x() * (x.y() - a.y()) - e.y() * (x.x() - a.x());
    if (cr < -1e-12 * e.norm() * std::max(1.0, (x - a).norm()))
      throw std::domain_error("tangential_torsion_eval: point outside the polygon");
  }
  double perimeter = 0.0;
  for (int i = 0; i < m; ++i) perimeter += (vertices[(i + 1) % m] - vertices[i]).norm();
  double I = boundary_second_moment(vertices, center);
  return I / (4.0 * perimeter) - 0.25 * (x - center).squaredNorm();
}

// ---------------------------------------------------------------------------
// Ball
// ---------------------------------------------------------------------------

BallTorsion ball_torsion(int n, double R, const RadialProfile& f) {
  if (n < 2) throw std::domain_error("ball_torsion: n must be >= 2");
  if (!(R > 0)) throw std::domain_error("ball_torsion: R must be positive");
  // r^s vanishes at the origin, so only require nonnegativity there
  for (double r : {0.0, 0.25 * R, 0.5 * R, 0.75 * R, R})
    if (!(f(r) >= 0)) throw std::domain_error("ball_torsion: f must be nonnegative on [0, R]");
  if (!(f(R) > 0)) throw std::domain_error("ball_torsion: f must be positive near the boundary");

  BallTorsion out;
  double omega = unit_ball_volume(n);
  double fbar = f.ball_average(n, R);
  out.c = -R / n * fbar;

  if (f.is_power()) {
    double s = f.exponent(), sc = f.scale();
    out.u = [n, R, s, sc](double r) {
      return sc * (std::pow(R, 2.0 + s) - std::pow(r, 2.0 + s)) / ((n + s) * (2.0 + s));
    };
    out.E = omega * sc * std::pow(R, n + 2.0 + s) / ((n + s) * (n + 2.0 + s));
    out.T = -n * omega * sc * sc * std::pow(R, n + 2.0 + 2.0 * s) /
            (2.0 * (n + s) * (n + s) * (n + 2.0 + 2.0 * s));
  } else {
    // copy f so the returned evaluator outlives the caller's argument
    auto inner = [f, n](double t) {
      return integrate_adaptive([&](double s) { return f(s) * std::pow(s, n - 1); }, 0.0,
                                t, 1e-12);
    };
    out.u = [inner, n, R](double r) {
      return integrate_adaptive(
          [&](double t) {
            // inner(t) ~ f(0) t^n / n near 0, so the ratio extends by 0
            return t == 0.0 ? 0.0 : inner(t) / std::pow(t, n - 1);
          },
          r, R, 1e-12);
    };
    auto u = out.u;
    out.E = n * omega *
            integrate_adaptive([&](double r) { return u(r) * std::pow(r, n - 1); }, 0.0,
                               R, 1e-11);
    out.T = -0.5 * n * omega *
            integrate_adaptive(
                [&](double r) { return f(r) * u(r) * std::pow(r, n - 1); }, 0.0, R,
                1e-11);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Annulus
// ---------------------------------------------------------------------------

double AnnulusSolution::u(double r) const {
  if (n == 2) return a1 * r * r + a2 * std::log(r) + a3;
  return a1 * r * r + a2 * std::pow(r, 2.0 - n) + a3;
}

double AnnulusSolution::u_r(double r) const {
  if (n == 2) return 2.0 * a1 * r + a2 / r;
  return 2.0 * a1 * r + (2.0 - n) * a2 * std::pow(r, 1.0 - n);
}

AnnulusSolution annulus_solution(int n, double b) {
  if (n < 2) throw std::domain_error("annulus_solution: n must be >= 2");
  if (!(b > 1)) throw std::domain_error("annulus_solution: b must be > 1");
  AnnulusSolution sol;
  sol.n = n;
  sol.b = b;
  sol.a1 = -1.0 / (2.0 * n);
  // flux condition u_r(b) = -|Omega|/P(Omega)
  double q = (std::pow(b, n) - 1.0) / (n * (1.0 + std::pow(b, n - 1)));
  if (n == 2) {
    sol.a2 = b * (b / 2.0 - q);
  } else {
    sol.a2 = (b / n - q) * std::pow(b, n - 1.0) / (2.0 - n);
  }
  // zero boundary mean: u(1) + b^{n-1} u(b) = 0
  double u0_1 = sol.a1 + (n == 2 ? 0.0 : sol.a2);
  double u0_b = sol.a1 * b * b +
                (n == 2 ? sol.a2 * std::log(b) : sol.a2 * std::pow(b, 2.0 - n));
  sol.a3 = -(u0_1 + std::pow(b, n - 1.0) * u0_b) / (1.0 + std::pow(b, n - 1.0));
  return sol;
}

AnnulusDiskGap annulus_disk_gap(double b) {
  if (!(b > 1)) throw std::domain_error("annulus_disk_gap: b must be > 1");
  AnnulusDiskGap out;
  double b2 = b * b;
  out.integral_disk = kPi / 8.0 * (b2 - 1.0) * (b2 - 1.0);
  double h = 2.0 * b2 * b - b2 - 2.0 * b2 * std::log(b) - 2.0 * b + 1.0;
  out.gap = kPi / 4.0 * h;
  out.integral_annulus = out.integral_disk - out.gap;
  out.annulus_energy_larger = out.gap > 0.0;
  return out;
}

double annulus_stationarity_gap(int n, double b) {
  if (n < 2) throw std::domain_error("annulus_stationarity_gap: n must be >= 2");
  if (!(b > 1)) throw std::domain_error("annulus_stationarity_gap: b must be > 1");
  double bn = std::pow(b, n);
  double ratio_station =
      b * ((n - 1.0) * bn + n * std::pow(b, n - 1.0) + 1.0) / (bn + n * b + n - 1.0);
  double ratio_mean = -std::pow(b, 1.0 - n);
  return ratio_station - ratio_mean;
}

// ---------------------------------------------------------------------------
// Box
// ---------------------------------------------------------------------------

namespace {

struct SymmetricValues {
  double s1, s_nm1, s_n;
};

SymmetricValues symmetric_values(const std::vector<double>& a) {
  SymmetricValues sv{0.0, 0.0, 1.0};
  for (double v : a) {
    sv.s1 += v;
    sv.s_n *= v;
  }
  for (double v : a) sv.s_nm1 += sv.s_n / v;
  return sv;
}

void check_box(int n, const std::vector<double>& a) {
  if (n < 2 || static_cast<int>(a.size()) != n)
    throw std::domain_error("box: need n >= 2 half-widths");
  for (double v : a)
    if (!(v > 0)) throw std::domain_error("box: half-widths must be positive");
}

}  // namespace

double BoxSolution::u(const std::vector<double>& x) const {
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += x[i] * x[i] / half_widths[i];
  return -kappa * s + mean_zero_offset;
}

BoxSolution box_solution(int n, const std::vector<double>& half_widths) {
  check_box(n, half_widths);
  BoxSolution sol;
  sol.n = n;
  sol.half_widths = half_widths;
  auto sv = symmetric_values(half_widths);
  sol.sigma1 = sv.s1;
  sol.sigma_nm1 = sv.s_nm1;
  sol.sigma_n = sv.s_n;
  sol.kappa = sv.s_n / (2.0 * sv.s_nm1);
  sol.c = -sv.s_n / sv.s_nm1;

  // boundary integral of u0 = -kappa sum x_i^2/a_i, face-wise exact: on the
  // face x_j = +-a_j the mean of the quadratic is a_j + (sigma1 - a_j)/3
  double vol = std::pow(2.0, n) * sv.s_n;
  double per = std::pow(2.0, n) * sv.s_nm1;
  double boundary_integral = 0.0;
  for (int j = 0; j < n; ++j) {
    double a_j = half_widths[j];
    double face_area = std::pow(2.0, n - 1) * sv.s_n / a_j;
    boundary_integral += -sol.kappa * 2.0 * face_area * (a_j + (sv.s1 - a_j) / 3.0);
  }
  sol.mean_zero_offset = -boundary_integral / per;
  double interior_integral = -sol.kappa * vol * sv.s1 / 3.0;
  sol.E = interior_integral + sol.mean_zero_offset * vol;
  return sol;
}

BoxOscillation box_oscillations(int n, const std::vector<double>& half_widths) {
  check_box(n, half_widths);
  auto sv = symmetric_values(half_widths);
  BoxOscillation out;
  double kappa = sv.s_n / (2.0 * sv.s_nm1);
  out.osc_closure = sv.s1 * sv.s_n / (2.0 * sv.s_nm1);
  // max of u on the boundary at the center of the smallest-width face, min at
  // a corner
  out.osc_boundary = kappa * (sv.s1 - half_widths[0]);
  out.bound_holds = true;
  if (n == 2) {
    double vol = 4.0 * sv.s_n;
    out.bound_holds = out.osc_boundary >= vol / 16.0 - 1e-12 * vol;
  }
  return out;
}

// ---------------------------------------------------------------------------
// Stability oracle
// ---------------------------------------------------------------------------

double mode_second_variation(int n, double R, double beta, const RadialProfile& f,
                             int l) {
  if (l < 1) throw std::domain_error("mode_second_variation: l must be >= 1");
  if (n != 2)
    throw std::domain_error("mode_second_variation: cos(l theta) modes require n = 2");
  if (beta < 0) throw std::domain_error("mode_second_variation: beta must be >= 0");
  double fbar = f.ball_average(n, R);
  double F = f.at_boundary(R) - (n - 1.0 - beta * R) / n * fbar;
  double zeta_norm2 = kPi * R;  // int of cos^2(l theta) over the circle
  return zeta_norm2 * F * R * (fbar / n - F / (l + beta * R));
}

bool stability_condition(int n, double R, double beta, const RadialProfile& f) {
  double fbar = f.ball_average(n, R);
  double fR = f.at_boundary(R);
  double lower = (n - 1.0 - beta * R) / n * fbar;
  double tol = 1e-12 * std::max(1.0, std::abs(fbar));
  return fR >= lower - tol && fR <= fbar + tol;
}

double kappa1_from_T(double T) {
  if (!(T < 0)) throw std::domain_error("kappa1_from_T: T must be negative");
  return -1.0 / (2.0 * T);
}

}  // namespace torsion
