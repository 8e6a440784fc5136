#include "torsion/shape_calculus.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <future>
#include <thread>
#include <numbers>
#include <stdexcept>

namespace torsion {

namespace {

constexpr double kPi = std::numbers::pi;

int max_threads() {
  if (const char* env = std::getenv("TORSION_LAB_THREADS")) {
    int v = std::atoi(env);
    if (v > 0) return v;
  }
  unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

// parallel map with deterministic output ordering
template <typename Fn>
std::vector<std::vector<double>> map_rows(int count, int threads, Fn&& fn) {
  std::vector<std::vector<double>> out(count);
  if (threads <= 1 || count <= 1) {
    for (int i = 0; i < count; ++i) out[i] = fn(i);
    return out;
  }
  std::vector<std::future<std::vector<double>>> futs;
  futs.reserve(count);
  for (int i = 0; i < count; ++i)
    futs.push_back(std::async(std::launch::async, [&fn, i] { return fn(i); }));
  for (int i = 0; i < count; ++i) out[i] = futs[i].get();
  return out;
}

// least-squares slope of log(y) vs log(x)
double fit_exponent(const std::vector<double>& x, const std::vector<double>& y) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  const int m = static_cast<int>(x.size());
  for (int i = 0; i < m; ++i) {
    double lx = std::log(x[i]), ly = std::log(y[i]);
    sx += lx;
    sy += ly;
    sxx += lx * lx;
    sxy += lx * ly;
  }
  return (m * sxy - sx * sy) / (m * sxx - sx * sx);
}

}  // namespace

double normalized_energy(const DomainSpec& spec, double s, int level) {
  if (s < 0) throw std::domain_error("normalized_energy: s must be >= 0");
  RadialProfile f = s == 0.0 ? RadialProfile::constant(1.0) : RadialProfile::power(s);
  TriMesh mesh = build_mesh(spec, level);
  ConstrainedSolution sol = solve_neumann_mean_zero(mesh, f, 0.0);
  double area = measures(spec).area;
  return sol.energies.T * std::pow(kPi / area, 2.0 + s);
}

SecondVariationFD fd_second_variation(const PerturbationPath& path) {
  if (path.mode < 1) throw std::invalid_argument("fd_second_variation: mode must be >= 1");
  if (!(path.t0 > 0) || path.t0 >= 0.5 * path.R)
    throw std::invalid_argument("fd_second_variation: amplitude too large");

  RadialProfile f =
      path.s == 0.0 ? RadialProfile::constant(1.0) : RadialProfile::power(path.s);
  TriMesh disk = build_mesh(DomainSpec{Disk{path.R}}, path.level);

  auto g = [&](double t) {
    TriMesh mesh = t == 0.0 ? disk : blend_disk_mesh(disk, path.R, path.mode, t);
    ConstrainedSolution sol = solve_neumann_mean_zero(mesh, f, 0.0);
    double area = kPi * path.R * path.R + 0.5 * kPi * t * t;
    return sol.energies.T * std::pow(kPi / area, 2.0 + path.s);
  };

  double h = path.t0;
  double g0 = g(0.0);
  double gp = g(h), gm = g(-h);
  double gp2 = g(0.5 * h), gm2 = g(-0.5 * h);

  SecondVariationFD out;
  out.coarse = (gp - 2.0 * g0 + gm) / (h * h);
  out.fine = (gp2 - 2.0 * g0 + gm2) / (0.25 * h * h);
  out.estimate = (4.0 * out.fine - out.coarse) / 3.0;
  out.oracle = mode_second_variation(2, path.R, 0.0, f, path.mode);
  double scale = std::max(std::abs(out.estimate), 1e-3);
  out.converged = std::abs(out.fine - out.coarse) <= 0.2 * scale ||
                  std::abs(out.fine - out.coarse) < 1e-3;
  out.relative_gap = std::abs(out.estimate - out.oracle) / std::max(std::abs(out.oracle), 1e-3);
  return out;
}

SweepReport polygon_sweep(int n_min, int n_max, int base_level, int num_levels) {
  if (n_min < 3 || n_max > 64 || n_min > n_max)
    throw std::invalid_argument("polygon_sweep: N range must lie in [3, 64]");
  if (num_levels < 2) throw std::invalid_argument("polygon_sweep: need at least 2 levels");

  SweepReport rep;
  rep.name = "polygon-sweep";
  rep.columns = {"N", "E_closed", "T_closed", "T_fem", "rel_err", "h_max", "order"};
  rep.provenance["base_level"] = std::to_string(base_level);
  rep.provenance["num_levels"] = std::to_string(num_levels);

  const int count = n_max - n_min + 1;
  rep.rows = map_rows(count, max_threads(), [&](int i) -> std::vector<double> {
    int N = n_min + i;
    EnergyPair closed = regular_polygon_energy(N, kPi);
    RadialProfile one = RadialProfile::constant(1.0);
    std::vector<double> T_levels;
    double h_max = 0.0;
    TriMesh mesh = build_mesh(DomainSpec{RegularPolygon{N, kPi}}, base_level);
    for (int l = 0; l < num_levels; ++l) {
      if (l > 0) mesh = refine(mesh);
      ConstrainedSolution sol = solve_neumann_mean_zero(mesh, one, 0.0);
      T_levels.push_back(sol.energies.T);
      h_max = mesh_measures(mesh).h_max;
    }
    double T_fem = T_levels.back();
    double rel_err = std::abs(T_fem - closed.T) / std::abs(closed.T);
    double order = 0.0;
    if (T_levels.size() >= 2) {
      double e1 = std::abs(T_levels[T_levels.size() - 2] - closed.T);
      double e2 = std::abs(T_levels.back() - closed.T);
      order = std::log2(e1 / e2);
    }
    return {static_cast<double>(N), closed.E, closed.T, T_fem, rel_err, h_max, order};
  });
  rep.sort_rows();
  return rep;
}

SweepReport annulus_compare(const std::vector<double>& b_list, int level) {
  for (double b : b_list)
    if (!(b > 1)) throw std::invalid_argument("annulus_compare: all b must be > 1");

  SweepReport rep;
  rep.name = "annulus-compare";
  rep.columns = {"b", "gap_closed", "gap_fem", "rel_err"};
  rep.provenance["level"] = std::to_string(level);

  RadialProfile one = RadialProfile::constant(1.0);
  const int count = static_cast<int>(b_list.size());
  rep.rows = map_rows(count, max_threads(), [&](int i) -> std::vector<double> {
    double b = b_list[i];
    AnnulusDiskGap closed = annulus_disk_gap(b);
    double R = std::sqrt(b * b - 1.0);
    TriMesh disk = build_mesh(DomainSpec{Disk{R}}, level);
    TriMesh ann = build_mesh(DomainSpec{Annulus{1.0, b}}, level);
    // gap = int u_disk - int u_ann = E_disk - E_ann, and E = -2T for f = 1
    double E_disk = -2.0 * solve_neumann_mean_zero(disk, one, 0.0).energies.T;
    double E_ann = -2.0 * solve_neumann_mean_zero(ann, one, 0.0).energies.T;
    double gap_fem = E_disk - E_ann;
    double rel_err = std::abs(gap_fem - closed.gap) / std::abs(closed.gap);
    return {b, closed.gap, gap_fem, rel_err};
  });
  rep.sort_rows();
  return rep;
}

SweepReport box_osc_sweep(int n, const std::vector<double>& eps_list) {
  if (n < 2) throw std::invalid_argument("box_osc_sweep: n must be >= 2");
  SweepReport rep;
  rep.name = "box-osc";
  rep.provenance["n"] = std::to_string(n);

  if (n == 2) {
    rep.columns = {"aspect", "osc_boundary", "vol_over_16", "bound_holds"};
    for (double aspect : eps_list) {
      if (!(aspect >= 1)) throw std::invalid_argument("box_osc_sweep: aspect must be >= 1");
      std::vector<double> a = {1.0, aspect};
      BoxOscillation osc = box_oscillations(2, a);
      double vol = 4.0 * aspect;
      rep.add_row({aspect, osc.osc_boundary, vol / 16.0, osc.bound_holds ? 1.0 : 0.0});
    }
    rep.sort_rows();
    return rep;
  }

  rep.columns = {"eps", "osc_closure", "osc_boundary", "fitted_exponent"};
  std::vector<double> xs, ys;
  std::vector<std::vector<double>> partial;
  for (double eps : eps_list) {
    if (!(eps > 0) || !(eps < 1))
      throw std::invalid_argument("box_osc_sweep: eps must lie in (0, 1)");
    std::vector<double> a(n, 1.0 / eps);
    a[0] = std::pow(eps, n - 1.0);
    std::sort(a.begin(), a.end());
    BoxOscillation osc = box_oscillations(n, a);
    xs.push_back(eps);
    ys.push_back(osc.osc_closure);
    partial.push_back({eps, osc.osc_closure, osc.osc_boundary});
  }
  double expo = fit_exponent(xs, ys);
  for (auto& row : partial) {
    row.push_back(expo);
    rep.add_row(row);
  }
  rep.sort_rows();
  return rep;
}

SweepReport serrin_gap_report(int n, const std::vector<double>& eps_list) {
  if (n == 2)
    throw std::invalid_argument(
        "serrin_gap_report: the planar case is an open problem; n >= 3 required");
  if (n < 2) throw std::invalid_argument("serrin_gap_report: n must be >= 3");

  SweepReport rep;
  rep.name = "serrin-gap";
  rep.columns = {"eps", "osc_boundary", "distortion"};
  rep.provenance["n"] = std::to_string(n);
  for (double eps : eps_list) {
    if (!(eps > 0) || !(eps < 1))
      throw std::invalid_argument("serrin_gap_report: eps must lie in (0, 1)");
    std::vector<double> a(n, 1.0 / eps);
    a[0] = std::pow(eps, n - 1.0);
    std::sort(a.begin(), a.end());
    BoxOscillation osc = box_oscillations(n, a);
    double circ2 = 0.0;
    for (double v : a) circ2 += v * v;
    double distortion = std::sqrt(circ2) / a[0];
    rep.add_row({eps, osc.osc_boundary, distortion});
  }
  rep.sort_rows();
  return rep;
}

}  // namespace torsion
