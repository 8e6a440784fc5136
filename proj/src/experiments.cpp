#include "torsion/experiments.hpp"

#include "torsion/closed_form.hpp"
#include "torsion/fem.hpp"
#include "torsion/geometry.hpp"
#include "torsion/report.hpp"
#include "torsion/shape_calculus.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <limits>
#include <numbers>
#include <ostream>
#include <set>
#include <stdexcept>

namespace torsion {

namespace {

constexpr double kPi = std::numbers::pi;

using nlohmann::json;

void require_keys(const json& config, const std::set<std::string>& allowed) {
  for (auto it = config.begin(); it != config.end(); ++it)
    if (!allowed.count(it.key()))
      throw std::invalid_argument("unknown config key: " + it.key());
}

DomainSpec parse_domain(const json& j) {
  std::string type = j.at("type").get<std::string>();
  if (type == "regular_polygon")
    return RegularPolygon{j.at("N").get<int>(), j.at("area").get<double>()};
  if (type == "polygon") {
    std::vector<Vec2> verts;
    for (const auto& p : j.at("vertices"))
      verts.push_back(Vec2(p.at(0).get<double>(), p.at(1).get<double>()));
    return Polygon{std::move(verts)};
  }
  if (type == "disk") return Disk{j.at("R").get<double>()};
  if (type == "annulus")
    return Annulus{j.at("r_in").get<double>(), j.at("r_out").get<double>()};
  if (type == "box") return Box{j.at("half_widths").get<std::vector<double>>()};
  if (type == "perturbed_disk")
    return PerturbedDisk{j.at("R").get<double>(), j.at("k").get<int>(),
                         j.at("t").get<double>()};
  throw std::invalid_argument("unknown domain type: " + type);
}

RadialProfile parse_source(const json& config) {
  double s = config.value("source_exponent", 0.0);
  double scale = config.value("source_scale", 1.0);
  return s == 0.0 ? RadialProfile::constant(scale) : RadialProfile::power(s, scale);
}

std::string fmt12(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.12g", v);
  return buf;
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
}

void write_reports(const SweepReport& rep, const RunOptions& opts, const json& config,
                   double wall_seconds) {
  std::filesystem::create_directories(opts.out_dir);
  std::filesystem::path dir(opts.out_dir);
  write_file(dir / (rep.name + ".csv"), rep.to_csv());
  write_file(dir / (rep.name + ".json"), rep.to_json());
  json manifest;
  manifest["experiment"] = rep.name;
  manifest["config"] = config;
  manifest["version"] = kVersion;
  manifest["wall_seconds"] = wall_seconds;
  write_file(dir / (rep.name + ".manifest.json"), manifest.dump(2) + "\n");
}

// --------------------------------------------------------------------------
// individual experiments; each returns Ok or AssertionFailed
// --------------------------------------------------------------------------

RunStatus run_polygon_sweep(const json& config, const RunOptions& opts,
                            std::ostream& log, SweepReport& rep) {
  require_keys(config, {"n_min", "n_max", "base_level", "num_levels"});
  int n_min = config.value("n_min", 3);
  int n_max = config.value("n_max", 12);
  int base_level = config.value("base_level", 3);
  int num_levels = config.value("num_levels", 3);
  rep = polygon_sweep(n_min, n_max, base_level, num_levels);
  double prev = -std::numeric_limits<double>::infinity();
  for (const auto& row : rep.rows) {
    double T_closed = row[2];
    if (!(T_closed > prev)) {
      log << "monotonicity violated at N=" << row[0] << ": T_closed=" << T_closed
          << " <= previous " << prev << "\n";
      return RunStatus::AssertionFailed;
    }
    if (!(T_closed < -kPi / 16.0)) {
      log << "T(P_N) < T(B) violated at N=" << row[0] << "\n";
      return RunStatus::AssertionFailed;
    }
    prev = T_closed;
  }
  return RunStatus::Ok;
}

RunStatus run_stability(const json& config, const RunOptions& opts, std::ostream& log,
                        SweepReport& rep) {
  require_keys(config, {"R", "k_min", "k_max", "source_exponent", "t0", "level"});
  PerturbationPath path;
  path.R = config.value("R", 1.0);
  path.s = config.value("source_exponent", 0.0);
  path.t0 = config.value("t0", 0.02 * path.R);
  path.level = config.value("level", 5);
  int k_min = config.value("k_min", 1);
  int k_max = config.value("k_max", 6);

  rep.name = "stability";
  rep.columns = {"k", "fd_estimate", "oracle", "relative_gap", "converged"};
  rep.provenance["level"] = std::to_string(path.level);
  rep.provenance["t0"] = fmt12(path.t0);
  rep.provenance["source_exponent"] = fmt12(path.s);

  for (int k = k_min; k <= k_max; ++k) {
    path.mode = k;
    SecondVariationFD fd = fd_second_variation(path);
    rep.add_row({static_cast<double>(k), fd.estimate, fd.oracle, fd.relative_gap,
                 fd.converged ? 1.0 : 0.0});
    if (std::abs(fd.oracle) > 0.05 &&
        std::signbit(fd.estimate) != std::signbit(fd.oracle)) {
      log << "sign mismatch at k=" << k << ": fd=" << fd.estimate
          << " oracle=" << fd.oracle << "\n";
      return RunStatus::AssertionFailed;
    }
  }
  return RunStatus::Ok;
}

RunStatus run_annulus_compare(const json& config, const RunOptions& opts,
                              std::ostream& log, SweepReport& rep) {
  require_keys(config, {"b_list", "level"});
  std::vector<double> b_list = config.value("b_list", std::vector<double>{1.5, 2.0, 3.0});
  int level = config.value("level", 4);
  rep = annulus_compare(b_list, level);
  double prev = 0.0;
  for (const auto& row : rep.rows) {
    if (!(row[1] > 0.0) || !(row[1] > prev)) {
      log << "gap not positive/increasing at b=" << row[0] << "\n";
      return RunStatus::AssertionFailed;
    }
    prev = row[1];
  }
  return RunStatus::Ok;
}

RunStatus run_box_osc(const json& config, const RunOptions& opts, std::ostream& log,
                      SweepReport& rep) {
  require_keys(config, {"n", "eps_list", "aspect_list"});
  int n = config.value("n", 3);
  std::vector<double> list;
  if (n == 2)
    list = config.value("aspect_list", std::vector<double>{1.0, 2.0, 5.0, 20.0});
  else
    list = config.value("eps_list", std::vector<double>{0.2, 0.1, 0.05});
  rep = box_osc_sweep(n, list);
  if (n == 2) {
    for (const auto& row : rep.rows)
      if (row[3] != 1.0) {
        log << "oscillation lower bound violated at aspect=" << row[0] << "\n";
        return RunStatus::AssertionFailed;
      }
  }
  return RunStatus::Ok;
}

RunStatus run_robin_identity(const json& config, const RunOptions& opts,
                             std::ostream& log, SweepReport& rep) {
  require_keys(config, {"domain", "beta_list", "level"});
  DomainSpec spec = parse_domain(config.at("domain"));
  std::vector<double> betas = config.value("beta_list", std::vector<double>{0.5, 1.0, 2.0});
  int level = config.value("level", 4);

  rep.name = "robin-identity";
  rep.columns = {"beta", "T_beta", "J_beta", "identity_residual", "boundary_mean"};
  rep.provenance["level"] = std::to_string(level);

  TriMesh mesh = build_mesh(spec, level);
  MeshMeasures mm = mesh_measures(mesh);
  RadialProfile one = RadialProfile::constant(1.0);
  for (double beta : betas) {
    ConstrainedSolution con = solve_neumann_mean_zero(mesh, one, beta);
    RobinSolution rob = solve_robin(mesh, one, beta);
    double resid = std::abs(con.energies.T - rob.J -
                            mm.area * mm.area / (2.0 * beta * mm.perimeter));
    rep.add_row({beta, con.energies.T, rob.J, resid, rob.boundary_mean});
    if (resid > 1e-10) {
      log << "Robin identity residual " << resid << " at beta=" << beta << "\n";
      return RunStatus::AssertionFailed;
    }
  }
  return RunStatus::Ok;
}

RunStatus run_serrin_gap(const json& config, const RunOptions& opts, std::ostream& log,
                         SweepReport& rep) {
  require_keys(config, {"n", "eps_list"});
  int n = config.value("n", 3);
  std::vector<double> eps = config.value("eps_list", std::vector<double>{0.2, 0.1, 0.05});
  rep = serrin_gap_report(n, eps);
  // oscillation must shrink monotonically along the decreasing eps grid
  double prev = std::numeric_limits<double>::infinity();
  for (const auto& row : rep.rows) {
    if (!(row[1] < prev) && row[0] < 1.0) {
      log << "oscillation not decreasing at eps=" << row[0] << "\n";
      return RunStatus::AssertionFailed;
    }
    prev = row[1];
  }
  return RunStatus::Ok;
}

RunStatus run_solve(const json& config, const RunOptions& opts, std::ostream& log,
                    SweepReport& rep) {
  require_keys(config, {"domain", "beta", "source_exponent", "source_scale", "level",
                        "solver", "problem"});
  DomainSpec spec = parse_domain(config.at("domain"));
  double beta = config.value("beta", 0.0);
  int level = config.value("level", 4);
  if (opts.max_level >= 0) level = std::min(level, opts.max_level);
  std::string problem = config.value("problem", "constrained");
  std::string solver_name = !opts.solver.empty()
                                ? opts.solver
                                : config.value("solver", std::string("direct"));
  SolverKind solver = SolverKind::Direct;
  if (solver_name == "krylov")
    solver = SolverKind::Krylov;
  else if (solver_name != "direct")
    throw std::invalid_argument("unknown solver: " + solver_name);
  RadialProfile f = parse_source(config);

  TriMesh mesh = build_mesh(spec, level);
  MeshMeasures mm = mesh_measures(mesh);

  rep.name = "solve";
  rep.columns = {"level", "h_max", "T", "E", "dirichlet_energy", "lambda", "c",
                 "boundary_mean", "boundary_osc"};
  rep.provenance["problem"] = problem;
  rep.provenance["solver"] = solver_name;

  if (problem == "constrained") {
    ConstrainedSolution sol = solve_neumann_mean_zero(mesh, f, beta, solver);
    rep.add_row({static_cast<double>(level), mm.h_max, sol.energies.T, sol.energies.E,
                 sol.energies.dirichlet_energy, sol.lambda, sol.c, sol.boundary_mean,
                 boundary_oscillation(mesh, sol.u)});
    std::filesystem::create_directories(opts.out_dir);
    std::filesystem::path dir(opts.out_dir);
    write_file(dir / "solve.mesh.txt", write_mesh_text(mesh));
    write_file(dir / "solve.solution.txt", write_solution_text("solve.mesh.txt", sol));
  } else if (problem == "robin") {
    RobinSolution sol = solve_robin(mesh, f, beta);
    rep.add_row({static_cast<double>(level), mm.h_max, sol.energies.T, sol.energies.E,
                 sol.energies.dirichlet_energy, 0.0, 0.0, sol.boundary_mean,
                 boundary_oscillation(mesh, sol.u)});
  } else if (problem == "dirichlet") {
    DirichletSolution sol = solve_dirichlet(mesh, f);
    rep.add_row({static_cast<double>(level), mm.h_max, sol.T_infty, 0.0, 0.0, 0.0, 0.0,
                 0.0, 0.0});
  } else {
    throw std::invalid_argument("unknown problem: " + problem);
  }
  return RunStatus::Ok;
}

}  // namespace

RunStatus print_closed_form(const json& config, std::ostream& out) {
  try {
    require_keys(config, {"name", "N", "area", "b", "n", "R", "T"});
    std::string name = config.at("name").get<std::string>();
    if (name == "E_PN") {
      int N = config.at("N").get<int>();
      double area = config.value("area", kPi);
      EnergyPair e = regular_polygon_energy(N, area);
      out << "E_PN = " << fmt12(e.E) << "   [pi^2 (3+tan^2(pi/N)) / (24 N tan(pi/N))]\n";
    } else if (name == "h") {
      double b = config.at("b").get<double>();
      AnnulusDiskGap g = annulus_disk_gap(b);
      out << "h = " << fmt12(g.gap / (kPi / 4.0))
          << "   [2b^3 - b^2 - 2b^2 log b - 2b + 1]\n";
    } else if (name == "ball_T") {
      int n = config.value("n", 2);
      double R = config.value("R", 1.0);
      BallTorsion bt = ball_torsion(n, R, RadialProfile::constant(1.0));
      out << "ball_T = " << fmt12(bt.T) << "   [-omega_n R^(n+2) / (2n(n+2))]\n";
    } else if (name == "kappa1") {
      double T = config.at("T").get<double>();
      out << "kappa1 = " << fmt12(kappa1_from_T(T)) << "   [-1/(2T)]\n";
    } else if (name == "annulus_gap") {
      double b = config.at("b").get<double>();
      out << "gap = " << fmt12(annulus_disk_gap(b).gap) << "   [(pi/4) h(b)]\n";
    } else {
      out << "unknown closed-form name: " << name << "\n";
      return RunStatus::ConfigError;
    }
  } catch (const std::exception& e) {
    out << "config error: " << e.what() << "\n";
    return RunStatus::ConfigError;
  }
  return RunStatus::Ok;
}

RunStatus run_experiment(const std::string& experiment, const json& config,
                         const RunOptions& opts, std::ostream& log) {
  auto start = std::chrono::steady_clock::now();
  SweepReport rep;
  RunStatus status;
  try {
    if (experiment == "closed-form") return print_closed_form(config, log);
    if (experiment == "polygon-sweep")
      status = run_polygon_sweep(config, opts, log, rep);
    else if (experiment == "stability")
      status = run_stability(config, opts, log, rep);
    else if (experiment == "annulus-compare")
      status = run_annulus_compare(config, opts, log, rep);
    else if (experiment == "box-osc")
      status = run_box_osc(config, opts, log, rep);
    else if (experiment == "robin-identity")
      status = run_robin_identity(config, opts, log, rep);
    else if (experiment == "serrin-gap")
      status = run_serrin_gap(config, opts, log, rep);
    else if (experiment == "solve")
      status = run_solve(config, opts, log, rep);
    else {
      log << "unknown experiment: " << experiment << "\n";
      return RunStatus::ConfigError;
    }
  } catch (const std::invalid_argument& e) {
    log << "config error: " << e.what() << "\n";
    return RunStatus::ConfigError;
  } catch (const std::domain_error& e) {
    log << "config error: " << e.what() << "\n";
    return RunStatus::ConfigError;
  }

  double wall =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  write_reports(rep, opts, config, wall);
  if (!opts.quiet) {
    log << rep.name << ": " << rep.rows.size() << " rows, "
        << (status == RunStatus::Ok ? "ok" : "ASSERTION FAILED") << " (" << wall
        << " s)\n";
  }
  return status;
}

}  // namespace torsion
