#include "torsion/fem.hpp"

#include "torsion/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

using namespace torsion;

namespace {
constexpr double kPi = std::numbers::pi;

TriMesh square_mesh(int level) {
  return build_mesh(DomainSpec{RegularPolygon{4, kPi}}, level);
}

}  // namespace

TEST_CASE("multiplier equals the exact flux balance") {
  // testing against v = 1 gives lambda = (int f) / P exactly, independent of
  // beta and of the mesh
  RadialProfile one = RadialProfile::constant(1.0);
  RadialProfile r2 = RadialProfile::power(2.0);
  for (int level : {1, 3}) {
    TriMesh m = square_mesh(level);
    MeshMeasures mm = mesh_measures(m);
    for (double beta : {0.0, 1.0}) {
      ConstrainedSolution s = solve_neumann_mean_zero(m, one, beta);
      CHECK(s.lambda == doctest::Approx(mm.area / mm.perimeter).epsilon(1e-12));
      CHECK(s.c == -s.lambda);
    }
    P1System sys = assemble(m, r2);
    ConstrainedSolution s2 = solve_neumann_mean_zero(m, r2, 0.5);
    CHECK(s2.lambda == doctest::Approx(sys.f_integral / sys.perimeter).epsilon(1e-12));
  }
}

TEST_CASE("discrete boundary mean vanishes") {
  RadialProfile one = RadialProfile::constant(1.0);
  for (auto spec : {DomainSpec{RegularPolygon{4, kPi}}, DomainSpec{Disk{1.0}},
                    DomainSpec{Annulus{1.0, 2.0}}}) {
    TriMesh m = build_mesh(spec, 3);
    ConstrainedSolution s = solve_neumann_mean_zero(m, one, 0.0);
    CHECK(std::abs(s.boundary_mean) < 1e-10);
  }
}

TEST_CASE("energy convergence on the square, order >= 1.8") {
  RadialProfile one = RadialProfile::constant(1.0);
  double exact = -kPi * kPi / 48;
  double errs[3];
  TriMesh m = square_mesh(3);
  for (int l = 0; l < 3; ++l) {
    ConstrainedSolution s = solve_neumann_mean_zero(m, one, 0.0);
    errs[l] = std::abs(s.energies.T - exact);
    // T = -E/2 holds at the algebraic level for f = 1
    CHECK(s.energies.T == doctest::Approx(-0.5 * s.energies.E).epsilon(1e-10));
    CHECK(s.energies.T == doctest::Approx(s.energies.T_flux).epsilon(1e-10));
    if (l < 2) m = refine(m);
  }
  CHECK(std::log2(errs[0] / errs[1]) > 1.8);
  CHECK(std::log2(errs[1] / errs[2]) > 1.8);
}

TEST_CASE("energy convergence on the disk, order >= 1.8") {
  RadialProfile one = RadialProfile::constant(1.0);
  double exact = -kPi / 16;
  double errs[3];
  TriMesh m = build_mesh(DomainSpec{Disk{1.0}}, 3);
  for (int l = 0; l < 3; ++l) {
    ConstrainedSolution s = solve_neumann_mean_zero(m, one, 0.0);
    errs[l] = std::abs(s.energies.T - exact);
    if (l < 2) m = refine(m);
  }
  CHECK(std::log2(errs[0] / errs[1]) > 1.8);
  CHECK(std::log2(errs[1] / errs[2]) > 1.8);
}

TEST_CASE("Galerkin energies decrease under nested refinement") {
  RadialProfile one = RadialProfile::constant(1.0);
  TriMesh m = square_mesh(0);
  double prev = solve_neumann_mean_zero(m, one, 0.0).energies.T;
  for (int l = 0; l < 4; ++l) {
    m = refine(m);
    double t = solve_neumann_mean_zero(m, one, 0.0).energies.T;
    CHECK(t < prev + 1e-14);
    prev = t;
  }
}

TEST_CASE("Green identity: Dirichlet energy equals E for f = 1, beta = 0") {
  RadialProfile one = RadialProfile::constant(1.0);
  for (auto spec : {DomainSpec{RegularPolygon{5, kPi}}, DomainSpec{Annulus{1.0, 2.0}}}) {
    TriMesh m = build_mesh(spec, 3);
    ConstrainedSolution s = solve_neumann_mean_zero(m, one, 0.0);
    CHECK(s.energies.dirichlet_energy == doctest::Approx(s.energies.E).epsilon(1e-9));
  }
}

TEST_CASE("Rayleigh quotient for kappa_1 on the disk") {
  RadialProfile one = RadialProfile::constant(1.0);
  TriMesh m = build_mesh(DomainSpec{Disk{1.0}}, 5);
  ConstrainedSolution s = solve_neumann_mean_zero(m, one, 0.0);
  CHECK(s.energies.kappa1_rayleigh == doctest::Approx(8 / kPi).epsilon(1e-3));
  CHECK(kappa1_from_T(s.energies.T) == doctest::Approx(8 / kPi).epsilon(1e-3));
}

TEST_CASE("Robin solve") {
  RadialProfile one = RadialProfile::constant(1.0);
  double beta = 1.0;
  TriMesh m = build_mesh(DomainSpec{Disk{1.0}}, 5);
  MeshMeasures mm = mesh_measures(m);
  RobinSolution rob = solve_robin(m, one, beta);
  ConstrainedSolution con = solve_neumann_mean_zero(m, one, beta);

  SUBCASE("discrete bridge identity T_beta = J_beta + |Omega|^2/(2 beta P)") {
    double bridge = rob.J + mm.area * mm.area / (2 * beta * mm.perimeter);
    CHECK(con.energies.T == doctest::Approx(bridge).epsilon(1e-10));
  }

  SUBCASE("shifted Robin solution is the constrained one, node by node") {
    // uhat - (boundary mean) solves the bordered system with
    // lambda = beta * mean; exact at the algebraic level
    Eigen::VectorXd shifted =
        rob.u - Eigen::VectorXd::Constant(rob.u.size(), rob.boundary_mean);
    CHECK((shifted - con.u).lpNorm<Eigen::Infinity>() < 1e-9);
    CHECK(con.lambda == doctest::Approx(beta * rob.boundary_mean).epsilon(1e-10));
  }

  SUBCASE("boundary trace approaches R/(n beta)") {
    // continuum: uhat is u + const with constant boundary value R/(n beta)
    double target = 1.0 / (2 * beta);
    for (const auto& be : m.boundary_edges)
      CHECK(rob.u[be.a] == doctest::Approx(target).epsilon(2e-3));
    CHECK(rob.boundary_mean == doctest::Approx(target).epsilon(1e-3));
  }

  CHECK_THROWS_AS(solve_robin(m, one, 0.0), std::domain_error);
}

TEST_CASE("Dirichlet solve and the Saint-Venant direction") {
  RadialProfile one = RadialProfile::constant(1.0);

  SUBCASE("ball: the constrained minimizer already vanishes on the boundary") {
    TriMesh m = build_mesh(DomainSpec{Disk{1.0}}, 4);
    DirichletSolution d = solve_dirichlet(m, one);
    ConstrainedSolution c = solve_neumann_mean_zero(m, one, 0.0);
    CHECK(d.T_infty == doctest::Approx(-kPi / 16).epsilon(1e-3));
    CHECK(c.energies.T <= d.T_infty + 1e-12);
    CHECK(std::abs(d.T_infty - c.energies.T) < 2e-3);
  }

  SUBCASE("square: strict gap T < T_infty") {
    TriMesh m = square_mesh(4);
    DirichletSolution d = solve_dirichlet(m, one);
    ConstrainedSolution c = solve_neumann_mean_zero(m, one, 0.0);
    // H^1_0 functions have zero boundary mean, so the constrained minimum
    // is lower, discretely as well
    CHECK(c.energies.T <= d.T_infty + 1e-12);
    CHECK(d.T_infty - c.energies.T > 0.02);
    // classical torsion value for the unit-coefficient Poisson problem
    CHECK(d.T_infty == doctest::Approx(-0.0175704 * kPi * kPi).epsilon(2e-2));
  }
}

TEST_CASE("boundary oscillation") {
  RadialProfile one = RadialProfile::constant(1.0);

  SUBCASE("disk: tends to zero") {
    double prev = 1e9;
    for (int level : {3, 4, 5}) {
      TriMesh m = build_mesh(DomainSpec{Disk{1.0}}, level);
      ConstrainedSolution s = solve_neumann_mean_zero(m, one, 0.0);
      double osc = boundary_oscillation(m, s.u);
      CHECK(osc < prev);
      prev = osc;
    }
    CHECK(prev < 2e-3);
  }

  SUBCASE("1x2 rectangle: approaches the closed-form value 2/3") {
    Polygon rect{{Vec2(-1, -2), Vec2(1, -2), Vec2(1, 2), Vec2(-1, 2)}};
    TriMesh m = build_mesh(DomainSpec{rect}, 5);
    ConstrainedSolution s = solve_neumann_mean_zero(m, one, 0.0);
    CHECK(boundary_oscillation(m, s.u) == doctest::Approx(2.0 / 3).epsilon(2e-2));
  }
}

TEST_CASE("stationarity residual") {
  RadialProfile one = RadialProfile::constant(1.0);

  SUBCASE("disk: oscillation of S decays, mean tends to c^2/2") {
    double errs[3];
    for (int l = 0; l < 3; ++l) {
      TriMesh m = build_mesh(DomainSpec{Disk{1.0}}, 3 + l);
      ConstrainedSolution s = solve_neumann_mean_zero(m, one, 0.0);
      StationarityResidual r = stationarity_residual(m, s, one);
      errs[l] = r.osc_S;
      if (l == 2) CHECK(r.mean_S == doctest::Approx(0.125).epsilon(5e-3));
    }
    CHECK(std::log2(errs[0] / errs[1]) > 0.9);
    CHECK(std::log2(errs[1] / errs[2]) > 0.9);
  }

  SUBCASE("square: oscillation settles at a positive limit") {
    double osc[2];
    for (int l = 0; l < 2; ++l) {
      TriMesh m = square_mesh(4 + l);
      ConstrainedSolution s = solve_neumann_mean_zero(m, one, 0.0);
      osc[l] = stationarity_residual(m, s, one).osc_S;
    }
    CHECK(osc[0] > 0.05);
    CHECK(osc[1] > 0.05);
    CHECK(osc[1] / osc[0] > 0.5);  // not decaying to zero
  }

  SUBCASE("annulus: residual oscillation bounded away from zero") {
    TriMesh m = build_mesh(DomainSpec{Annulus{1.0, 2.0}}, 4);
    ConstrainedSolution s = solve_neumann_mean_zero(m, one, 0.0);
    // continuum limit of the oscillation is about 0.071 (S differs between
    // the inner and outer circles), so it must not decay with the mesh
    CHECK(stationarity_residual(m, s, one).osc_S > 0.05);
  }
}

TEST_CASE("rigid motions leave the energy unchanged") {
  RadialProfile one = RadialProfile::constant(1.0);
  auto verts = regular_polygon_vertices(5, kPi);
  TriMesh m = build_mesh(DomainSpec{Polygon{verts}}, 3);
  ConstrainedSolution base = solve_neumann_mean_zero(m, one, 0.7);

  double th = 0.83;
  Eigen::Matrix2d rot;
  rot << std::cos(th), -std::sin(th), std::sin(th), std::cos(th);
  TriMesh moved = m;
  for (auto& v : moved.vertices) v = rot * v + Vec2(5.0, -3.0);
  // f = 1 is translation invariant; curved loops are absent on polygons
  ConstrainedSolution s = solve_neumann_mean_zero(moved, one, 0.7);
  CHECK(s.energies.T == doctest::Approx(base.energies.T).epsilon(1e-12));
  CHECK(s.lambda == doctest::Approx(base.lambda).epsilon(1e-12));
}

TEST_CASE("krylov and direct solvers agree") {
  RadialProfile one = RadialProfile::constant(1.0);
  TriMesh m = build_mesh(DomainSpec{Disk{1.0}}, 3);
  ConstrainedSolution d = solve_neumann_mean_zero(m, one, 0.5, SolverKind::Direct);
  ConstrainedSolution k = solve_neumann_mean_zero(m, one, 0.5, SolverKind::Krylov);
  CHECK((d.u - k.u).lpNorm<Eigen::Infinity>() < 1e-9);
  CHECK(k.energies.T == doctest::Approx(d.energies.T).epsilon(1e-11));
}

TEST_CASE("solution text dump") {
  RadialProfile one = RadialProfile::constant(1.0);
  TriMesh m = square_mesh(1);
  ConstrainedSolution s = solve_neumann_mean_zero(m, one, 0.0);
  std::string text = write_solution_text("square-l1.mesh", s);

  std::istringstream is(text);
  std::string ref;
  std::getline(is, ref);
  CHECK(ref == "square-l1.mesh");
  for (int i = 0; i < s.u.size(); ++i) {
    std::string line;
    REQUIRE(std::getline(is, line));
    CHECK(std::stod(line) == s.u[i]);  // 17 significant digits round-trip
  }
  double lambda, c, T, E;
  bool got_trailer = static_cast<bool>(is >> lambda >> c >> T >> E);
  REQUIRE(got_trailer);
  CHECK(lambda == s.lambda);
  CHECK(c == -s.lambda);
  CHECK(T == s.energies.T);
  CHECK(E == s.energies.E);
}
