#include "torsion/fem.hpp"

#include <Eigen/SparseLU>
#include <unsupported/Eigen/IterativeSolvers>

#include <cmath>
#include <cstdio>
#include <limits>
#include <map>
#include <sstream>
#include <stdexcept>

namespace torsion {

namespace {

double tri_area(const Vec2& a, const Vec2& b, const Vec2& c) {
  return 0.5 * ((b - a).x() * (c - a).y() - (b - a).y() * (c - a).x());
}

double integral_of(const TriMesh& mesh, const Eigen::VectorXd& u) {
  double total = 0.0;
  for (const auto& t : mesh.triangles) {
    double A = tri_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
    total += A / 3.0 * (u[t[0]] + u[t[1]] + u[t[2]]);
  }
  return total;
}

Energies compute_energies(const TriMesh& mesh, const P1System& sys,
                          const Eigen::VectorXd& u, double beta) {
  Energies en;
  double uAu = u.dot(sys.stiffness * u);
  double uMu = beta > 0 ? u.dot(sys.boundary_mass * u) : 0.0;
  double Fu = sys.load.dot(u);
  en.T = 0.5 * uAu + 0.5 * beta * uMu - Fu;
  en.T_flux = -0.5 * Fu;
  en.E = integral_of(mesh, u);
  en.dirichlet_energy = uAu;
  en.kappa1_rayleigh = en.E != 0.0 ? uAu / (en.E * en.E) : 0.0;
  return en;
}

}  // namespace

P1System assemble(const TriMesh& mesh, const RadialProfile& f) {
  const int n = static_cast<int>(mesh.vertices.size());
  P1System sys;
  std::vector<Eigen::Triplet<double>> stiff_trip, mass_trip;
  stiff_trip.reserve(mesh.triangles.size() * 9);
  sys.load = Eigen::VectorXd::Zero(n);
  sys.boundary_weight = Eigen::VectorXd::Zero(n);

  for (const auto& t : mesh.triangles) {
    const Vec2& a = mesh.vertices[t[0]];
    const Vec2& b = mesh.vertices[t[1]];
    const Vec2& c = mesh.vertices[t[2]];
    double A = tri_area(a, b, c);
    if (!(A > 0)) throw std::invalid_argument("assemble: degenerate triangle");
    sys.area += A;
    // constant P1 gradients
    Vec2 g[3];
    g[0] = Vec2(b.y() - c.y(), c.x() - b.x()) / (2.0 * A);
    g[1] = Vec2(c.y() - a.y(), a.x() - c.x()) / (2.0 * A);
    g[2] = Vec2(a.y() - b.y(), b.x() - a.x()) / (2.0 * A);
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j)
        stiff_trip.emplace_back(t[i], t[j], A * g[i].dot(g[j]));
    // edge-midpoint rule, exact for quadratic integrands: phi_i is 1/2 on the
    // two midpoints of the edges meeting at i and 0 on the opposite one
    Vec2 mid[3] = {0.5 * (a + b), 0.5 * (b + c), 0.5 * (c + a)};
    double fm[3] = {f(mid[0].norm()), f(mid[1].norm()), f(mid[2].norm())};
    sys.load[t[0]] += A / 3.0 * 0.5 * (fm[0] + fm[2]);
    sys.load[t[1]] += A / 3.0 * 0.5 * (fm[0] + fm[1]);
    sys.load[t[2]] += A / 3.0 * 0.5 * (fm[1] + fm[2]);
  }

  for (const auto& be : mesh.boundary_edges) {
    double len = (mesh.vertices[be.b] - mesh.vertices[be.a]).norm();
    sys.perimeter += len;
    mass_trip.emplace_back(be.a, be.a, len / 3.0);
    mass_trip.emplace_back(be.b, be.b, len / 3.0);
    mass_trip.emplace_back(be.a, be.b, len / 6.0);
    mass_trip.emplace_back(be.b, be.a, len / 6.0);
    sys.boundary_weight[be.a] += 0.5 * len;
    sys.boundary_weight[be.b] += 0.5 * len;
  }

  sys.stiffness.resize(n, n);
  sys.stiffness.setFromTriplets(stiff_trip.begin(), stiff_trip.end());
  sys.boundary_mass.resize(n, n);
  sys.boundary_mass.setFromTriplets(mass_trip.begin(), mass_trip.end());
  sys.f_integral = sys.load.sum();
  return sys;
}

ConstrainedSolution solve_neumann_mean_zero(const TriMesh& mesh, const RadialProfile& f,
                                            double beta, SolverKind solver) {
  if (beta < 0) throw std::domain_error("solve_neumann_mean_zero: beta must be >= 0");
  P1System sys = assemble(mesh, f);
  const int n = static_cast<int>(mesh.vertices.size());

  // bordered symmetric system: [A + beta M_b, w; w^T, 0]
  Eigen::SparseMatrix<double> op = sys.stiffness;
  if (beta > 0) op += beta * sys.boundary_mass;
  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(op.nonZeros() + 2 * n);
  for (int k = 0; k < op.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(op, k); it; ++it)
      trip.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()),
                        it.value());
  for (int i = 0; i < n; ++i) {
    if (sys.boundary_weight[i] != 0.0) {
      trip.emplace_back(i, n, sys.boundary_weight[i]);
      trip.emplace_back(n, i, sys.boundary_weight[i]);
    }
  }
  Eigen::SparseMatrix<double> K(n + 1, n + 1);
  K.setFromTriplets(trip.begin(), trip.end());

  Eigen::VectorXd rhs = Eigen::VectorXd::Zero(n + 1);
  rhs.head(n) = sys.load;

  Eigen::VectorXd x;
  if (solver == SolverKind::Direct) {
    Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
    lu.compute(K);
    if (lu.info() != Eigen::Success)
      throw std::runtime_error("solve_neumann_mean_zero: factorization failed");
    x = lu.solve(rhs);
  } else {
    Eigen::MINRES<Eigen::SparseMatrix<double>, Eigen::Lower | Eigen::Upper,
                  Eigen::IdentityPreconditioner>
        minres(K);
    minres.setTolerance(1e-13);
    minres.setMaxIterations(20 * (n + 1));
    x = minres.solve(rhs);
    if (minres.info() != Eigen::Success)
      throw std::runtime_error("solve_neumann_mean_zero: MINRES stalled after " +
                               std::to_string(minres.iterations()) +
                               " iterations, residual " + std::to_string(minres.error()));
  }

  double resid = (K * x - rhs).norm() / std::max(1.0, rhs.norm());
  if (resid > 1e-11)
    throw std::runtime_error("solve_neumann_mean_zero: algebraic residual " +
                             std::to_string(resid));

  ConstrainedSolution sol;
  sol.u = x.head(n);
  sol.lambda = x[n];
  sol.c = -sol.lambda;
  sol.beta = beta;
  sol.boundary_mean = sys.boundary_weight.dot(sol.u);
  sol.energies = compute_energies(mesh, sys, sol.u, beta);
  return sol;
}

RobinSolution solve_robin(const TriMesh& mesh, const RadialProfile& f, double beta) {
  if (!(beta > 0)) throw std::domain_error("solve_robin: beta must be positive");
  P1System sys = assemble(mesh, f);
  Eigen::SparseMatrix<double> op = sys.stiffness + beta * sys.boundary_mass;
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(op);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("solve_robin: factorization failed");
  RobinSolution sol;
  sol.u = ldlt.solve(sys.load);
  sol.beta = beta;
  sol.J = 0.5 * sol.u.dot(op * sol.u) - sys.load.dot(sol.u);
  sol.boundary_mean = sys.boundary_weight.dot(sol.u) / sys.perimeter;
  sol.energies = compute_energies(mesh, sys, sol.u, beta);
  return sol;
}

DirichletSolution solve_dirichlet(const TriMesh& mesh, const RadialProfile& f) {
  P1System sys = assemble(mesh, f);
  const int n = static_cast<int>(mesh.vertices.size());
  std::vector<bool> on_boundary(n, false);
  for (const auto& be : mesh.boundary_edges) {
    on_boundary[be.a] = true;
    on_boundary[be.b] = true;
  }
  std::vector<int> idx(n, -1);
  int m = 0;
  for (int i = 0; i < n; ++i)
    if (!on_boundary[i]) idx[i] = m++;

  std::vector<Eigen::Triplet<double>> trip;
  for (int k = 0; k < sys.stiffness.outerSize(); ++k)
    for (Eigen::SparseMatrix<double>::InnerIterator it(sys.stiffness, k); it; ++it)
      if (idx[it.row()] >= 0 && idx[it.col()] >= 0)
        trip.emplace_back(idx[it.row()], idx[it.col()], it.value());
  Eigen::SparseMatrix<double> A(m, m);
  A.setFromTriplets(trip.begin(), trip.end());
  Eigen::VectorXd F(m);
  for (int i = 0; i < n; ++i)
    if (idx[i] >= 0) F[idx[i]] = sys.load[i];

  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(A);
  if (ldlt.info() != Eigen::Success)
    throw std::runtime_error("solve_dirichlet: factorization failed");
  Eigen::VectorXd v = ldlt.solve(F);

  DirichletSolution sol;
  sol.u = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < n; ++i)
    if (idx[i] >= 0) sol.u[i] = v[idx[i]];
  sol.T_infty = -0.5 * F.dot(v);
  return sol;
}

double boundary_oscillation(const TriMesh& mesh, const Eigen::VectorXd& u) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const auto& be : mesh.boundary_edges) {
    for (int v : {be.a, be.b}) {
      lo = std::min(lo, u[v]);
      hi = std::max(hi, u[v]);
    }
  }
  return hi - lo;
}

StationarityResidual stationarity_residual(const TriMesh& mesh,
                                           const ConstrainedSolution& sol,
                                           const RadialProfile& f) {
  // adjacent triangle of each boundary edge
  std::map<std::pair<int, int>, int> edge_tri;
  for (int ti = 0; ti < static_cast<int>(mesh.triangles.size()); ++ti) {
    const auto& t = mesh.triangles[ti];
    for (int e = 0; e < 3; ++e) edge_tri[std::minmax(t[e], t[(e + 1) % 3])] = ti;
  }

  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  double weighted = 0.0, total_len = 0.0;
  const double beta = sol.beta, c = sol.c;

  for (const auto& be : mesh.boundary_edges) {
    auto it = edge_tri.find(std::minmax(be.a, be.b));
    if (it == edge_tri.end())
      throw std::invalid_argument("stationarity_residual: dangling boundary edge");
    const auto& t = mesh.triangles[it->second];
    const Vec2& a = mesh.vertices[t[0]];
    const Vec2& b = mesh.vertices[t[1]];
    const Vec2& cc = mesh.vertices[t[2]];
    double A = tri_area(a, b, cc);
    Vec2 g = (sol.u[t[0]] * Vec2(b.y() - cc.y(), cc.x() - b.x()) +
              sol.u[t[1]] * Vec2(cc.y() - a.y(), a.x() - cc.x()) +
              sol.u[t[2]] * Vec2(a.y() - b.y(), b.x() - a.x())) /
             (2.0 * A);

    Vec2 mid = 0.5 * (mesh.vertices[be.a] + mesh.vertices[be.b]);
    double um = 0.5 * (sol.u[be.a] + sol.u[be.b]);
    double H = 0.0;
    if (const CurvedLoop* cl = mesh.curved_loop(be.loop_id)) H = cl->curvature(mid);
    double fm = f(mid.norm());
    double S = 0.5 * g.squaredNorm() + 2.0 * c * beta * um - c * H * um +
               0.5 * beta * H * um * um - beta * beta * um * um - fm * um;

    lo = std::min(lo, S);
    hi = std::max(hi, S);
    double len = (mesh.vertices[be.b] - mesh.vertices[be.a]).norm();
    weighted += S * len;
    total_len += len;
  }
  StationarityResidual out;
  out.osc_S = hi - lo;
  out.mean_S = weighted / total_len;
  return out;
}

std::string write_solution_text(const std::string& mesh_ref,
                                const ConstrainedSolution& sol) {
  auto fmt17 = [](double v) {
    char buf[32];
    std::snprintf(buf, sizeof(buf), "%.17g", v);
    return std::string(buf);
  };
  std::ostringstream os;
  os << mesh_ref << '\n';
  for (int i = 0; i < sol.u.size(); ++i) os << fmt17(sol.u[i]) << '\n';
  os << fmt17(sol.lambda) << ' ' << fmt17(sol.c) << ' ' << fmt17(sol.energies.T) << ' '
     << fmt17(sol.energies.E) << '\n';
  return os.str();
}

}  // namespace torsion
