#pragma once

#include "torsion/closed_form.hpp"
#include "torsion/geometry.hpp"

#include <Eigen/Dense>
#include <Eigen/Sparse>

#include <string>

namespace torsion {

enum class SolverKind { Direct, Krylov };

struct Energies {
  double T = 0.0;                // quadratic functional value
  double T_flux = 0.0;           // -(1/2) int f u, the algebraic dual route
  double E = 0.0;                // int u
  double dirichlet_energy = 0.0; // int |grad u|^2
  double kappa1_rayleigh = 0.0;  // dirichlet_energy / E^2
};

struct ConstrainedSolution {
  Eigen::VectorXd u;   // nodal values
  double lambda = 0.0; // multiplier of the boundary-mean constraint
  double c = 0.0;      // Neumann datum, c = -lambda
  double beta = 0.0;
  Energies energies;
  double boundary_mean = 0.0;  // discrete int_{boundary} u_h dsigma
};

struct RobinSolution {
  Eigen::VectorXd u;
  double beta = 0.0;
  double J = 0.0;              // J_beta value
  double boundary_mean = 0.0;  // (1/P) int_{boundary} u_h dsigma
  Energies energies;
};

struct DirichletSolution {
  Eigen::VectorXd u;  // zero on boundary nodes
  double T_infty = 0.0;
};

// Assembled P1 operators, shared by the three solves.
struct P1System {
  Eigen::SparseMatrix<double> stiffness;
  Eigen::SparseMatrix<double> boundary_mass;
  Eigen::VectorXd load;             // int f phi_i (edge-midpoint rule)
  Eigen::VectorXd boundary_weight;  // int_{boundary} phi_i dsigma
  double area = 0.0;
  double perimeter = 0.0;
  double f_integral = 0.0;  // load summed: int_Omega f dx
};

P1System assemble(const TriMesh& mesh, const RadialProfile& f);

// Bordered symmetric solve of the boundary-mean-zero problem (stiffness +
// beta boundary mass, one constraint row).  Residual tolerance 1e-12.
ConstrainedSolution solve_neumann_mean_zero(const TriMesh& mesh, const RadialProfile& f,
                                            double beta,
                                            SolverKind solver = SolverKind::Direct);

// Unconstrained Robin solve, beta > 0.
RobinSolution solve_robin(const TriMesh& mesh, const RadialProfile& f, double beta);

// Homogeneous Dirichlet solve by eliminating boundary nodes.
DirichletSolution solve_dirichlet(const TriMesh& mesh, const RadialProfile& f);

// max - min of nodal u over boundary nodes.
double boundary_oscillation(const TriMesh& mesh, const Eigen::VectorXd& u);

struct StationarityResidual {
  double osc_S = 0.0;
  double mean_S = 0.0;  // length-weighted boundary mean
};

// Boundary residual S = |grad u|^2/2 + 2 c beta u - c H u + (beta/2) H u^2
// - beta^2 u^2 - f u at boundary edge midpoints, gradient from the adjacent
// triangle, H analytic (0 on straight edges).  Small oscillation certifies
// approximate stationarity.
StationarityResidual stationarity_residual(const TriMesh& mesh,
                                           const ConstrainedSolution& sol,
                                           const RadialProfile& f);

// Solution dump: mesh reference line, one nodal value per line, trailer
// "lambda c T E"; 17 significant digits.
std::string write_solution_text(const std::string& mesh_ref,
                                const ConstrainedSolution& sol);

}  // namespace torsion
