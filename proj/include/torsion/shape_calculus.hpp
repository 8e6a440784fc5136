#pragma once

#include "torsion/closed_form.hpp"
#include "torsion/fem.hpp"
#include "torsion/geometry.hpp"
#include "torsion/report.hpp"

#include <vector>

namespace torsion {

// Boundary perturbation family r(theta) = R + t cos(k theta) with source
// f = r^s (s = 0 means f = 1).
struct PerturbationPath {
  double R = 1.0;
  int mode = 1;          // k >= 1
  double t0 = 0.02;      // outer amplitude; grid {-t0, -t0/2, 0, t0/2, t0}
  double s = 0.0;        // source homogeneity
  int level = 5;         // mesh refinement level for the FEM solves
};

// Scale-invariant normalization g(Omega) = T(Omega) (pi/|Omega|)^{2+s};
// equals T at area pi.  T by FEM at the given refinement level.
double normalized_energy(const DomainSpec& spec, double s, int level);

struct SecondVariationFD {
  double estimate = 0.0;      // Richardson-extrapolated g''(0)
  double oracle = 0.0;        // mode_second_variation with the same zeta
  double relative_gap = 0.0;  // |estimate - oracle| / max(|oracle|, 1e-3)
  double coarse = 0.0;        // central difference at t0
  double fine = 0.0;          // central difference at t0/2
  bool converged = true;      // Richardson disagreement <= 20%
};

// Central finite differences of g along the path, one Richardson step,
// compared against the mode-wise oracle.  The disk mesh topology is fixed
// and deformed by radial blending so discretization error cancels in the
// differences.
SecondVariationFD fd_second_variation(const PerturbationPath& path);

// Rows (N, E_closed, T_closed, T_fem, rel_err, h_max, order) over regular
// polygons of area pi; FEM at base_level + num_levels - 1, order from the
// last three nested levels.
SweepReport polygon_sweep(int n_min, int n_max, int base_level, int num_levels);

// Rows (b, gap_closed, gap_fem, rel_err): FEM disk/annulus energy gap at
// equal area pi (b^2 - 1) against (pi/4) h(b).
SweepReport annulus_compare(const std::vector<double>& b_list, int level);

// Box oscillation scaling.  n >= 3: half-widths (eps^{n-1}, 1/eps, ...),
// rows (eps, osc_closure, osc_boundary, fitted_exponent); the exponent of
// osc_closure vs eps is repeated on every row.  n = 2: the list holds aspect
// ratios, rows (aspect, osc_boundary, vol_over_16, bound_holds).
SweepReport box_osc_sweep(int n, const std::vector<double>& eps_list);

// Rows (eps, osc_boundary, distortion): boundary oscillation against the
// circumradius/inradius distortion of the box family; n >= 3 only (the
// planar case is open and refused).
SweepReport serrin_gap_report(int n, const std::vector<double>& eps_list);

}  // namespace torsion
