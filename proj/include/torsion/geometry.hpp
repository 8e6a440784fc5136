#pragma once

#include <Eigen/Dense>

#include <array>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace torsion {

using Vec2 = Eigen::Vector2d;

// ---------------------------------------------------------------------------
// Parametric domain descriptions
// ---------------------------------------------------------------------------

struct RegularPolygon {
  int sides;    // N >= 3
  double area;  // > 0
};

struct Polygon {
  std::vector<Vec2> vertices;  // simple, counterclockwise
};

struct Disk {
  double radius;  // > 0
};

struct Annulus {
  double r_in;   // > 0
  double r_out;  // > r_in
};

// n-dimensional box prod_i (-a_i, a_i); meshed only for n = 2.
struct Box {
  std::vector<double> half_widths;  // sorted ascending, all > 0, size >= 2
};

// Boundary r(theta) = R + t cos(k theta).
struct PerturbedDisk {
  double radius;     // R > 0
  int mode;          // k >= 1
  double amplitude;  // |t| < R/2
};

using DomainSpec =
    std::variant<RegularPolygon, Polygon, Disk, Annulus, Box, PerturbedDisk>;

// Throws std::invalid_argument when an invariant fails.
void validate(const DomainSpec& spec);

struct Measures {
  double area = 0.0;
  double perimeter = 0.0;
  std::optional<double> inradius;
};

// Exact measures of the parametric domain (perimeter of a perturbed disk by
// adaptive quadrature; everything else in closed form).
Measures measures(const DomainSpec& spec);

// ---------------------------------------------------------------------------
// Triangle meshes
// ---------------------------------------------------------------------------

// Exact curve that a boundary loop approximates.  Nodes of the loop are
// projected onto the curve after refinement; also supplies analytic mean
// curvature for the stationarity residual.
struct CurvedLoop {
  enum class Kind { Circle, PerturbedCircle };
  int loop_id = 0;
  Kind kind = Kind::Circle;
  double radius = 1.0;
  int mode = 0;        // PerturbedCircle only
  double amplitude = 0.0;

  Vec2 project(const Vec2& p) const;
  // Signed curvature with respect to the outward normal of the domain the
  // loop bounds (1/R on an outer circle, -1/r on the inner annulus circle).
  double curvature(const Vec2& p) const;
  bool inner = false;  // inner loop of an annulus
};

struct BoundaryEdge {
  int a = 0;  // oriented as in the owning triangle (domain on the left)
  int b = 0;
  int loop_id = 0;
};

struct TriMesh {
  std::vector<Vec2> vertices;
  std::vector<std::array<int, 3>> triangles;  // CCW index triples
  std::vector<BoundaryEdge> boundary_edges;
  std::vector<CurvedLoop> curved_loops;  // empty for straight boundaries

  const CurvedLoop* curved_loop(int loop_id) const;
};

struct MeshMeasures {
  double area = 0.0;
  double perimeter = 0.0;
  double h_max = 0.0;
};

// Fan-plus-uniform-refinement mesher; `level` midpoint refinements on top of
// the coarsest fan (polar grid for the annulus, doubled per level).
TriMesh build_mesh(const DomainSpec& spec, int level);

// One uniform midpoint refinement; boundary midpoints are projected onto the
// curved descriptor when present.
TriMesh refine(const TriMesh& mesh);

MeshMeasures mesh_measures(const TriMesh& mesh);

// V - E + F (1 for a disk-like mesh, 0 for an annulus).
int euler_characteristic(const TriMesh& mesh);

// Checks positive triangle areas, closed boundary loops and edge-manifoldness;
// throws std::invalid_argument on failure.
void check_mesh(const TriMesh& mesh);

// Text format: "nv nt nb", then nv lines "x y", nt lines "i j k",
// nb lines "i j loop_id"; 17 significant digits, bit-exact round trip.
std::string write_mesh_text(const TriMesh& mesh);
TriMesh read_mesh_text(const std::string& text);

// Vertices of the regular N-gon of given area, centered at the origin with
// one vertex on the positive x-axis.
std::vector<Vec2> regular_polygon_vertices(int sides, double area);

// Incircle of a tangential polygon: the point p and radius rho with
// (x - p).nu = rho on every edge, within tol.  Empty when no such circle
// exists.
std::optional<std::pair<Vec2, double>> tangential_incircle(
    const std::vector<Vec2>& vertices, double tol);

// Radial blending of a disk mesh of radius R onto r(theta) = R + t cos(k
// theta): a node at radius r scales by r(theta)/R.  Topology is unchanged, so
// meshes deform continuously in t.
TriMesh blend_disk_mesh(const TriMesh& disk_mesh, double R, int mode, double t);

}  // namespace torsion
