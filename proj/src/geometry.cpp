#include "torsion/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <cstdio>
#include <map>
#include <numbers>
#include <set>
#include <sstream>
#include <stdexcept>

namespace torsion {

namespace {

constexpr double kPi = std::numbers::pi;

double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

double signed_area(const std::vector<Vec2>& poly) {
  double s = 0.0;
  const int m = static_cast<int>(poly.size());
  for (int i = 0; i < m; ++i) s += cross2(poly[i], poly[(i + 1) % m]);
  return 0.5 * s;
}

bool segments_intersect(const Vec2& p1, const Vec2& p2, const Vec2& q1, const Vec2& q2) {
  auto orient = [](const Vec2& a, const Vec2& b, const Vec2& c) {
    double v = cross2(b - a, c - a);
    if (v > 0) return 1;
    if (v < 0) return -1;
    return 0;
  };
  int o1 = orient(p1, p2, q1), o2 = orient(p1, p2, q2);
  int o3 = orient(q1, q2, p1), o4 = orient(q1, q2, p2);
  return o1 != o2 && o3 != o4;
}

bool polygon_is_simple(const std::vector<Vec2>& poly) {
  const int m = static_cast<int>(poly.size());
  for (int i = 0; i < m; ++i) {
    for (int j = i + 1; j < m; ++j) {
      // skip adjacent edges (they share a vertex)
      if (j == i || (j + 1) % m == i || (i + 1) % m == j) continue;
      if (segments_intersect(poly[i], poly[(i + 1) % m], poly[j], poly[(j + 1) % m]))
        return false;
    }
  }
  return true;
}

double adaptive_simpson(const std::function<double(double)>& f, double a, double b,
                        double fa, double fm, double fb, double whole, double tol,
                        int depth) {
  double m = 0.5 * (a + b);
  double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  double flm = f(lm), frm = f(rm);
  double left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  double right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  if (depth <= 0 || std::abs(left + right - whole) < 15.0 * tol)
    return left + right + (left + right - whole) / 15.0;
  return adaptive_simpson(f, a, m, fa, flm, fm, left, 0.5 * tol, depth - 1) +
         adaptive_simpson(f, m, b, fm, frm, fb, right, 0.5 * tol, depth - 1);
}

double integrate(const std::function<double(double)>& f, double a, double b,
                 double tol = 1e-13) {
  double fa = f(a), fb = f(b), fm = f(0.5 * (a + b));
  double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  return adaptive_simpson(f, a, b, fa, fm, fb, whole, tol, 50);
}

}  // namespace

void validate(const DomainSpec& spec) {
  std::visit(
      [](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, RegularPolygon>) {
          if (s.sides < 3) throw std::invalid_argument("RegularPolygon: N must be >= 3");
          if (!(s.area > 0)) throw std::invalid_argument("RegularPolygon: area must be positive");
        } else if constexpr (std::is_same_v<T, Polygon>) {
          if (s.vertices.size() < 3) throw std::invalid_argument("Polygon: need at least 3 vertices");
          if (!(signed_area(s.vertices) > 0))
            throw std::invalid_argument("Polygon: vertices must be counterclockwise with positive area");
          if (!polygon_is_simple(s.vertices))
            throw std::invalid_argument("Polygon: self-intersecting boundary");
        } else if constexpr (std::is_same_v<T, Disk>) {
          if (!(s.radius > 0)) throw std::invalid_argument("Disk: radius must be positive");
        } else if constexpr (std::is_same_v<T, Annulus>) {
          if (!(s.r_in > 0) || !(s.r_out > s.r_in))
            throw std::invalid_argument("Annulus: need 0 < r_in < r_out");
        } else if constexpr (std::is_same_v<T, Box>) {
          if (s.half_widths.size() < 2) throw std::invalid_argument("Box: need n >= 2");
          for (double a : s.half_widths)
            if (!(a > 0)) throw std::invalid_argument("Box: half-widths must be positive");
          if (!std::is_sorted(s.half_widths.begin(), s.half_widths.end()))
            throw std::invalid_argument("Box: half-widths must be sorted ascending");
        } else if constexpr (std::is_same_v<T, PerturbedDisk>) {
          if (!(s.radius > 0)) throw std::invalid_argument("PerturbedDisk: radius must be positive");
          if (s.mode < 1) throw std::invalid_argument("PerturbedDisk: mode must be >= 1");
          if (!(std::abs(s.amplitude) < 0.5 * s.radius))
            throw std::invalid_argument("PerturbedDisk: |t| must be < R/2");
        }
      },
      spec);
}

std::optional<std::pair<Vec2, double>> tangential_incircle(const std::vector<Vec2>& vertices,
                                                           double tol) {
  // Least squares for a point p and radius rho with (x - p).nu = rho on every
  // edge, i.e. p.nu + rho = x.nu.
  const int m = static_cast<int>(vertices.size());
  Eigen::MatrixXd A(m, 3);
  Eigen::VectorXd rhs(m);
  for (int i = 0; i < m; ++i) {
    Vec2 a = vertices[i], b = vertices[(i + 1) % m];
    Vec2 e = (b - a).normalized();
    Vec2 nu(e.y(), -e.x());  // outward normal of a CCW polygon
    A(i, 0) = nu.x();
    A(i, 1) = nu.y();
    A(i, 2) = 1.0;
    rhs(i) = a.dot(nu);
  }
  Eigen::Vector3d sol = A.colPivHouseholderQr().solve(rhs);
  Vec2 center(sol(0), sol(1));
  double rho = sol(2);
  if (!(rho > 0)) return std::nullopt;
  double scale = std::max(1.0, center.norm() + rho);
  for (int i = 0; i < m; ++i) {
    double resid = A(i, 0) * sol(0) + A(i, 1) * sol(1) + sol(2) - rhs(i);
    if (std::abs(resid) > tol * scale) return std::nullopt;
  }
  return std::make_pair(center, rho);
}

Measures measures(const DomainSpec& spec) {
  validate(spec);
  Measures out;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, RegularPolygon>) {
          double rho = std::sqrt(s.area / (s.sides * std::tan(kPi / s.sides)));
          out.area = s.area;
          out.perimeter = 2.0 * s.area / rho;
          out.inradius = rho;
        } else if constexpr (std::is_same_v<T, Polygon>) {
          out.area = signed_area(s.vertices);
          double per = 0.0;
          const int m = static_cast<int>(s.vertices.size());
          for (int i = 0; i < m; ++i)
            per += (s.vertices[(i + 1) % m] - s.vertices[i]).norm();
          out.perimeter = per;
          if (auto inc = tangential_incircle(s.vertices, 1e-12)) out.inradius = inc->second;
        } else if constexpr (std::is_same_v<T, Disk>) {
          out.area = kPi * s.radius * s.radius;
          out.perimeter = 2.0 * kPi * s.radius;
          out.inradius = s.radius;
        } else if constexpr (std::is_same_v<T, Annulus>) {
          out.area = kPi * (s.r_out * s.r_out - s.r_in * s.r_in);
          out.perimeter = 2.0 * kPi * (s.r_in + s.r_out);
        } else if constexpr (std::is_same_v<T, Box>) {
          if (s.half_widths.size() == 2) {
            out.area = 4.0 * s.half_widths[0] * s.half_widths[1];
            out.perimeter = 4.0 * (s.half_widths[0] + s.half_widths[1]);
            out.inradius = s.half_widths[0];
          } else {
            throw std::invalid_argument("Box measures: only n = 2 supported here");
          }
        } else if constexpr (std::is_same_v<T, PerturbedDisk>) {
          out.area = kPi * s.radius * s.radius + 0.5 * kPi * s.amplitude * s.amplitude;
          double R = s.radius, t = s.amplitude;
          int k = s.mode;
          out.perimeter = integrate(
              [&](double th) {
                double r = R + t * std::cos(k * th);
                double rp = -t * k * std::sin(k * th);
                return std::sqrt(r * r + rp * rp);
              },
              0.0, 2.0 * kPi);
        }
      },
      spec);
  return out;
}

Vec2 CurvedLoop::project(const Vec2& p) const {
  double th = std::atan2(p.y(), p.x());
  double r = radius;
  if (kind == Kind::PerturbedCircle) r += amplitude * std::cos(mode * th);
  return Vec2(r * std::cos(th), r * std::sin(th));
}

double CurvedLoop::curvature(const Vec2& p) const {
  if (kind == Kind::Circle) return inner ? -1.0 / radius : 1.0 / radius;
  double th = std::atan2(p.y(), p.x());
  double r = radius + amplitude * std::cos(mode * th);
  double rp = -amplitude * mode * std::sin(mode * th);
  double rpp = -amplitude * mode * mode * std::cos(mode * th);
  return (r * r + 2.0 * rp * rp - r * rpp) / std::pow(r * r + rp * rp, 1.5);
}

const CurvedLoop* TriMesh::curved_loop(int loop_id) const {
  for (const auto& cl : curved_loops)
    if (cl.loop_id == loop_id) return &cl;
  return nullptr;
}

std::vector<Vec2> regular_polygon_vertices(int sides, double area) {
  double circ = std::sqrt(2.0 * area / (sides * std::sin(2.0 * kPi / sides)));
  std::vector<Vec2> v(sides);
  for (int i = 0; i < sides; ++i) {
    double th = 2.0 * kPi * i / sides;
    v[i] = Vec2(circ * std::cos(th), circ * std::sin(th));
  }
  return v;
}

namespace {

TriMesh fan_mesh(const std::vector<Vec2>& poly) {
  TriMesh mesh;
  const int m = static_cast<int>(poly.size());
  Vec2 centroid = Vec2::Zero();
  double area = 0.0;
  for (int i = 0; i < m; ++i) {
    const Vec2& a = poly[i];
    const Vec2& b = poly[(i + 1) % m];
    double w = cross2(a, b);
    centroid += w * (a + b) / 3.0;
    area += w;
  }
  centroid /= area;  // area centroid; equals the center for regular polygons
  mesh.vertices.push_back(centroid);
  for (const Vec2& p : poly) mesh.vertices.push_back(p);
  for (int i = 0; i < m; ++i) {
    int a = 1 + i, b = 1 + (i + 1) % m;
    mesh.triangles.push_back({0, a, b});
    mesh.boundary_edges.push_back({a, b, 0});
  }
  return mesh;
}

TriMesh annulus_polar_mesh(double r_in, double r_out, int rings, int sectors) {
  TriMesh mesh;
  mesh.vertices.reserve(static_cast<size_t>(rings + 1) * sectors);
  for (int j = 0; j <= rings; ++j) {
    double r = r_in + (r_out - r_in) * j / rings;
    for (int i = 0; i < sectors; ++i) {
      double th = 2.0 * kPi * i / sectors;
      mesh.vertices.push_back(Vec2(r * std::cos(th), r * std::sin(th)));
    }
  }
  auto vid = [&](int j, int i) { return j * sectors + (i % sectors); };
  for (int j = 0; j < rings; ++j) {
    for (int i = 0; i < sectors; ++i) {
      int v00 = vid(j, i), v10 = vid(j, i + 1);
      int v01 = vid(j + 1, i), v11 = vid(j + 1, i + 1);
      mesh.triangles.push_back({v00, v01, v11});
      mesh.triangles.push_back({v00, v11, v10});
    }
  }
  for (int i = 0; i < sectors; ++i) {
    mesh.boundary_edges.push_back({vid(rings, i), vid(rings, i + 1), 0});  // outer, CCW
    mesh.boundary_edges.push_back({vid(0, i + 1), vid(0, i), 1});          // inner, CW
  }
  CurvedLoop outer;
  outer.loop_id = 0;
  outer.radius = r_out;
  CurvedLoop inner;
  inner.loop_id = 1;
  inner.radius = r_in;
  inner.inner = true;
  mesh.curved_loops = {outer, inner};
  return mesh;
}

}  // namespace

TriMesh refine(const TriMesh& mesh) {
  TriMesh out;
  out.vertices = mesh.vertices;
  out.curved_loops = mesh.curved_loops;

  std::map<std::pair<int, int>, int> midpoint;
  std::map<std::pair<int, int>, int> boundary_loop;
  for (const auto& be : mesh.boundary_edges)
    boundary_loop[std::minmax(be.a, be.b)] = be.loop_id;

  auto mid = [&](int a, int b) {
    auto key = std::minmax(a, b);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    Vec2 p = 0.5 * (mesh.vertices[a] + mesh.vertices[b]);
    auto bl = boundary_loop.find(key);
    if (bl != boundary_loop.end()) {
      if (const CurvedLoop* cl = mesh.curved_loop(bl->second)) p = cl->project(p);
    }
    int id = static_cast<int>(out.vertices.size());
    out.vertices.push_back(p);
    midpoint[key] = id;
    return id;
  };

  for (const auto& t : mesh.triangles) {
    int a = t[0], b = t[1], c = t[2];
    int ab = mid(a, b), bc = mid(b, c), ca = mid(c, a);
    out.triangles.push_back({a, ab, ca});
    out.triangles.push_back({ab, b, bc});
    out.triangles.push_back({ca, bc, c});
    out.triangles.push_back({ab, bc, ca});
  }
  for (const auto& be : mesh.boundary_edges) {
    int m = mid(be.a, be.b);
    out.boundary_edges.push_back({be.a, m, be.loop_id});
    out.boundary_edges.push_back({m, be.b, be.loop_id});
  }
  return out;
}

TriMesh blend_disk_mesh(const TriMesh& disk_mesh, double R, int mode, double t) {
  TriMesh out = disk_mesh;
  for (auto& p : out.vertices) {
    double th = std::atan2(p.y(), p.x());
    p *= (R + t * std::cos(mode * th)) / R;
  }
  CurvedLoop cl;
  cl.loop_id = 0;
  cl.kind = CurvedLoop::Kind::PerturbedCircle;
  cl.radius = R;
  cl.mode = mode;
  cl.amplitude = t;
  out.curved_loops = {cl};
  return out;
}

TriMesh build_mesh(const DomainSpec& spec, int level) {
  validate(spec);
  if (level < 0 || level > 12) throw std::invalid_argument("build_mesh: level out of range");
  TriMesh mesh = std::visit(
      [&](const auto& s) -> TriMesh {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, RegularPolygon>) {
          return fan_mesh(regular_polygon_vertices(s.sides, s.area));
        } else if constexpr (std::is_same_v<T, Polygon>) {
          return fan_mesh(s.vertices);
        } else if constexpr (std::is_same_v<T, Disk>) {
          // octagon fan; boundary segments double per refinement
          std::vector<Vec2> poly(8);
          for (int i = 0; i < 8; ++i) {
            double th = 2.0 * kPi * i / 8;
            poly[i] = Vec2(s.radius * std::cos(th), s.radius * std::sin(th));
          }
          TriMesh m = fan_mesh(poly);
          CurvedLoop cl;
          cl.loop_id = 0;
          cl.radius = s.radius;
          m.curved_loops = {cl};
          return m;
        } else if constexpr (std::is_same_v<T, Annulus>) {
          int k = 1 << level;
          return annulus_polar_mesh(s.r_in, s.r_out, 4 * k, 16 * k);
        } else if constexpr (std::is_same_v<T, Box>) {
          if (s.half_widths.size() != 2)
            throw std::invalid_argument("build_mesh: Box meshing only for n = 2");
          double a = s.half_widths[0], b = s.half_widths[1];
          return fan_mesh({Vec2(a, b), Vec2(-a, b), Vec2(-a, -b), Vec2(a, -b)});
        } else if constexpr (std::is_same_v<T, PerturbedDisk>) {
          TriMesh disk = build_mesh(DomainSpec{Disk{s.radius}}, level);
          return blend_disk_mesh(disk, s.radius, s.mode, s.amplitude);
        }
      },
      spec);
  // Annulus is built at its level directly; PerturbedDisk blends a fully
  // refined disk mesh so its topology is identical across amplitudes.
  if (std::holds_alternative<Annulus>(spec) || std::holds_alternative<PerturbedDisk>(spec))
    return mesh;
  for (int l = 0; l < level; ++l) mesh = refine(mesh);
  return mesh;
}

MeshMeasures mesh_measures(const TriMesh& mesh) {
  MeshMeasures mm;
  for (const auto& t : mesh.triangles) {
    const Vec2& a = mesh.vertices[t[0]];
    const Vec2& b = mesh.vertices[t[1]];
    const Vec2& c = mesh.vertices[t[2]];
    mm.area += 0.5 * cross2(b - a, c - a);
    mm.h_max = std::max({mm.h_max, (b - a).norm(), (c - b).norm(), (a - c).norm()});
  }
  for (const auto& be : mesh.boundary_edges)
    mm.perimeter += (mesh.vertices[be.b] - mesh.vertices[be.a]).norm();
  return mm;
}

int euler_characteristic(const TriMesh& mesh) {
  std::set<std::pair<int, int>> edges;
  for (const auto& t : mesh.triangles)
    for (int e = 0; e < 3; ++e) edges.insert(std::minmax(t[e], t[(e + 1) % 3]));
  return static_cast<int>(mesh.vertices.size()) - static_cast<int>(edges.size()) +
         static_cast<int>(mesh.triangles.size());
}

void check_mesh(const TriMesh& mesh) {
  std::map<std::pair<int, int>, int> edge_count;
  for (const auto& t : mesh.triangles) {
    const Vec2& a = mesh.vertices[t[0]];
    const Vec2& b = mesh.vertices[t[1]];
    const Vec2& c = mesh.vertices[t[2]];
    if (!(cross2(b - a, c - a) > 0))
      throw std::invalid_argument("check_mesh: non-positive triangle area");
    for (int e = 0; e < 3; ++e) edge_count[std::minmax(t[e], t[(e + 1) % 3])]++;
  }
  for (const auto& [edge, count] : edge_count)
    if (count > 2) throw std::invalid_argument("check_mesh: non-manifold edge");
  std::set<std::pair<int, int>> listed;
  for (const auto& be : mesh.boundary_edges) {
    auto key = std::minmax(be.a, be.b);
    auto it = edge_count.find(key);
    if (it == edge_count.end() || it->second != 1)
      throw std::invalid_argument("check_mesh: boundary edge not on exactly one triangle");
    listed.insert(key);
  }
  for (const auto& [edge, count] : edge_count)
    if (count == 1 && !listed.count(edge))
      throw std::invalid_argument("check_mesh: unlisted boundary edge");
  // loops closed: every boundary vertex has one incoming and one outgoing edge
  std::map<int, int> out_deg, in_deg;
  for (const auto& be : mesh.boundary_edges) {
    out_deg[be.a]++;
    in_deg[be.b]++;
  }
  for (const auto& [v, d] : out_deg)
    if (d != 1 || in_deg[v] != 1) throw std::invalid_argument("check_mesh: open boundary loop");
}

namespace {

std::string fmt17(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

}  // namespace

std::string write_mesh_text(const TriMesh& mesh) {
  std::ostringstream os;
  os << mesh.vertices.size() << ' ' << mesh.triangles.size() << ' '
     << mesh.boundary_edges.size() << '\n';
  for (const auto& p : mesh.vertices) os << fmt17(p.x()) << ' ' << fmt17(p.y()) << '\n';
  for (const auto& t : mesh.triangles) os << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  for (const auto& be : mesh.boundary_edges)
    os << be.a << ' ' << be.b << ' ' << be.loop_id << '\n';
  return os.str();
}

TriMesh read_mesh_text(const std::string& text) {
  std::istringstream is(text);
  size_t nv = 0, nt = 0, nb = 0;
  if (!(is >> nv >> nt >> nb)) throw std::invalid_argument("mesh text: bad header");
  TriMesh mesh;
  mesh.vertices.resize(nv);
  for (auto& p : mesh.vertices)
    if (!(is >> p.x() >> p.y())) throw std::invalid_argument("mesh text: bad vertex line");
  mesh.triangles.resize(nt);
  for (auto& t : mesh.triangles)
    if (!(is >> t[0] >> t[1] >> t[2])) throw std::invalid_argument("mesh text: bad triangle line");
  mesh.boundary_edges.resize(nb);
  for (auto& be : mesh.boundary_edges)
    if (!(is >> be.a >> be.b >> be.loop_id))
      throw std::invalid_argument("mesh text: bad boundary line");
  return mesh;
}

}  // namespace torsion
