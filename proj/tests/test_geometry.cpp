#include "torsion/geometry.hpp"

#include <doctest.h>

#include <cmath>
#include <numbers>

using namespace torsion;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("measures: exact closed forms") {
  SUBCASE("regular square of area pi") {
    Measures m = measures(DomainSpec{RegularPolygon{4, kPi}});
    double rho = std::sqrt(kPi / (4.0 * std::tan(kPi / 4)));
    CHECK(m.area == doctest::Approx(kPi).epsilon(1e-14));
    CHECK(*m.inradius == doctest::Approx(rho).epsilon(1e-14));
    CHECK(m.perimeter == doctest::Approx(2.0 * kPi / rho).epsilon(1e-14));
  }
  SUBCASE("unit disk") {
    Measures m = measures(DomainSpec{Disk{1.0}});
    CHECK(m.area == doctest::Approx(kPi).epsilon(1e-15));
    CHECK(m.perimeter == doctest::Approx(2 * kPi).epsilon(1e-15));
    CHECK(*m.inradius == 1.0);
  }
  SUBCASE("annulus 1..2") {
    Measures m = measures(DomainSpec{Annulus{1.0, 2.0}});
    CHECK(m.area == doctest::Approx(3 * kPi).epsilon(1e-15));
    CHECK(m.perimeter == doctest::Approx(6 * kPi).epsilon(1e-15));
    CHECK(!m.inradius.has_value());
  }
  SUBCASE("perturbed disk area and perimeter") {
    double R = 1.0, t = 0.1;
    Measures m = measures(DomainSpec{PerturbedDisk{R, 3, t}});
    CHECK(m.area == doctest::Approx(kPi * R * R + 0.5 * kPi * t * t).epsilon(1e-14));
    // oracle: dense trapezoid quadrature of the arclength integrand
    int n = 1 << 16;
    double per = 0.0;
    for (int i = 0; i < n; ++i) {
      double th = 2 * kPi * i / n;
      double r = R + t * std::cos(3 * th);
      double rp = -3 * t * std::sin(3 * th);
      per += std::sqrt(r * r + rp * rp) * 2 * kPi / n;
    }
    CHECK(m.perimeter == doctest::Approx(per).epsilon(1e-10));
  }
  SUBCASE("general polygon via shoelace") {
    Polygon p{{Vec2(0, 0), Vec2(2, 0), Vec2(2, 1), Vec2(0, 1)}};
    Measures m = measures(DomainSpec{p});
    CHECK(m.area == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(m.perimeter == doctest::Approx(6.0).epsilon(1e-15));
    CHECK(!m.inradius.has_value());  // rectangle is not tangential
  }
}

TEST_CASE("domain validation") {
  CHECK_THROWS_AS(validate(DomainSpec{RegularPolygon{2, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(DomainSpec{Disk{-1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(DomainSpec{Annulus{2.0, 1.0}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(DomainSpec{PerturbedDisk{1.0, 2, 0.6}}), std::invalid_argument);
  CHECK_THROWS_AS(validate(DomainSpec{Box{{2.0, 1.0}}}), std::invalid_argument);
  // clockwise square
  Polygon cw{{Vec2(0, 0), Vec2(0, 1), Vec2(1, 1), Vec2(1, 0)}};
  CHECK_THROWS_AS(validate(DomainSpec{cw}), std::invalid_argument);
  // bowtie
  Polygon bow{{Vec2(0, 0), Vec2(1, 1), Vec2(1, 0), Vec2(0, 1)}};
  CHECK_THROWS_AS(validate(DomainSpec{bow}), std::invalid_argument);
}

TEST_CASE("build_mesh: fan and refinement counts") {
  TriMesh sq = build_mesh(DomainSpec{RegularPolygon{4, kPi}}, 0);
  CHECK(sq.vertices.size() == 5);
  CHECK(sq.triangles.size() == 4);
  CHECK(euler_characteristic(sq) == 1);
  check_mesh(sq);

  TriMesh fine = refine(sq);
  CHECK(fine.triangles.size() == 16);
  CHECK(euler_characteristic(fine) == 1);
  check_mesh(fine);
}

TEST_CASE("build_mesh: disk with projected boundary") {
  // level 1 has 16 boundary segments; the mesh is the inscribed 16-gon
  TriMesh d = build_mesh(DomainSpec{Disk{1.0}}, 1);
  CHECK(d.boundary_edges.size() == 16);
  MeshMeasures mm = mesh_measures(d);
  CHECK(mm.area == doctest::Approx(8.0 * std::sin(kPi / 8)).epsilon(1e-14));
  CHECK(mm.perimeter == doctest::Approx(32.0 * std::sin(kPi / 16)).epsilon(1e-14));
  check_mesh(d);

  SUBCASE("area deficit shrinks by about 4 per refinement") {
    double prev = kPi - mm.area;
    TriMesh cur = d;
    for (int l = 0; l < 3; ++l) {
      cur = refine(cur);
      double deficit = kPi - mesh_measures(cur).area;
      CHECK(prev / deficit == doctest::Approx(4.0).epsilon(0.05));
      prev = deficit;
    }
  }
}

TEST_CASE("annulus polar mesh") {
  TriMesh a = build_mesh(DomainSpec{Annulus{1.0, 2.0}}, 1);
  CHECK(euler_characteristic(a) == 0);
  check_mesh(a);

  // area converges to 3 pi at second order
  double errs[3];
  for (int l = 0; l < 3; ++l)
    errs[l] = std::abs(mesh_measures(build_mesh(DomainSpec{Annulus{1.0, 2.0}}, l)).area -
                       3 * kPi);
  CHECK(std::log2(errs[0] / errs[1]) > 1.9);
  CHECK(std::log2(errs[1] / errs[2]) > 1.9);
}

TEST_CASE("polygonal mesh area is exact at every level") {
  for (int N : {3, 5, 7}) {
    TriMesh m = build_mesh(DomainSpec{RegularPolygon{N, kPi}}, 0);
    for (int l = 0; l <= 3; ++l) {
      CHECK(mesh_measures(m).area == doctest::Approx(kPi).epsilon(1e-13));
      m = refine(m);
    }
  }
}

TEST_CASE("curved mesh area converges at order >= 1.9") {
  for (auto spec : {DomainSpec{Disk{1.0}}, DomainSpec{PerturbedDisk{1.0, 2, 0.1}}}) {
    double exact = measures(spec).area;
    double errs[4];
    TriMesh m = build_mesh(spec, 1);
    for (int l = 0; l < 4; ++l) {
      errs[l] = std::abs(mesh_measures(m).area - exact);
      m = refine(m);
    }
    for (int l = 0; l + 1 < 4; ++l) CHECK(std::log2(errs[l] / errs[l + 1]) > 1.9);
  }
}

TEST_CASE("boundary loops closed with outward orientation") {
  SUBCASE("outer loop of a disk") {
    TriMesh d = build_mesh(DomainSpec{Disk{1.0}}, 2);
    for (const auto& be : d.boundary_edges) {
      Vec2 e = d.vertices[be.b] - d.vertices[be.a];
      Vec2 nu(e.y(), -e.x());  // 90 degree clockwise rotation
      Vec2 mid = 0.5 * (d.vertices[be.a] + d.vertices[be.b]);
      CHECK(nu.dot(mid) > 0);  // points away from the center
    }
  }
  SUBCASE("annulus loops") {
    TriMesh a = build_mesh(DomainSpec{Annulus{1.0, 2.0}}, 0);
    for (const auto& be : a.boundary_edges) {
      Vec2 e = a.vertices[be.b] - a.vertices[be.a];
      Vec2 nu(e.y(), -e.x());
      Vec2 mid = 0.5 * (a.vertices[be.a] + a.vertices[be.b]);
      if (be.loop_id == 0)
        CHECK(nu.dot(mid) > 0);  // outer: away from origin
      else
        CHECK(nu.dot(mid) < 0);  // inner: toward the origin
    }
  }
}

TEST_CASE("refine preserves the Euler characteristic") {
  for (auto spec : {DomainSpec{RegularPolygon{6, kPi}}, DomainSpec{Annulus{1.0, 2.0}}}) {
    TriMesh m = build_mesh(spec, 0);
    int chi = euler_characteristic(m);
    for (int l = 0; l < 2; ++l) {
      m = refine(m);
      CHECK(euler_characteristic(m) == chi);
    }
  }
}

TEST_CASE("mesh text format round-trips bit-exactly") {
  TriMesh m = build_mesh(DomainSpec{PerturbedDisk{1.0, 3, 0.07}}, 2);
  std::string text = write_mesh_text(m);
  TriMesh back = read_mesh_text(text);
  REQUIRE(back.vertices.size() == m.vertices.size());
  for (size_t i = 0; i < m.vertices.size(); ++i) {
    CHECK(back.vertices[i].x() == m.vertices[i].x());
    CHECK(back.vertices[i].y() == m.vertices[i].y());
  }
  CHECK(back.triangles == m.triangles);
  CHECK(write_mesh_text(back) == text);
}

TEST_CASE("tangential incircle detection") {
  auto sq = regular_polygon_vertices(4, kPi);
  auto inc = tangential_incircle(sq, 1e-12);
  REQUIRE(inc.has_value());
  CHECK(inc->second == doctest::Approx(std::sqrt(kPi / 4)).epsilon(1e-13));
  CHECK(inc->first.norm() < 1e-13);

  // a 2x1 rectangle has no inscribed circle touching all edges
  std::vector<Vec2> rect = {Vec2(-1, -0.5), Vec2(1, -0.5), Vec2(1, 0.5), Vec2(-1, 0.5)};
  CHECK(!tangential_incircle(rect, 1e-12).has_value());
}

TEST_CASE("perturbed disk meshes deform continuously in t") {
  TriMesh disk = build_mesh(DomainSpec{Disk{1.0}}, 3);
  TriMesh a = blend_disk_mesh(disk, 1.0, 2, 0.01);
  TriMesh b = blend_disk_mesh(disk, 1.0, 2, 0.02);
  REQUIRE(a.vertices.size() == b.vertices.size());
  CHECK(a.triangles == b.triangles);
  for (size_t i = 0; i < a.vertices.size(); ++i)
    CHECK((a.vertices[i] - b.vertices[i]).norm() < 0.011);
}
