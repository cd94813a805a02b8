#include <array>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "doctest.h"
#include "glsurf/mesh.hpp"

using namespace glsurf::mesh;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Smallest valid closed surface: the unit right tetrahedron, outward faces.
std::vector<Vec3> tetra_verts() {
  return {{0, 0, 0}, {1, 0, 0}, {0, 1, 0}, {0, 0, 1}};
}
std::vector<std::array<int, 3>> tetra_tris() {
  return {{0, 2, 1}, {0, 1, 3}, {0, 3, 2}, {1, 2, 3}};
}

std::filesystem::path temp_file(const std::string& name) {
  return std::filesystem::temp_directory_path() / name;
}

void write_text(const std::filesystem::path& p, const std::string& body) {
  std::ofstream out(p);
  out << body;
}

}  // namespace

TEST_SUITE("mesh") {

TEST_CASE("unit cube geometry is exact") {
  const TriMesh cube = make_cube();

  CHECK(cube.vertices().size() == 8);
  CHECK(cube.facet_count() == 12);
  // Every triple product in the signed-tetrahedron sum is a small integer,
  // so the volume of the unit cube comes out exact in double.
  CHECK(cube.volume() == 1.0);
  CHECK(cube.total_area() == 6.0);
  CHECK(cube.max_edge() == doctest::Approx(std::sqrt(2.0)).epsilon(1e-15));

  int horizontal = 0, vertical = 0;
  for (const Facet& f : cube.facets()) {
    CHECK(f.area == 0.5);
    if (f.nu == std::asin(1.0))
      ++horizontal;  // top/bottom: normal parallel to e3
    if (f.nu == 0.0) ++vertical;  // sides: normal orthogonal to e3
    CHECK(std::abs(f.normal[0] * f.normal[0] + f.normal[1] * f.normal[1] +
                   f.normal[2] * f.normal[2] -
                   1.0) <= 1e-14);
  }
  CHECK(horizontal == 4);
  CHECK(vertical == 8);

  // Bottom facets point down, top facets up.
  CHECK(cube.facets()[0].normal[2] == -1.0);
  CHECK(cube.facets()[2].normal[2] == 1.0);
}

TEST_CASE("tetrahedron volume and closure") {
  const TriMesh t(tetra_verts(), tetra_tris());
  CHECK(t.volume() == doctest::Approx(1.0 / 6.0).epsilon(1e-15));
  CHECK(t.facet_count() == 4);
  CHECK(t.describe().find("4 facets") != std::string::npos);
}

TEST_CASE("icosphere converges to the round sphere") {
  const TriMesh s3 = make_icosphere(3);
  const TriMesh s4 = make_icosphere(4);

  CHECK(make_icosphere(0).facet_count() == 20);
  CHECK(s3.facet_count() == 1280);
  CHECK(s4.facet_count() == 5120);

  for (const Vec3& p : s4.vertices()) {
    const double r = std::sqrt(p[0] * p[0] + p[1] * p[1] + p[2] * p[2]);
    CHECK(r == doctest::Approx(1.0).epsilon(1e-14));
  }

  const double ball = 4.0 * kPi / 3.0;
  const double sphere = 4.0 * kPi;
  CHECK(std::abs(s4.volume() - ball) <= 0.005 * ball);
  CHECK(std::abs(s4.total_area() - sphere) <= 0.005 * sphere);

  // Inscribed polyhedra: volumes increase with refinement, staying below
  // the ball.
  const double v2 = make_icosphere(2).volume();
  CHECK(v2 < s3.volume());
  CHECK(s3.volume() < s4.volume());
  CHECK(s4.volume() < ball);

  // Facet angle nu tracks the latitude of the facet within one facet size:
  // the sphere's outward normal at x is x itself.
  for (int f = 0; f < s4.facet_count(); f += 97) {
    const Vec3 c = s4.facet_centroid(f);
    const double rc =
        std::sqrt(c[0] * c[0] + c[1] * c[1] + c[2] * c[2]);
    const double latitude = std::asin(std::min(1.0, std::abs(c[2]) / rc));
    CHECK(std::abs(s4.facets()[static_cast<std::size_t>(f)].nu - latitude) <=
          s4.max_edge());
  }

  CHECK_THROWS_AS(make_icosphere(-1), std::invalid_argument);
  CHECK_THROWS_AS(make_icosphere(8), std::invalid_argument);
}

TEST_CASE("prolate ellipsoid scales the icosphere") {
  const int level = 3;
  const TriMesh sph = make_icosphere(level);
  const TriMesh ell = make_prolate_ellipsoid(1.0, 2.0, level);

  // A linear map of determinant a*a*c scales every signed tetrahedron
  // exactly.
  CHECK(ell.volume() ==
        doctest::Approx(2.0 * sph.volume()).epsilon(1e-12));
  CHECK(ell.total_area() > sph.total_area());

  // Poles of the stretched axis look horizontal (nu near pi/2), the
  // equator vertical (nu near 0).
  int polar = -1, equatorial = -1;
  double zmax = -1.0, zmin = 1e9;
  for (int f = 0; f < ell.facet_count(); ++f) {
    const double z = std::abs(ell.facet_centroid(f)[2]);
    if (z > zmax) zmax = z, polar = f;
    if (z < zmin) zmin = z, equatorial = f;
  }
  CHECK(ell.facets()[static_cast<std::size_t>(polar)].nu > kPi / 2 - 0.2);
  CHECK(ell.facets()[static_cast<std::size_t>(equatorial)].nu < 0.15);

  CHECK_THROWS_AS(make_prolate_ellipsoid(0.0, 1.0, 2), std::invalid_argument);
  CHECK_THROWS_AS(make_prolate_ellipsoid(1.0, -2.0, 2), std::invalid_argument);
}

TEST_CASE("construction rejects broken meshes") {
  // Open surface: drop a face.
  {
    auto tris = tetra_tris();
    tris.push_back(tris.back());
    tris.erase(tris.begin());  // still 4 facets, but edges now unbalanced
    CHECK_THROWS_WITH_AS(TriMesh(tetra_verts(), tris),
                         doctest::Contains("shared by"),
                         std::invalid_argument);
  }
  // Inconsistent orientation: flip one face's winding.
  {
    auto tris = tetra_tris();
    std::swap(tris[3][0], tris[3][1]);
    CHECK_THROWS_WITH_AS(TriMesh(tetra_verts(), tris),
                         doctest::Contains("same direction"),
                         std::invalid_argument);
  }
  // Inward orientation: flip every face.
  {
    auto tris = tetra_tris();
    for (auto& t : tris) std::swap(t[0], t[1]);
    CHECK_THROWS_WITH_AS(TriMesh(tetra_verts(), tris),
                         doctest::Contains("oriented inward"),
                         std::invalid_argument);
  }
  // Degenerate facet: collinear vertices.
  {
    std::vector<Vec3> v = {{0, 0, 0}, {1, 0, 0}, {2, 0, 0}, {0, 1, 0}};
    CHECK_THROWS_WITH_AS(TriMesh(v, tetra_tris()),
                         doctest::Contains("degenerate"),
                         std::invalid_argument);
  }
  // Repeated vertex in a facet.
  {
    auto tris = tetra_tris();
    tris[1] = {0, 0, 3};
    CHECK_THROWS_WITH_AS(TriMesh(tetra_verts(), tris),
                         doctest::Contains("repeats"),
                         std::invalid_argument);
  }
  // Index out of range.
  {
    auto tris = tetra_tris();
    tris[2] = {0, 3, 9};
    CHECK_THROWS_WITH_AS(TriMesh(tetra_verts(), tris),
                         doctest::Contains("outside"),
                         std::invalid_argument);
  }
  // Too small to enclose anything.
  CHECK_THROWS_AS(TriMesh({{0, 0, 0}, {1, 0, 0}, {0, 1, 0}},
                          {{0, 1, 2}, {0, 2, 1}, {0, 1, 2}, {0, 2, 1}}),
                  std::invalid_argument);
}

TEST_CASE("OFF files round-trip exactly") {
  const TriMesh cube = make_cube();
  const auto path = temp_file("glsurf_test_cube.off");
  save_off(cube, path.string());
  const TriMesh back = load_off(path.string());

  CHECK(back.volume() == 1.0);
  CHECK(back.facet_count() == 12);
  REQUIRE(back.vertices().size() == cube.vertices().size());
  for (std::size_t i = 0; i < cube.vertices().size(); ++i)
    for (int a = 0; a < 3; ++a)
      CHECK(back.vertices()[i][a] == cube.vertices()[i][a]);
  for (int f = 0; f < 12; ++f)
    CHECK(back.facets()[static_cast<std::size_t>(f)].v ==
          cube.facets()[static_cast<std::size_t>(f)].v);
  std::filesystem::remove(path);
}

TEST_CASE("OFF parser tolerates comments and rejects malformed input") {
  const auto path = temp_file("glsurf_test_parse.off");

  // Comments and blank lines are fine.
  write_text(path,
             "# tetra\nOFF\n# counts\n4 4 6\n\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n"
             "3 0 2 1\n3 0 1 3\n3 0 3 2\n3 1 2 3\n");
  CHECK(load_off(path.string()).volume() ==
        doctest::Approx(1.0 / 6.0).epsilon(1e-15));

  write_text(path, "NOFF\n4 4 6\n");
  CHECK_THROWS_WITH_AS(load_off(path.string()),
                       doctest::Contains("OFF header"), std::runtime_error);

  write_text(path, "OFF\nfour faces\n");
  CHECK_THROWS_WITH_AS(load_off(path.string()),
                       doctest::Contains("counts"), std::runtime_error);

  write_text(path,
             "OFF\n4 4 6\n0 0 0\n1 0 0\n0 1 0\n0 0 1\n"
             "4 0 1 2 3\n3 0 1 3\n3 0 3 2\n3 1 2 3\n");
  CHECK_THROWS_WITH_AS(load_off(path.string()),
                       doctest::Contains("triangles only"),
                       std::runtime_error);

  write_text(path, "OFF\n4 4 6\n0 0 0\n1 0 0\n");
  CHECK_THROWS_WITH_AS(load_off(path.string()),
                       doctest::Contains("unexpected end"),
                       std::runtime_error);

  std::filesystem::remove(path);
  CHECK_THROWS_WITH_AS(load_off(path.string()),
                       doctest::Contains("cannot open"), std::runtime_error);
}

}  // TEST_SUITE("mesh")
