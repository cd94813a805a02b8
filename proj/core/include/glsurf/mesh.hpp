#pragma once

// Triangulated closed surfaces: the boundary geometry the surface predictors
// integrate over.  Each facet carries its area, outward unit normal, and the
// contact angle nu = arcsin(|n . e3|) between the applied-field direction e3
// and the tangent plane.  The enclosed volume comes from the signed
// tetrahedron sum, so a consistently inward-oriented mesh is caught by its
// negative volume rather than silently flipping signs downstream.

#include <array>
#include <string>
#include <vector>

namespace glsurf::mesh {

using Vec3 = std::array<double, 3>;

struct Facet {
  std::array<int, 3> v{};  // vertex indices, counterclockwise from outside
  double area = 0.0;
  Vec3 normal{0.0, 0.0, 0.0};  // outward unit normal
  double nu = 0.0;             // arcsin(|normal . e3|), in [0, pi/2]
};

// Closed orientable triangle mesh.  Construction validates:
//   - every vertex index in range, every facet's vertices distinct,
//   - no degenerate facets (area < 1e-12 * squared bounding-box diagonal),
//   - every undirected edge shared by exactly two facets, traversed once in
//     each direction (closed, consistently oriented),
//   - positive enclosed volume (outward orientation).
// Violations throw std::invalid_argument naming the offending element.
class TriMesh {
 public:
  TriMesh(std::vector<Vec3> vertices,
          std::vector<std::array<int, 3>> triangles);

  const std::vector<Vec3>& vertices() const { return verts_; }
  const std::vector<Facet>& facets() const { return facets_; }
  int facet_count() const { return static_cast<int>(facets_.size()); }

  double volume() const { return volume_; }
  double total_area() const { return area_; }
  double max_edge() const { return max_edge_; }  // refinement scale

  Vec3 facet_centroid(int f) const;

  std::string describe() const;

 private:
  std::vector<Vec3> verts_;
  std::vector<Facet> facets_;
  double volume_ = 0.0;
  double area_ = 0.0;
  double max_edge_ = 0.0;
};

// ASCII OFF, triangles only: "OFF" header, "nv nf ne" counts, vertex lines,
// then "3 i j k" facet lines.  Parse errors and validation failures throw.
TriMesh load_off(const std::string& path);
void save_off(const TriMesh& m, const std::string& path);

// Axis-aligned unit cube [0,1]^3 as 12 triangles.  Top and bottom facets
// have nu = pi/2, the sides nu = 0, and the volume sum is exact in double
// (all triple products are small integers).
TriMesh make_cube();

// Unit sphere by recursive icosahedron subdivision: 20 * 4^level facets,
// midpoints reprojected to the sphere each level.
TriMesh make_icosphere(int level);

// Icosphere scaled to semi-axes (a, a, c); c > a gives a prolate spheroid.
// Facet data is recomputed from the scaled vertices, not scaled over.
TriMesh make_prolate_ellipsoid(double a, double c, int level);

}  // namespace glsurf::mesh
