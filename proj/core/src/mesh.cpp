#include "glsurf/mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <utility>

namespace glsurf::mesh {

namespace {

Vec3 sub(const Vec3& a, const Vec3& b) {
  return {a[0] - b[0], a[1] - b[1], a[2] - b[2]};
}

Vec3 cross(const Vec3& a, const Vec3& b) {
  return {a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2],
          a[0] * b[1] - a[1] * b[0]};
}

double dot(const Vec3& a, const Vec3& b) {
  return a[0] * b[0] + a[1] * b[1] + a[2] * b[2];
}

double length(const Vec3& a) { return std::sqrt(dot(a, a)); }

Vec3 normalized(const Vec3& a) {
  const double n = length(a);
  return {a[0] / n, a[1] / n, a[2] / n};
}

}  // namespace

TriMesh::TriMesh(std::vector<Vec3> vertices,
                 std::vector<std::array<int, 3>> triangles)
    : verts_(std::move(vertices)) {
  const int nv = static_cast<int>(verts_.size());
  if (nv < 4)
    throw std::invalid_argument("mesh: needs at least 4 vertices, got " +
                                std::to_string(nv));
  if (triangles.size() < 4)
    throw std::invalid_argument("mesh: needs at least 4 triangles, got " +
                                std::to_string(triangles.size()));

  Vec3 lo = verts_[0], hi = verts_[0];
  for (const Vec3& p : verts_)
    for (int a = 0; a < 3; ++a) {
      lo[a] = std::min(lo[a], p[a]);
      hi[a] = std::max(hi[a], p[a]);
    }
  const Vec3 diag = sub(hi, lo);
  const double bbox2 = dot(diag, diag);
  if (!(bbox2 > 0.0))
    throw std::invalid_argument("mesh: all vertices coincide");

  facets_.reserve(triangles.size());
  // Undirected edge -> net direction count: +1 when traversed low->high
  // vertex, -1 the other way.  A closed consistently oriented mesh uses each
  // edge exactly twice with the counts cancelling.
  std::map<std::pair<int, int>, std::pair<int, int>> edge_use;  // {uses, net}

  double vol6 = 0.0;
  for (std::size_t f = 0; f < triangles.size(); ++f) {
    const auto& t = triangles[f];
    for (int k = 0; k < 3; ++k) {
      if (t[k] < 0 || t[k] >= nv)
        throw std::invalid_argument(
            "mesh: triangle " + std::to_string(f) + " references vertex " +
            std::to_string(t[k]) + " outside [0, " + std::to_string(nv) +
            ")");
    }
    if (t[0] == t[1] || t[1] == t[2] || t[0] == t[2])
      throw std::invalid_argument("mesh: triangle " + std::to_string(f) +
                                  " repeats a vertex");

    const Vec3& p0 = verts_[t[0]];
    const Vec3& p1 = verts_[t[1]];
    const Vec3& p2 = verts_[t[2]];
    const Vec3 n2 = cross(sub(p1, p0), sub(p2, p0));
    const double twice_area = length(n2);
    if (!(twice_area * 0.5 >= 1e-12 * bbox2))
      throw std::invalid_argument("mesh: triangle " + std::to_string(f) +
                                  " is degenerate (area " +
                                  std::to_string(twice_area * 0.5) + ")");

    Facet fct;
    fct.v = t;
    fct.area = 0.5 * twice_area;
    fct.normal = {n2[0] / twice_area, n2[1] / twice_area,
                  n2[2] / twice_area};
    fct.nu = std::asin(std::min(1.0, std::abs(fct.normal[2])));
    facets_.push_back(fct);

    area_ += fct.area;
    vol6 += dot(p0, cross(p1, p2));

    for (int k = 0; k < 3; ++k) {
      const int a = t[k], b = t[(k + 1) % 3];
      auto& use = edge_use[{std::min(a, b), std::max(a, b)}];
      use.first += 1;
      use.second += (a < b) ? 1 : -1;
      max_edge_ = std::max(max_edge_, length(sub(verts_[a], verts_[b])));
    }
  }

  for (const auto& [edge, use] : edge_use) {
    if (use.first != 2)
      throw std::invalid_argument(
          "mesh: edge (" + std::to_string(edge.first) + ", " +
          std::to_string(edge.second) + ") is shared by " +
          std::to_string(use.first) + " facet(s); a closed surface needs 2");
    if (use.second != 0)
      throw std::invalid_argument(
          "mesh: edge (" + std::to_string(edge.first) + ", " +
          std::to_string(edge.second) +
          ") is traversed twice in the same direction; orientation is "
          "inconsistent");
  }

  volume_ = vol6 / 6.0;
  if (!(volume_ > 0.0))
    throw std::invalid_argument(
        "mesh: enclosed volume " + std::to_string(volume_) +
        " is not positive; facets are oriented inward");
}

Vec3 TriMesh::facet_centroid(int f) const {
  const auto& t = facets_[static_cast<std::size_t>(f)].v;
  const Vec3& a = verts_[t[0]];
  const Vec3& b = verts_[t[1]];
  const Vec3& c = verts_[t[2]];
  return {(a[0] + b[0] + c[0]) / 3.0, (a[1] + b[1] + c[1]) / 3.0,
          (a[2] + b[2] + c[2]) / 3.0};
}

std::string TriMesh::describe() const {
  std::ostringstream os;
  os << verts_.size() << " vertices, " << facets_.size()
     << " facets, volume " << volume_ << ", area " << area_;
  return os.str();
}

TriMesh load_off(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_off: cannot open " + path);

  auto next_line = [&in, &path](std::string& line) {
    while (std::getline(in, line)) {
      const auto pos = line.find_first_not_of(" \t\r");
      if (pos == std::string::npos) continue;  // blank
      if (line[pos] == '#') continue;          // comment
      return;
    }
    throw std::runtime_error("load_off: unexpected end of " + path);
  };

  std::string line;
  next_line(line);
  {
    std::istringstream ls(line);
    std::string tag;
    ls >> tag;
    if (tag != "OFF")
      throw std::runtime_error("load_off: " + path +
                               " does not start with an OFF header");
  }

  next_line(line);
  std::size_t nv = 0, nf = 0, ne = 0;
  {
    std::istringstream ls(line);
    if (!(ls >> nv >> nf >> ne))
      throw std::runtime_error("load_off: malformed counts line '" + line +
                               "'");
  }

  std::vector<Vec3> verts(nv);
  for (std::size_t i = 0; i < nv; ++i) {
    next_line(line);
    std::istringstream ls(line);
    if (!(ls >> verts[i][0] >> verts[i][1] >> verts[i][2]))
      throw std::runtime_error("load_off: malformed vertex " +
                               std::to_string(i) + ": '" + line + "'");
  }

  std::vector<std::array<int, 3>> tris(nf);
  for (std::size_t f = 0; f < nf; ++f) {
    next_line(line);
    std::istringstream ls(line);
    int k = 0;
    if (!(ls >> k))
      throw std::runtime_error("load_off: malformed facet " +
                               std::to_string(f) + ": '" + line + "'");
    if (k != 3)
      throw std::runtime_error("load_off: facet " + std::to_string(f) +
                               " has " + std::to_string(k) +
                               " vertices; triangles only");
    if (!(ls >> tris[f][0] >> tris[f][1] >> tris[f][2]))
      throw std::runtime_error("load_off: malformed facet " +
                               std::to_string(f) + ": '" + line + "'");
  }
  return TriMesh(std::move(verts), std::move(tris));
}

void save_off(const TriMesh& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("save_off: cannot open " + path);
  out.precision(17);
  out << "OFF\n"
      << m.vertices().size() << ' ' << m.facets().size() << " 0\n";
  for (const Vec3& p : m.vertices())
    out << p[0] << ' ' << p[1] << ' ' << p[2] << '\n';
  for (const Facet& f : m.facets())
    out << "3 " << f.v[0] << ' ' << f.v[1] << ' ' << f.v[2] << '\n';
  if (!out) throw std::runtime_error("save_off: write to " + path +
                                     " failed");
}

TriMesh make_cube() {
  const std::vector<Vec3> v = {
      {0, 0, 0}, {1, 0, 0}, {1, 1, 0}, {0, 1, 0},
      {0, 0, 1}, {1, 0, 1}, {1, 1, 1}, {0, 1, 1},
  };
  // Two triangles per face, outward orientation.
  const std::vector<std::array<int, 3>> t = {
      {0, 2, 1}, {0, 3, 2},  // bottom (z = 0), normal -e3
      {4, 5, 6}, {4, 6, 7},  // top (z = 1), normal +e3
      {0, 1, 5}, {0, 5, 4},  // front (y = 0)
      {2, 3, 7}, {2, 7, 6},  // back (y = 1)
      {1, 2, 6}, {1, 6, 5},  // right (x = 1)
      {3, 0, 4}, {3, 4, 7},  // left (x = 0)
  };
  return TriMesh(v, t);
}

namespace {

// Icosahedron with outward-oriented faces; vertices on the unit sphere.
void icosahedron(std::vector<Vec3>& verts,
                 std::vector<std::array<int, 3>>& tris) {
  const double phi = (1.0 + std::sqrt(5.0)) / 2.0;
  verts = {
      {-1, phi, 0}, {1, phi, 0},   {-1, -phi, 0}, {1, -phi, 0},
      {0, -1, phi}, {0, 1, phi},   {0, -1, -phi}, {0, 1, -phi},
      {phi, 0, -1}, {phi, 0, 1},   {-phi, 0, -1}, {-phi, 0, 1},
  };
  for (Vec3& p : verts) p = normalized(p);
  tris = {
      {0, 11, 5},  {0, 5, 1},   {0, 1, 7},   {0, 7, 10}, {0, 10, 11},
      {1, 5, 9},   {5, 11, 4},  {11, 10, 2}, {10, 7, 6}, {7, 1, 8},
      {3, 9, 4},   {3, 4, 2},   {3, 2, 6},   {3, 6, 8},  {3, 8, 9},
      {4, 9, 5},   {2, 4, 11},  {6, 2, 10},  {8, 6, 7},  {9, 8, 1},
  };
  // Guard against a mistyped face table: flip anything oriented inward.
  for (auto& t : tris) {
    const Vec3 c = {(verts[t[0]][0] + verts[t[1]][0] + verts[t[2]][0]) / 3,
                    (verts[t[0]][1] + verts[t[1]][1] + verts[t[2]][1]) / 3,
                    (verts[t[0]][2] + verts[t[1]][2] + verts[t[2]][2]) / 3};
    const Vec3 n =
        cross(sub(verts[t[1]], verts[t[0]]), sub(verts[t[2]], verts[t[0]]));
    if (dot(n, c) < 0.0) std::swap(t[1], t[2]);
  }
}

}  // namespace

TriMesh make_icosphere(int level) {
  if (level < 0 || level > 7)
    throw std::invalid_argument(
        "make_icosphere: level must lie in [0, 7], got " +
        std::to_string(level));

  std::vector<Vec3> verts;
  std::vector<std::array<int, 3>> tris;
  icosahedron(verts, tris);

  for (int l = 0; l < level; ++l) {
    std::map<std::pair<int, int>, int> midpoint;
    auto mid = [&](int a, int b) {
      const auto key = std::minmax(a, b);
      auto it = midpoint.find({key.first, key.second});
      if (it != midpoint.end()) return it->second;
      const Vec3& pa = verts[a];
      const Vec3& pb = verts[b];
      verts.push_back(normalized(
          {(pa[0] + pb[0]) / 2, (pa[1] + pb[1]) / 2, (pa[2] + pb[2]) / 2}));
      const int idx = static_cast<int>(verts.size()) - 1;
      midpoint[{key.first, key.second}] = idx;
      return idx;
    };

    std::vector<std::array<int, 3>> next;
    next.reserve(tris.size() * 4);
    for (const auto& t : tris) {
      const int ab = mid(t[0], t[1]);
      const int bc = mid(t[1], t[2]);
      const int ca = mid(t[2], t[0]);
      next.push_back({t[0], ab, ca});
      next.push_back({t[1], bc, ab});
      next.push_back({t[2], ca, bc});
      next.push_back({ab, bc, ca});
    }
    tris = std::move(next);
  }
  return TriMesh(std::move(verts), std::move(tris));
}

TriMesh make_prolate_ellipsoid(double a, double c, int level) {
  if (!(a > 0.0) || !(c > 0.0))
    throw std::invalid_argument(
        "make_prolate_ellipsoid: semi-axes must be positive");
  TriMesh sphere = make_icosphere(level);
  std::vector<Vec3> verts = sphere.vertices();
  for (Vec3& p : verts) {
    p[0] *= a;
    p[1] *= a;
    p[2] *= c;
  }
  std::vector<std::array<int, 3>> tris;
  tris.reserve(sphere.facets().size());
  for (const Facet& f : sphere.facets()) tris.push_back(f.v);
  return TriMesh(std::move(verts), std::move(tris));
}

}  // namespace glsurf::mesh
