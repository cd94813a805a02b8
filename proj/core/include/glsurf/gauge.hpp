#pragma once

#include <array>
#include <functional>
#include <vector>

#include "glsurf/grid.hpp"

namespace glsurf {

// Vector potential A(x); components beyond grid.dim() are ignored.
using VectorPotential =
    std::function<std::array<double, 3>(const std::array<double, 3>&)>;

VectorPotential zero_potential();
// Half-space edge field: A = (0, 0, cos(nu)*x1 + sin(nu)*x2).
VectorPotential edge_potential(double nu);
// Symmetric-gauge unit field in the plane: A = (-x2/2, x1/2, 0).
VectorPotential symmetric_gauge_potential();

// Link-variable (Peierls) discretization of a magnetic field.  For the edge
// from node p to its +axis neighbor q we store
//     phase[a][p] = strength * A(midpoint(p,q)) . (q - p),
// and covariant hops apply exp(-i * phase) to the neighbor value, so a pure
// gauge A = grad(theta) multiplies fields by exp(i * strength * theta)
// without changing any quadratic form.  Midpoint sampling makes the plaquette
// sum of phases reproduce the enclosed flux exactly for linear A.
class LinkGauge {
 public:
  static LinkGauge build(const Grid& g, const VectorPotential& a,
                         double strength);
  static LinkGauge none(const Grid& g);  // all phases zero

  const Grid& grid() const { return grid_; }
  double strength() const { return strength_; }

  // Phase on the edge leaving node idx in +axis direction.  Only valid when
  // that neighbor exists (node not on the hi face of the axis).
  double phase(int axis, std::size_t idx) const {
    return phase_[static_cast<size_t>(axis)][idx];
  }

  // Returns a copy with phases shifted by theta(q) - theta(p): the discrete
  // gauge transform matching pointwise multiplication by exp(i*theta).
  LinkGauge shifted(const std::function<double(const std::array<double, 3>&)>&
                        theta) const;

  // Sum of signed phases around the (axis_a, axis_b) plaquette whose lowest
  // corner is idx; equals strength * flux through the plaquette for linear A.
  double plaquette(int axis_a, int axis_b, std::size_t idx) const;

 private:
  explicit LinkGauge(Grid g);
  Grid grid_;
  double strength_ = 0.0;
  std::array<std::vector<double>, 3> phase_;
};

LinkGauge build_links(const Grid& g, const VectorPotential& a, double strength);

}  // namespace glsurf
