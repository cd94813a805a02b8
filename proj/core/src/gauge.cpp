#include "glsurf/gauge.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace glsurf {

VectorPotential zero_potential() {
  return [](const std::array<double, 3>&) {
    return std::array<double, 3>{0.0, 0.0, 0.0};
  };
}

VectorPotential edge_potential(double nu) {
  const double c = std::cos(nu), s = std::sin(nu);
  return [c, s](const std::array<double, 3>& x) {
    return std::array<double, 3>{0.0, 0.0, c * x[0] + s * x[1]};
  };
}

VectorPotential symmetric_gauge_potential() {
  return [](const std::array<double, 3>& x) {
    return std::array<double, 3>{-0.5 * x[1], 0.5 * x[0], 0.0};
  };
}

LinkGauge::LinkGauge(Grid g) : grid_(std::move(g)) {}

LinkGauge LinkGauge::build(const Grid& g, const VectorPotential& a,
                           double strength) {
  LinkGauge lg(g);
  lg.strength_ = strength;
  for (int ax = 0; ax < g.dim(); ++ax) {
    auto& ph = lg.phase_[static_cast<size_t>(ax)];
    ph.assign(g.node_count(), 0.0);
    const double h = g.h(ax);
    for (std::size_t idx = 0; idx < g.node_count(); ++idx) {
      const auto c = g.unpack(idx);
      if (c[static_cast<size_t>(ax)] >= g.axis(ax).n) continue;  // no +edge
      std::array<double, 3> mid = g.position(idx);
      mid[static_cast<size_t>(ax)] += 0.5 * h;
      const double p = strength * a(mid)[static_cast<size_t>(ax)] * h;
      if (!std::isfinite(p))
        throw std::runtime_error(
            "build_links: non-finite phase on axis " + std::to_string(ax) +
            " at node " + std::to_string(idx));
      ph[idx] = p;
    }
  }
  return lg;
}

LinkGauge LinkGauge::none(const Grid& g) {
  return build(g, zero_potential(), 0.0);
}

LinkGauge LinkGauge::shifted(
    const std::function<double(const std::array<double, 3>&)>& theta) const {
  LinkGauge lg(*this);
  for (int ax = 0; ax < grid_.dim(); ++ax) {
    auto& ph = lg.phase_[static_cast<size_t>(ax)];
    for (std::size_t idx = 0; idx < grid_.node_count(); ++idx) {
      const auto c = grid_.unpack(idx);
      if (c[static_cast<size_t>(ax)] >= grid_.axis(ax).n) continue;
      std::array<double, 3> p = grid_.position(idx);
      std::array<double, 3> q = p;
      q[static_cast<size_t>(ax)] += grid_.h(ax);
      ph[idx] += theta(q) - theta(p);
    }
  }
  return lg;
}

double LinkGauge::plaquette(int axis_a, int axis_b, std::size_t idx) const {
  const auto c = grid_.unpack(idx);
  if (c[static_cast<size_t>(axis_a)] >= grid_.axis(axis_a).n ||
      c[static_cast<size_t>(axis_b)] >= grid_.axis(axis_b).n)
    throw std::invalid_argument("plaquette: node on hi face");
  std::size_t stride_a = 1, stride_b = 1;
  // stride of +1 step along an axis in the flat index
  const std::array<std::size_t, 3> sh{static_cast<std::size_t>(grid_.nodes(0)),
                                      static_cast<std::size_t>(grid_.nodes(1)),
                                      static_cast<std::size_t>(grid_.nodes(2))};
  const std::array<std::size_t, 3> strides{sh[1] * sh[2], sh[2], 1};
  stride_a = strides[static_cast<size_t>(axis_a)];
  stride_b = strides[static_cast<size_t>(axis_b)];
  return phase(axis_a, idx) + phase(axis_b, idx + stride_a) -
         phase(axis_a, idx + stride_b) - phase(axis_b, idx);
}

LinkGauge build_links(const Grid& g, const VectorPotential& a,
                      double strength) {
  return LinkGauge::build(g, a, strength);
}

}  // namespace glsurf
