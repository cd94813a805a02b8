#include "glsurf/grid.hpp"

#include <cmath>
#include <sstream>
#include <stdexcept>

namespace glsurf {

Grid::Grid(std::vector<AxisSpec> axes) : axes_(std::move(axes)) {
  if (axes_.empty() || axes_.size() > 3)
    throw std::invalid_argument("Grid: need 1..3 axes");
  for (std::size_t a = 0; a < axes_.size(); ++a) {
    const AxisSpec& ax = axes_[a];
    if (ax.n < 4)
      throw std::invalid_argument("Grid: axis " + std::to_string(a) +
                                  " has fewer than 4 cells");
    if (!(ax.hi > ax.lo) || !std::isfinite(ax.lo) || !std::isfinite(ax.hi))
      throw std::invalid_argument("Grid: axis " + std::to_string(a) +
                                  " has empty or non-finite extent");
    shape_[a] = static_cast<std::size_t>(ax.n) + 1;
    h_[a] = (ax.hi - ax.lo) / ax.n;
  }
  count_ = shape_[0] * shape_[1] * shape_[2];

  weight_.resize(count_);
  dirichlet_.resize(count_, 0);
  for (std::size_t idx = 0; idx < count_; ++idx) {
    const auto c = unpack(idx);
    double w = 1.0;
    bool dir = false;
    for (int a = 0; a < dim(); ++a) {
      const AxisSpec& ax = axes_[static_cast<size_t>(a)];
      double wa = h_[static_cast<size_t>(a)];
      if (c[static_cast<size_t>(a)] == 0) {
        wa *= 0.5;
        if (ax.bc_lo == Bc::Dirichlet) dir = true;
      } else if (c[static_cast<size_t>(a)] == ax.n) {
        wa *= 0.5;
        if (ax.bc_hi == Bc::Dirichlet) dir = true;
      }
      w *= wa;
    }
    weight_[idx] = w;
    dirichlet_[idx] = dir ? 1 : 0;
  }
}

std::array<double, 3> Grid::position(std::size_t idx) const {
  const auto c = unpack(idx);
  std::array<double, 3> p{0.0, 0.0, 0.0};
  for (int a = 0; a < dim(); ++a)
    p[static_cast<size_t>(a)] = coord(a, c[static_cast<size_t>(a)]);
  return p;
}

double Grid::weight(std::size_t idx) const { return weight_[idx]; }

bool Grid::operator==(const Grid& o) const {
  if (axes_.size() != o.axes_.size()) return false;
  for (std::size_t a = 0; a < axes_.size(); ++a) {
    const AxisSpec &x = axes_[a], &y = o.axes_[a];
    if (x.lo != y.lo || x.hi != y.hi || x.n != y.n || x.bc_lo != y.bc_lo ||
        x.bc_hi != y.bc_hi)
      return false;
  }
  return true;
}

std::string Grid::describe() const {
  std::ostringstream os;
  for (std::size_t a = 0; a < axes_.size(); ++a) {
    const AxisSpec& ax = axes_[a];
    if (a) os << " x ";
    os << "[" << ax.lo << "," << ax.hi << "]/" << ax.n << "("
       << (ax.bc_lo == Bc::Neumann ? "N" : "D")
       << (ax.bc_hi == Bc::Neumann ? "N" : "D") << ")";
  }
  return os.str();
}

}  // namespace glsurf
