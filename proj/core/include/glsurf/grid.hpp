#pragma once

#include <array>
#include <cstddef>
#include <string>
#include <vector>

namespace glsurf {

enum class Bc { Neumann, Dirichlet };

// One axis of a tensor grid: n cells, n+1 nodes at lo + i*h, h=(hi-lo)/n.
struct AxisSpec {
  double lo = 0.0;
  double hi = 1.0;
  int n = 4;           // cell count, >= 4
  Bc bc_lo = Bc::Dirichlet;
  Bc bc_hi = Bc::Dirichlet;
};

// Tensor-product node grid in 1..3 dimensions with per-face boundary tags.
// Quadrature is the trapezoid rule: a node's weight is the product over axes
// of h_a times 1/2 on that axis's end nodes and 1 in the interior.  Nodes on
// any Dirichlet face carry exact zeros in every field and drop out of all
// operators; Neumann faces reflect (mirror ghost), which together with the
// halved boundary weights makes every operator here exactly self-adjoint in
// the weighted inner product.
class Grid {
 public:
  explicit Grid(std::vector<AxisSpec> axes);

  int dim() const { return static_cast<int>(axes_.size()); }
  const AxisSpec& axis(int a) const { return axes_[static_cast<size_t>(a)]; }
  double h(int a) const { return h_[static_cast<size_t>(a)]; }
  // nodes along axis a (= cells+1); 1 for axes beyond dim().
  int nodes(int a) const { return shape_[static_cast<size_t>(a)]; }
  std::size_t node_count() const { return count_; }

  std::size_t index(int i, int j = 0, int k = 0) const {
    return (static_cast<std::size_t>(i) * shape_[1] + j) * shape_[2] + k;
  }
  std::array<int, 3> unpack(std::size_t idx) const {
    const int k = static_cast<int>(idx % shape_[2]);
    idx /= shape_[2];
    return {static_cast<int>(idx / shape_[1]),
            static_cast<int>(idx % shape_[1]), k};
  }

  double coord(int a, int i) const {
    return axes_[static_cast<size_t>(a)].lo + i * h_[static_cast<size_t>(a)];
  }
  // Physical position of a node, zero-padded beyond dim().
  std::array<double, 3> position(std::size_t idx) const;

  // Trapezoid node weight (product over axes).
  double weight(std::size_t idx) const;
  const std::vector<double>& weights() const { return weight_; }

  bool on_dirichlet(std::size_t idx) const { return dirichlet_[idx] != 0; }
  // True if node i sits on the lo/hi face of axis a.
  bool on_lo(int a, const std::array<int, 3>& c) const {
    return c[static_cast<size_t>(a)] == 0;
  }
  bool on_hi(int a, const std::array<int, 3>& c) const {
    return c[static_cast<size_t>(a)] == axes_[static_cast<size_t>(a)].n;
  }

  bool operator==(const Grid& o) const;
  bool operator!=(const Grid& o) const { return !(*this == o); }

  std::string describe() const;

 private:
  std::vector<AxisSpec> axes_;
  std::array<std::size_t, 3> shape_{1, 1, 1};
  std::array<double, 3> h_{1.0, 1.0, 1.0};
  std::size_t count_ = 1;
  std::vector<double> weight_;       // per node
  std::vector<unsigned char> dirichlet_;  // per node
};

}  // namespace glsurf
