#pragma once

#include <functional>
#include <vector>

#include "glsurf/field.hpp"
#include "glsurf/gauge.hpp"
#include "glsurf/grid.hpp"

namespace glsurf {

class LinearOperator {
 public:
  virtual ~LinearOperator() = default;
  virtual const Grid& grid() const = 0;
  virtual void apply(const ComplexField& in, ComplexField& out) const = 0;
  // Fills d with the operator diagonal (for Jacobi preconditioning).
  // Returns false if not available.
  virtual bool jacobi_diagonal(std::vector<double>& d) const {
    (void)d;
    return false;
  }
  ComplexField operator()(const ComplexField& in) const;
};

// Magnetic Schrodinger operator -D^2 + V on the grid, where D is the
// link-variable covariant difference.  Boundary handling:
//   * Dirichlet faces: rows and columns are dropped (output is exactly 0).
//   * Neumann faces: mirror ghost, i.e. the normal difference couples only
//     the interior neighbor with a factor 2.
// With the trapezoid node weights this is exactly self-adjoint in the
// weighted inner product, and <u, K u> equals the edge sum
//   sum_edges t_e |exp(-i phase) u_q - u_p|^2 / h^2
// with t_e the transverse trapezoid weight times h.
class SchrodingerOp final : public LinearOperator {
 public:
  // potential may be empty (interpreted as zero); otherwise one value/node.
  SchrodingerOp(LinkGauge links, std::vector<double> potential);

  static SchrodingerOp kinetic(LinkGauge links) {
    return SchrodingerOp(std::move(links), {});
  }
  static SchrodingerOp with_potential(
      LinkGauge links,
      const std::function<double(const std::array<double, 3>&)>& v);

  const Grid& grid() const override { return links_.grid(); }
  const LinkGauge& links() const { return links_; }
  void apply(const ComplexField& in, ComplexField& out) const override;
  bool jacobi_diagonal(std::vector<double>& d) const override;

  // Re<u, Op u> without forming Op u (edge sum + potential sum).
  double quadratic_form(const ComplexField& u) const;

 private:
  LinkGauge links_;
  std::vector<double> potential_;
  // exp(-i * phase) per +axis edge, cached so apply() does no trig
  std::array<std::vector<cd>, 3> hop_;
};

// Edge-sum kinetic energy of u, optionally weighted by a function of the
// edge midpoint: sum_edges t_e * w(mid) * |exp(-i phase) u_q - u_p|^2 / h^2.
double kinetic_form(const ComplexField& u, const LinkGauge& links);
double kinetic_form_weighted(
    const ComplexField& u, const LinkGauge& links,
    const std::function<double(const std::array<double, 3>&)>& w);

}  // namespace glsurf
