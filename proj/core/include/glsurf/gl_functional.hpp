#pragma once

#include <cstdint>
#include <vector>

#include "glsurf/minimize.hpp"
#include "glsurf/operators.hpp"

namespace glsurf {

// Ginzburg-Landau-type energy
//   E(u) = kc*<u, K u>_W + mc*||u||_W^2 + qc*int |u|^4,
// with K the covariant kinetic operator (no potential).  The reduced cell
// energy uses (kc, mc, qc) = (1, -b, b/2); the bulk window uses (b, -1, 1/2).
class GLFunctional : public Functional {
 public:
  GLFunctional(SchrodingerOp kinetic, double kinetic_coeff, double mass_coeff,
               double quartic_coeff);

  const Grid& grid() const override { return kinetic_.grid(); }
  const SchrodingerOp& kinetic_op() const { return kinetic_; }
  double kinetic_coeff() const { return kc_; }
  double mass_coeff() const { return mc_; }
  double quartic_coeff() const { return qc_; }

  double energy(const ComplexField& u) const override;
  // W-metric gradient: 2*(kc*K u + mc*u + 2*qc*|u|^2 u)
  ComplexField gradient(const ComplexField& u) const override;

 private:
  SchrodingerOp kinetic_;
  double kc_, mc_, qc_;
};

struct GLMinimizeOptions {
  double grad_tol = 1e-5;
  long max_iter = 400000;
  int refresh_every = 64;  // recompute K u and the tracked sums exactly
};

// Gradient descent specialized to GLFunctional: the energy restricted to the
// ray u - alpha*g is an exact quartic polynomial in alpha whose coefficients
// come from one extra operator apply (K g) plus pointwise sums, so each
// iteration costs a single stencil application.  Steps use the
// Barzilai-Borwein length when it decreases the polynomial, otherwise the
// exact one-dimensional minimizer, so the energy is monotone.  The best of
// the supplied starts is returned, with the restart spread recorded.
MinimizeResult minimize_gl(const GLFunctional& f,
                           const std::vector<ComplexField>& starts,
                           const GLMinimizeOptions& opts = {});

}  // namespace glsurf
