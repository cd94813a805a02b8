#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

#include "glsurf/field.hpp"
#include "glsurf/operators.hpp"

namespace glsurf {

struct EigenOptions {
  double tol = 1e-8;      // residual tolerance: ||Av - rho v|| <= tol*max(1,|rho|)
  int max_outer = 200;    // inverse-iteration steps
  int max_inner = 5000;   // CG iterations per solve
  double inner_rtol = 1e-2;
  double sigma0 = -0.5;   // initial shift; must sit below the spectrum
  std::uint64_t seed = 0x676c737572ULL;
  const ComplexField* start = nullptr;  // optional warm start (same grid)
};

struct EigenResult {
  double eigenvalue = 0.0;
  ComplexField eigenvector;
  double residual = 0.0;
  int outer_iterations = 0;
  long inner_iterations = 0;
};

class EigenError : public std::runtime_error {
 public:
  EigenError(const std::string& msg, double eigenvalue, double residual)
      : std::runtime_error(msg), eigenvalue(eigenvalue), residual(residual) {}
  double eigenvalue;
  double residual;
};

// Lowest eigenpair of a weighted-inner-product self-adjoint operator by
// shift-and-invert inverse iteration.  Inner solves are Jacobi-preconditioned
// CG on (Op - sigma); the shift starts at sigma0 (below the spectrum for the
// nonnegative operators built here) and follows the Rayleigh quotient from
// below once the residual is small.  If CG meets a non-positive curvature
// direction the shift is backed off and the step retried.  Fully
// deterministic for a fixed seed and grid.
EigenResult lowest_eigenpair(const LinearOperator& op,
                             const EigenOptions& opts = {});

}  // namespace glsurf
