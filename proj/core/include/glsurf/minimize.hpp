#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

#include "glsurf/field.hpp"

namespace glsurf {

// Real-valued energy of a complex field.  gradient() is taken with respect
// to the weighted inner product, so E(u + t*d) = E(u) + t*Re<grad, d>_W + o(t).
class Functional {
 public:
  virtual ~Functional() = default;
  virtual const Grid& grid() const = 0;
  virtual double energy(const ComplexField& u) const = 0;
  virtual ComplexField gradient(const ComplexField& u) const = 0;
};

struct MinimizeOptions {
  double grad_tol = 1e-6;
  int max_iter = 100000;
  double alpha_init = 1e-2;
  double alpha_min = 1e-14;
  double alpha_max = 1e4;
  std::uint64_t seed = 0x6d696e5aULL;
};

struct MinimizeResult {
  double energy = 0.0;
  ComplexField minimizer;
  double grad_norm = 0.0;
  long iterations = 0;
  int starts_used = 0;
  // relative spread of the per-start energies; > 1% sets the flag
  double restart_spread = 0.0;
  bool restart_disagreement = false;
};

class MinimizeError : public std::runtime_error {
 public:
  MinimizeError(const std::string& msg, long step, double energy,
                double grad_norm)
      : std::runtime_error(msg), step(step), energy(energy),
        grad_norm(grad_norm) {}
  long step;
  double energy;
  double grad_norm;
};

// Barzilai-Borwein gradient descent with an Armijo backtracking safeguard,
// so the energy decreases monotonically.  Throws MinimizeError on NaN or a
// failed line search, reporting the step index.
MinimizeResult descend(const Functional& f, const ComplexField& init,
                       const MinimizeOptions& opts = {});

// Runs descend from each start and keeps the lowest energy.  Records the
// spread between the per-start results and flags disagreement above 1%.
MinimizeResult minimize_energy(const Functional& f,
                               const std::vector<ComplexField>& starts,
                               const MinimizeOptions& opts = {});

// Convenience: derives `restarts` starts from init (init itself, a constant
// fill of amplitude 0.5, seeded random fields).
MinimizeResult minimize_energy(const Functional& f, const ComplexField& init,
                               int restarts, double grad_tol);

}  // namespace glsurf
