#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "glsurf/field.hpp"

// Ground state of the half-line oscillator -u'' + (t - xi)^2 u with a
// Neumann wall at t = 0, and the minimum of its lowest eigenvalue over the
// well center xi.  That minimum (about 0.59) and its minimizer xi0 (which
// satisfies xi0^2 = minimum) set the surface spectral constant used
// throughout; everything downstream reads them from here.
namespace glsurf::halfline {

struct GridSpec {
  double h = 1.0 / 250.0;
  double t_max = 0.0;  // 0 = automatic: max(12, xi + 8)
  double eig_tol = 1e-10;
  std::uint64_t seed = 0x1d5eedULL;
};

struct Mu1Result {
  double mu1;
  double xi;
  double residual;
  double wall_mass;  // |u|^2 mass on the 3 nodes next to the far wall
};

// Lowest eigenvalue at fixed well center xi.  Throws if the truncation
// interval is too short for the state (names the required length).
Mu1Result mu1(double xi, const GridSpec& spec = {});

struct Theta0Result {
  double theta0 = 0.0;
  double xi0 = 0.0;
  double residual = 0.0;
  // coarse scan used to verify a single minimum before the line search
  std::vector<std::pair<double, double>> scan;
};

// Minimum of mu1 over xi in [0, 2]: coarse scan (rejects multiple local
// minima), golden-section search, then a three-point parabolic refinement.
Theta0Result find_theta0(const GridSpec& spec = {}, double xi_tol = 1e-5);

struct GroundState {
  ComplexField phi;
  double eigenvalue;
  double xi;
};

// Normalized nonnegative ground state at xi (xi < 0 means: use xi0).
GroundState ground_state(double xi = -1.0, const GridSpec& spec = {});

}  // namespace glsurf::halfline
