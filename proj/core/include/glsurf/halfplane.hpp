#pragma once

#include <cstdint>
#include <vector>

#include "glsurf/field.hpp"
#include "json.hpp"

// Lowest spectrum zeta(nu) of the half-space magnetic Laplacian whose field
// makes angle nu with the boundary plane, reduced to two dimensions:
//
//  * nu in (0, pi/2]: the real Schrodinger operator
//      -Lap + (cos(nu) x1 + sin(nu) x2)^2   on x1 > 0, Neumann at x1 = 0,
//    whose infimum equals the 3D one for interior angles.
//  * nu = 0 (field tangent to the boundary): that reduction fails, so we
//    solve the x2-independent magnetic fiber in the (x1, x3) plane with
//    gauge A = (0, x1) and link variables.  Its ground energy is the same
//    constant computed by glsurf::halfline, which gives a cross-check of two
//    independent discretizations.
//
// zeta is nondecreasing, starts at the half-line constant, and reaches 1 at
// nu = pi/2 where the spectrum becomes essential (no localized state).
namespace glsurf::halfplane {

struct GridSpec {
  double h = 0.25;          // coarse spacing; refinement solves h/2 as well
  bool richardson = true;   // extrapolate the (h, h/2) pair
  double box_factor = 10.0; // half-box ~ box_factor / sqrt(spectral gap)
  double t1_min = 14.0;
  double t2_min = 14.0;
  double t_cap = 60.0;      // boxes never exceed this (near-edge cap)
  double tangent_t3 = 48.0; // half-extent along the field for the nu=0 fiber
  double gap_hint = 0.0;    // >0 skips the cheap bootstrap solve
  double eig_tol = 1e-9;
  std::uint64_t seed = 0x2d5eedULL;
};

struct ZetaResult {
  double nu = 0.0;
  double zeta = 0.0;     // best estimate (Richardson pair when enabled)
  double zeta_h = 0.0;   // coarse-level value
  double zeta_h2 = 0.0;  // fine-level value (= zeta_h when not refined)
  double gap = 0.0;      // 1 - zeta
  bool essential_edge = false;  // within 0.05 of 1, or box hit the cap
  double residual = 0.0;        // eigensolver residual at the finest level
  double t1 = 0.0, t2_lo = 0.0, t2_hi = 0.0;
};

ZetaResult zeta(double nu, const GridSpec& spec = {});

struct DecayReport {
  double alpha_fit = 0.0;    // slope of log|phi| against distance
  double alpha_bound = 0.0;  // sqrt(1 - zeta)
  double tail_mass = 0.0;    // |phi|^2 mass within 3h of the far walls
};

struct GroundState {
  ComplexField phi;    // normalized, nonnegative
  double eigenvalue;   // Rayleigh quotient of phi (finest level, no extrapolation)
  ZetaResult sample;   // the full zeta record for this nu
  DecayReport decay;
};

// Localized ground state; only defined for interior angles 0 < nu < pi/2.
GroundState eigenfunction(double nu, const GridSpec& spec = {});

// Sampled zeta curve with monotone-cubic interpolation and inverse.
class SpectralCurve {
 public:
  SpectralCurve(std::vector<double> nus, std::vector<double> zetas,
                std::vector<unsigned char> essential_flags, double theta0_ref);

  double zeta_at(double nu) const;
  // angle at which the curve crosses z (clamped to the curve's range)
  double nu_at(double z) const;

  const std::vector<double>& nus() const { return nu_; }
  const std::vector<double>& zetas() const { return z_; }
  const std::vector<unsigned char>& essential_flags() const { return flag_; }
  double theta0_ref() const { return theta0_; }

  // Pinned shape audits: nondecreasing within 1e-4, first value near the
  // half-line constant, last value near 1.  Throws with the offending pair.
  void validate() const;

  nlohmann::json to_json() const;
  static SpectralCurve from_json(const nlohmann::json& j);

 private:
  std::vector<double> nu_, z_;
  std::vector<unsigned char> flag_;
  double theta0_;
  std::vector<double> z_interp_;  // clamped to <= 1 for interpolation
};

// Uniform curve on [0, pi/2]; theta0_ref <= 0 means: compute it from the
// half-line module for the validation cross-check.
SpectralCurve build_curve(int samples = 17, const GridSpec& spec = {},
                          double theta0_ref = 0.0);

// Bilinear resample of a field onto another grid (zero outside the source
// box); used to warm-start refined solves from coarse ones.
ComplexField resample(const ComplexField& src, const Grid& dst);

}  // namespace glsurf::halfplane
