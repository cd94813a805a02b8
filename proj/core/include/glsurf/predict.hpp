#pragma once

// Surface predictors: the leading-order ground-state energy, the local L4
// profile, and the bulk/surface transition scan, all assembled from an
// energy table E(b, nu), a spectral curve zeta(nu), the bulk curvature
// constant E2, and a triangulated boundary.

#include <vector>

#include "glsurf/bulk.hpp"
#include "glsurf/mesh.hpp"
#include "glsurf/thermo.hpp"

namespace glsurf::predict {

// E(b, nu) interpolated bilinearly from the table, with the spectral
// zero-set applied exactly: b <= zeta(nu) returns 0 without touching the
// table data (and without requiring the table to cover such b).  Queries
// above the curve must lie inside the table's grids.
double table_E(const thermo::EnergyTable& table, double b, double nu);

// One-point (centroid) quadrature of E(b, nu(x)) over the closed surface:
// sum of facet_area * E(b, facet_nu).  Only facets with zeta(nu) < b
// contribute, exactly.
double surface_integral_E(const mesh::TriMesh& m,
                          const thermo::EnergyTable& table, double b);

// Facets where superconductivity survives at reduced field b: zeta(nu) < b.
struct GammaRegion {
  std::vector<int> facets;
  double area = 0.0;
};
GammaRegion gamma_region(const mesh::TriMesh& m, double b,
                         const halfplane::SpectralCurve& curve);

struct EnergyPrediction {
  double kappa = 0.0;
  double H = 0.0;
  double b_eff = 0.0;        // min(kappa/H, 1)
  double surface_term = 0.0;  // sqrt(kappa*H) * integral of E(b_eff, nu)
  double bulk_term = 0.0;     // E2 * volume * max(kappa - H, 0)^2
  double total = 0.0;         // surface_term + bulk_term
  // Reporting scales, never added to the total: the remainder magnitude
  // max(kappa, max(kappa - H, 0)^2) and the small parameter
  // max(1/kappa, max(kappa/H - 1, 0)^2) of the expansion.
  double error_scale = 0.0;
  double lambda = 0.0;
};

// Leading-order ground-state energy for a sample of characteristic scale
// kappa in applied field H, valid near and above the transition (H at least
// (1 - 0.3) * kappa; further below, the expansion loses its leading term
// and the call throws).  g_check, when non-null, cross-checks the measured
// bulk curve against E2 near b = 1 and rejects grossly inconsistent inputs;
// pass nullptr when no curve is available.
EnergyPrediction predict_ground_energy(double kappa, double H,
                                       const mesh::TriMesh& m,
                                       const thermo::EnergyTable& table,
                                       const bulk::GCurve* g_check,
                                       double E2);

// Predicted value of (1/2) * integral of |psi|^4 over a subdomain D whose
// boundary contribution is the given facet subset and whose volume is
// subvolume.  Both terms are nonnegative by the sign conventions of the
// inputs; a negative result beyond rounding signals an inconsistent table
// or E2 and throws.
double predict_local_L4(double kappa, double H, const mesh::TriMesh& m,
                        const std::vector<int>& submesh, double subvolume,
                        const thermo::EnergyTable& table, double E2);

// Predictions along H = kappa - a * sqrt(kappa) for each a in a_range
// (nonnegative, strictly increasing).  a_star is the crossover where
// |bulk_term| = |surface_term|, linearly interpolated between samples; NaN
// when the scan does not bracket one.
struct TransitionScan {
  std::vector<double> a_values;
  std::vector<EnergyPrediction> predictions;
  double a_star = 0.0;
};
TransitionScan transition_scan(double kappa, const std::vector<double>& a_range,
                               const mesh::TriMesh& m,
                               const thermo::EnergyTable& table,
                               const bulk::GCurve* g_check, double E2);

}  // namespace glsurf::predict
