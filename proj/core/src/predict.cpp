#include "glsurf/predict.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

namespace glsurf::predict {

namespace {

// Bracketing index and linear weight for x on a sorted grid; x may sit on
// the ends exactly (within a relative sliver) but not outside.
struct Bracket {
  std::size_t i = 0;
  double w = 0.0;  // value = (1-w)*grid[i] + w*grid[i+1]
};

Bracket locate(double x, const std::vector<double>& grid, const char* what) {
  const double tol = 1e-12 * std::max(1.0, std::abs(grid.back()));
  if (x < grid.front() - tol || x > grid.back() + tol)
    throw std::invalid_argument(
        std::string("table_E: ") + what + " = " + std::to_string(x) +
        " outside the table range [" + std::to_string(grid.front()) + ", " +
        std::to_string(grid.back()) + "]");
  if (grid.size() == 1) return {0, 0.0};
  const auto it =
      std::upper_bound(grid.begin(), grid.end(), x);
  std::size_t hi = static_cast<std::size_t>(it - grid.begin());
  hi = std::min(std::max<std::size_t>(hi, 1), grid.size() - 1);
  const std::size_t lo = hi - 1;
  const double w =
      std::clamp((x - grid[lo]) / (grid[hi] - grid[lo]), 0.0, 1.0);
  return {lo, w};
}

double clamp_unit_angle(double nu) {
  // Facet angles are already in [0, pi/2]; absorb rounding at the ends.
  return std::clamp(nu, 0.0, std::asin(1.0));
}

void check_E2(double E2) {
  if (!(E2 >= -0.5) || !(E2 < 0.0))
    throw std::invalid_argument("predict: E2 = " + std::to_string(E2) +
                                " outside [-1/2, 0)");
}

// A measured bulk curve must be compatible with the curvature constant it
// accompanies: near b = 1 the window density g(b) sits between the full
// parabola E2*(1-b)^2 doubled (finite windows under-fill, never by more
// than the layer fraction allows) and zero.
void check_g_curve(const bulk::GCurve* g_check, double E2) {
  if (g_check == nullptr) return;
  for (const auto& s : g_check->samples) {
    if (s.b < 0.85 || s.b > 0.999) continue;
    const double parabola = E2 * (1.0 - s.b) * (1.0 - s.b);
    if (s.g_estimate > 1e-3 || s.g_estimate < 2.0 * parabola - 1e-3)
      throw std::invalid_argument(
          "predict: bulk curve sample g(" + std::to_string(s.b) + ") = " +
          std::to_string(s.g_estimate) +
          " is inconsistent with E2 = " + std::to_string(E2));
  }
}

void check_table(const thermo::EnergyTable& table) {
  if (table.b_grid.empty() || table.nu_grid.empty() || table.E.empty())
    throw std::invalid_argument("predict: empty energy table");
}

double positive_part(double x) { return x > 0.0 ? x : 0.0; }

}  // namespace

double table_E(const thermo::EnergyTable& table, double b, double nu) {
  check_table(table);
  nu = clamp_unit_angle(nu);
  // The zero-set is known exactly from the curve; no table data needed.
  if (b <= table.zeta_curve.zeta_at(nu)) return 0.0;

  const Bracket bb = locate(b, table.b_grid, "b");
  const Bracket bn = locate(nu, table.nu_grid, "nu");
  const std::size_t i0 = bb.i;
  const std::size_t i1 = std::min(bb.i + 1, table.b_grid.size() - 1);
  const std::size_t j0 = bn.i;
  const std::size_t j1 = std::min(bn.i + 1, table.nu_grid.size() - 1);
  const double e00 = table.E[j0][i0];
  const double e01 = table.E[j0][i1];
  const double e10 = table.E[j1][i0];
  const double e11 = table.E[j1][i1];
  const double lo = (1.0 - bb.w) * e00 + bb.w * e01;
  const double hi = (1.0 - bb.w) * e10 + bb.w * e11;
  // Nonpositive for any audited table; deliberately not clamped so corrupt
  // inputs surface in the predictors' consistency guards.
  return (1.0 - bn.w) * lo + bn.w * hi;
}

double surface_integral_E(const mesh::TriMesh& m,
                          const thermo::EnergyTable& table, double b) {
  if (!(b > 0.0) || !(b <= 1.0))
    throw std::invalid_argument("surface_integral_E: b = " +
                                std::to_string(b) +
                                " outside (0, 1]");
  double sum = 0.0;
  for (const mesh::Facet& f : m.facets()) sum += f.area * table_E(table, b, f.nu);
  return sum;
}

GammaRegion gamma_region(const mesh::TriMesh& m, double b,
                         const halfplane::SpectralCurve& curve) {
  if (!(b > 0.0) || !(b <= 1.0))
    throw std::invalid_argument("gamma_region: b = " + std::to_string(b) +
                                " outside (0, 1]");
  GammaRegion region;
  for (int f = 0; f < m.facet_count(); ++f) {
    const mesh::Facet& fct = m.facets()[static_cast<std::size_t>(f)];
    if (curve.zeta_at(fct.nu) < b) {
      region.facets.push_back(f);
      region.area += fct.area;
    }
  }
  return region;
}

EnergyPrediction predict_ground_energy(double kappa, double H,
                                       const mesh::TriMesh& m,
                                       const thermo::EnergyTable& table,
                                       const bulk::GCurve* g_check,
                                       double E2) {
  if (!(kappa > 0.0) || !(H > 0.0))
    throw std::invalid_argument("predict: kappa and H must be positive");
  if (H < 0.7 * kappa)
    throw std::invalid_argument(
        "predict: H = " + std::to_string(H) + " sits below 0.7 * kappa = " +
        std::to_string(0.7 * kappa) +
        "; the expansion only holds near and above the transition");
  check_E2(E2);
  check_g_curve(g_check, E2);

  EnergyPrediction out;
  out.kappa = kappa;
  out.H = H;
  out.b_eff = std::min(kappa / H, 1.0);
  out.surface_term =
      std::sqrt(kappa * H) * surface_integral_E(m, table, out.b_eff);
  const double deficit = positive_part(kappa - H);
  out.bulk_term = E2 * m.volume() * deficit * deficit;
  out.total = out.surface_term + out.bulk_term;
  out.error_scale = std::max(kappa, deficit * deficit);
  const double excess = positive_part(kappa / H - 1.0);
  out.lambda = std::max(1.0 / kappa, excess * excess);
  return out;
}

double predict_local_L4(double kappa, double H, const mesh::TriMesh& m,
                        const std::vector<int>& submesh, double subvolume,
                        const thermo::EnergyTable& table, double E2) {
  if (!(kappa > 0.0) || !(H > 0.0))
    throw std::invalid_argument("predict: kappa and H must be positive");
  if (H < 0.7 * kappa)
    throw std::invalid_argument(
        "predict: H = " + std::to_string(H) + " sits below 0.7 * kappa = " +
        std::to_string(0.7 * kappa) +
        "; the expansion only holds near and above the transition");
  check_E2(E2);
  if (!(subvolume >= 0.0))
    throw std::invalid_argument("predict_local_L4: subvolume must be >= 0");

  std::vector<int> sorted = submesh;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t k = 0; k < sorted.size(); ++k) {
    if (sorted[k] < 0 || sorted[k] >= m.facet_count())
      throw std::invalid_argument("predict_local_L4: facet index " +
                                  std::to_string(sorted[k]) +
                                  " out of range");
    if (k > 0 && sorted[k] == sorted[k - 1])
      throw std::invalid_argument("predict_local_L4: facet index " +
                                  std::to_string(sorted[k]) +
                                  " listed twice");
  }

  const double b_eff = std::min(kappa / H, 1.0);
  double boundary = 0.0;
  for (int f : submesh) {
    const mesh::Facet& fct = m.facets()[static_cast<std::size_t>(f)];
    boundary += fct.area * table_E(table, b_eff, fct.nu);
  }
  const double excess = positive_part(kappa / H - 1.0);
  const double surface_part = -(1.0 / kappa) * std::sqrt(H / kappa) * boundary;
  const double bulk_part = -E2 * subvolume * excess * excess;
  const double value = surface_part + bulk_part;

  const double tol =
      1e-9 * (1.0 + std::abs(surface_part) + std::abs(bulk_part));
  if (value < -tol)
    throw std::runtime_error(
        "predict_local_L4: negative prediction " + std::to_string(value) +
        "; the energy table and E2 are inconsistent");
  return std::max(value, 0.0);
}

TransitionScan transition_scan(double kappa,
                               const std::vector<double>& a_range,
                               const mesh::TriMesh& m,
                               const thermo::EnergyTable& table,
                               const bulk::GCurve* g_check, double E2) {
  if (a_range.empty())
    throw std::invalid_argument("transition_scan: empty a range");
  for (std::size_t k = 0; k < a_range.size(); ++k) {
    if (!(a_range[k] >= 0.0) || !std::isfinite(a_range[k]))
      throw std::invalid_argument("transition_scan: a must be finite and "
                                  ">= 0");
    if (k > 0 && !(a_range[k] > a_range[k - 1]))
      throw std::invalid_argument(
          "transition_scan: a range must be strictly increasing");
  }

  TransitionScan scan;
  scan.a_values = a_range;
  scan.predictions.reserve(a_range.size());
  for (double a : a_range) {
    const double H = kappa - a * std::sqrt(kappa);
    scan.predictions.push_back(
        predict_ground_energy(kappa, H, m, table, g_check, E2));
  }

  // Crossover of r(a) = |bulk| - |surface|: linear interpolation between
  // the first bracketing pair.
  scan.a_star = std::numeric_limits<double>::quiet_NaN();
  auto r = [&](std::size_t k) {
    return std::abs(scan.predictions[k].bulk_term) -
           std::abs(scan.predictions[k].surface_term);
  };
  for (std::size_t k = 1; k < scan.predictions.size(); ++k) {
    const double r0 = r(k - 1);
    const double r1 = r(k);
    if (r0 <= 0.0 && r1 >= 0.0 && r1 != r0) {
      scan.a_star =
          a_range[k - 1] + (0.0 - r0) / (r1 - r0) * (a_range[k] - a_range[k - 1]);
      break;
    }
  }
  return scan;
}

}  // namespace glsurf::predict
