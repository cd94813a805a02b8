#include "glsurf/bulk.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>

#include "glsurf/gl_functional.hpp"
#include "glsurf/operators.hpp"

namespace glsurf::bulk {

namespace {

GLFunctional bulk_functional(const BulkProblem& prob, LinkGauge links) {
  return GLFunctional(SchrodingerOp::kinetic(std::move(links)), prob.b, -1.0,
                      0.5);
}

}  // namespace

void validate(const BulkProblem& prob) {
  if (!(prob.b >= 0.0) || !(prob.b <= 2.0))
    throw std::invalid_argument("bulk: b must lie in [0, 2]");
  if (!(prob.R >= 2.0) || !(prob.R <= 32.0))
    throw std::invalid_argument(
        "bulk: window side R must lie in [2, 32] (smaller windows have no "
        "bulk, larger ones no budget)");
  if (!(prob.h > 0.0) || !(prob.h <= 0.25))
    throw std::invalid_argument("bulk: spacing h must lie in (0, 1/4]");
  if (!(prob.grad_tol > 0.0))
    throw std::invalid_argument("bulk: grad_tol must be positive");
  if (prob.random_starts < 0)
    throw std::invalid_argument("bulk: random_starts must be >= 0");
}

Grid bulk_grid(const BulkProblem& prob) {
  validate(prob);
  const int n =
      std::max(4, static_cast<int>(std::lround(prob.R / prob.h)));
  const AxisSpec ax{-prob.R / 2.0, prob.R / 2.0, n, Bc::Dirichlet,
                    Bc::Dirichlet};
  return Grid{{ax, ax}};
}

LinkGauge bulk_links(const BulkProblem& prob) {
  return build_links(bulk_grid(prob), symmetric_gauge_potential(), 1.0);
}

double bulk_energy(const ComplexField& u, const BulkProblem& prob) {
  const Grid g = bulk_grid(prob);
  if (!(u.grid() == g))
    throw std::invalid_argument(
        "bulk_energy: field lives on a different grid");
  for (std::size_t i = 0; i < g.node_count(); ++i)
    if (g.on_dirichlet(i) && u[i] != cd{0.0, 0.0})
      throw std::invalid_argument(
          "bulk_energy: field violates the Dirichlet boundary tags");
  return bulk_functional(prob, bulk_links(prob)).energy(u);
}

namespace {

struct SolveOutcome {
  BulkSample sample;
  ComplexField minimizer;  // zero field when the window is normal
};

SolveOutcome solve_impl(const BulkProblem& prob,
                        std::vector<ComplexField> starts) {
  validate(prob);
  const Grid g = bulk_grid(prob);
  GLFunctional f = bulk_functional(prob, bulk_links(prob));

  if (starts.empty()) {
    ComplexField flat = ComplexField::constant(g, cd{0.5, 0.0});
    flat.zero_dirichlet();
    starts.push_back(std::move(flat));
    for (int k = 0; k < prob.random_starts; ++k)
      starts.push_back(ComplexField::random(g, prob.seed + k, 0.3));
  }

  GLMinimizeOptions opts;
  opts.grad_tol = prob.grad_tol;
  opts.max_iter = prob.max_iter;
  MinimizeResult res = minimize_gl(f, starts, opts);

  const bool use_zero = res.energy > 0.0;
  BulkSample out;
  out.b = prob.b;
  out.R = prob.R;
  out.m0 = use_zero ? 0.0 : res.energy;
  out.g_estimate = out.m0 / (prob.R * prob.R);
  out.sup_norm = use_zero ? 0.0 : sup_norm(res.minimizer);
  out.restart_spread = res.restart_spread;
  out.restart_disagreement = res.restart_disagreement;
  out.starts_used = res.starts_used;
  out.iterations = res.iterations;

  if (out.g_estimate < -0.5 - 1e-2)
    throw std::runtime_error(
        "solve_bulk: density " + std::to_string(out.g_estimate) +
        " undershoots the pointwise floor -1/2; the window is under-resolved");
  return {std::move(out),
          use_zero ? ComplexField::zeros(g) : std::move(res.minimizer)};
}

// Bilinear resample of a coarse window state onto a finer grid of the same
// square; Dirichlet zeros are re-asserted afterwards.
ComplexField prolong(const ComplexField& coarse, const Grid& fine) {
  const Grid& cg = coarse.grid();
  ComplexField out = ComplexField::zeros(fine);
  const int cn0 = cg.nodes(0) - 1, cn1 = cg.nodes(1) - 1;
  for (std::size_t idx = 0; idx < fine.node_count(); ++idx) {
    const auto c = fine.unpack(idx);
    const double u = (fine.coord(0, c[0]) - cg.axis(0).lo) / cg.h(0);
    const double v = (fine.coord(1, c[1]) - cg.axis(1).lo) / cg.h(1);
    const int i0 = std::clamp(static_cast<int>(u), 0, cn0 - 1);
    const int j0 = std::clamp(static_cast<int>(v), 0, cn1 - 1);
    const double wu = std::clamp(u - i0, 0.0, 1.0);
    const double wv = std::clamp(v - j0, 0.0, 1.0);
    const cd lo = (1.0 - wu) * coarse[cg.index(i0, j0)] +
                  wu * coarse[cg.index(i0 + 1, j0)];
    const cd hi = (1.0 - wu) * coarse[cg.index(i0, j0 + 1)] +
                  wu * coarse[cg.index(i0 + 1, j0 + 1)];
    out[idx] = (1.0 - wv) * lo + wv * hi;
  }
  out.zero_dirichlet();
  return out;
}

}  // namespace

BulkSample solve_bulk(const BulkProblem& prob) {
  return solve_impl(prob, {}).sample;
}

BulkSample solve_bulk_warm(const BulkProblem& prob) {
  validate(prob);
  BulkProblem coarse = prob;
  coarse.h = prob.h * 2.0;
  if (coarse.h > 0.25) return solve_bulk(prob);

  SolveOutcome base = solve_impl(coarse, {});
  if (base.sample.m0 == 0.0) {
    // Normal window: the zero field carries no vortex pattern worth
    // refining; a cold fine solve settles it directly.
    BulkSample out = solve_impl(prob, {}).sample;
    out.iterations += base.sample.iterations;
    return out;
  }

  std::vector<ComplexField> starts;
  starts.push_back(prolong(base.minimizer, bulk_grid(prob)));
  BulkSample out = solve_impl(prob, std::move(starts)).sample;
  out.iterations += base.sample.iterations;
  out.starts_used = base.sample.starts_used;
  out.restart_spread = base.sample.restart_spread;
  out.restart_disagreement = base.sample.restart_disagreement;
  return out;
}

GCurve g_curve(const std::vector<double>& b_grid, const BulkProblem& proto) {
  if (b_grid.empty())
    throw std::invalid_argument("g_curve: empty field grid");
  for (std::size_t i = 0; i < b_grid.size(); ++i) {
    if (!(b_grid[i] >= 0.0) || !(b_grid[i] <= 1.2))
      throw std::invalid_argument("g_curve: b = " +
                                  std::to_string(b_grid[i]) +
                                  " outside [0, 1.2]");
    if (i > 0 && !(b_grid[i] > b_grid[i - 1]))
      throw std::invalid_argument("g_curve: b grid must be strictly "
                                  "increasing");
  }
  GCurve curve;
  curve.samples.reserve(b_grid.size());
  BulkProblem p = proto;
  for (double b : b_grid) {
    p.b = b;
    curve.samples.push_back(solve_bulk(p));
  }
  for (std::size_t i = 1; i < curve.samples.size(); ++i) {
    const auto& lo = curve.samples[i - 1];
    const auto& hi = curve.samples[i];
    if (hi.g_estimate < lo.g_estimate - 1e-4)
      curve.warnings.push_back(
          "g decreases from b = " + std::to_string(lo.b) + " to b = " +
          std::to_string(hi.b) + " by " +
          std::to_string(lo.g_estimate - hi.g_estimate));
  }
  return curve;
}

E2Fit fit_E2(const std::vector<BulkSample>& samples) {
  if (samples.size() < 4)
    throw std::invalid_argument("fit_E2: need at least 4 samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double b = samples[i].b;
    if (!(b >= 0.85) || !(b <= 0.98))
      throw std::invalid_argument(
          "fit_E2: b = " + std::to_string(b) +
          " outside the fit window [0.85, 0.98]");
    if (i > 0 && !(b > samples[i - 1].b))
      throw std::invalid_argument("fit_E2: samples must increase in b");
  }

  E2Fit fit;
  fit.b_samples.reserve(samples.size());
  fit.g_over_square.reserve(samples.size());
  double sw = 0, swx = 0, swy = 0, swxx = 0, swxy = 0;
  for (const auto& s : samples) {
    const double x = 1.0 - s.b;
    const double y = s.g_estimate / (x * x);
    const double w = x * x;
    fit.b_samples.push_back(s.b);
    fit.g_over_square.push_back(y);
    sw += w;
    swx += w * x;
    swy += w * y;
    swxx += w * x * x;
    swxy += w * x * y;
  }
  const double det = sw * swxx - swx * swx;
  const double slope = (sw * swxy - swx * swy) / det;
  fit.E2 = (swy - slope * swx) / sw;

  double ss = 0.0;
  for (std::size_t i = 0; i < samples.size(); ++i) {
    const double x = 1.0 - samples[i].b;
    const double r = fit.g_over_square[i] - (fit.E2 + slope * x);
    ss += x * x * r * r;
  }
  fit.fit_residual = std::sqrt(ss / sw);

  if (!(fit.E2 >= -0.5) || !(fit.E2 < 0.0))
    throw std::runtime_error(
        "fit_E2: extrapolated E2 = " + std::to_string(fit.E2) +
        " leaves [-1/2, 0); refine the window before trusting it");
  if (fit.fit_residual > 0.05 * std::abs(fit.E2))
    throw std::runtime_error(
        "fit_E2: scatter " + std::to_string(fit.fit_residual) +
        " exceeds 5% of |E2| = " + std::to_string(std::abs(fit.E2)));
  return fit;
}

}  // namespace glsurf::bulk
