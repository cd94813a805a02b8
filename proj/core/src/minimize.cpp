#include "glsurf/minimize.hpp"

#include <algorithm>
#include <cmath>

#include "glsurf/parallel.hpp"

namespace glsurf {

MinimizeResult descend(const Functional& f, const ComplexField& init,
                       const MinimizeOptions& opts) {
  ComplexField u = init;
  u.zero_dirichlet();
  double energy = f.energy(u);
  if (!std::isfinite(energy))
    throw MinimizeError("descend: non-finite energy at start", 0, energy, 0.0);

  ComplexField g = f.gradient(u);
  double gn2 = dot_re(g, g);
  double alpha = opts.alpha_init;
  long it = 0;

  ComplexField trial(u.grid());
  for (; it < opts.max_iter && std::sqrt(gn2) > opts.grad_tol; ++it) {
    // Armijo backtracking from the BB step
    bool accepted = false;
    for (int bt = 0; bt < 60; ++bt) {
      trial = u;
      trial.axpy(cd{-alpha, 0.0}, g);
      const double etrial = f.energy(trial);
      if (std::isfinite(etrial) && etrial <= energy - 1e-4 * alpha * gn2) {
        accepted = true;
        energy = etrial;
        break;
      }
      alpha *= 0.5;
      if (alpha < opts.alpha_min) break;
    }
    if (!accepted)
      throw MinimizeError(
          "descend: line search failed at step " + std::to_string(it) +
              " (energy " + std::to_string(energy) + ")",
          it, energy, std::sqrt(gn2));

    ComplexField gnew = f.gradient(trial);
    if (!gnew.finite())
      throw MinimizeError("descend: non-finite gradient at step " +
                              std::to_string(it),
                          it, energy, std::sqrt(gn2));

    // BB1 step from s = trial - u = -alpha*g, y = gnew - g:
    //   <s,s>/<s,y> = alpha*gn2 / (gn2 - <g, gnew>)
    const double g_dot_gnew = dot_re(g, gnew);
    const double denom = gn2 - g_dot_gnew;
    double alpha_bb = (denom > 0.0) ? alpha * gn2 / denom : 2.0 * alpha;
    alpha = std::clamp(alpha_bb, opts.alpha_min * 10.0, opts.alpha_max);

    u = trial;
    g = gnew;
    gn2 = dot_re(g, g);
  }

  if (std::sqrt(gn2) > opts.grad_tol)
    throw MinimizeError("descend: no convergence after " +
                            std::to_string(opts.max_iter) + " steps",
                        it, energy, std::sqrt(gn2));

  MinimizeResult out{energy, std::move(u), std::sqrt(gn2), it, 1, 0.0, false};
  return out;
}

MinimizeResult minimize_energy(const Functional& f,
                               const std::vector<ComplexField>& starts,
                               const MinimizeOptions& opts) {
  if (starts.empty())
    throw std::invalid_argument("minimize_energy: no starts given");
  std::vector<double> energies;
  energies.reserve(starts.size());
  MinimizeResult best{0.0, ComplexField(f.grid()), 0.0, 0, 0, 0.0, false};
  bool have = false;
  long total_it = 0;
  for (const ComplexField& s : starts) {
    MinimizeResult r = descend(f, s, opts);
    total_it += r.iterations;
    energies.push_back(r.energy);
    if (!have || r.energy < best.energy) {
      best = std::move(r);
      have = true;
    }
  }
  const auto [lo, hi] = std::minmax_element(energies.begin(), energies.end());
  const double scale = std::max({std::abs(*lo), std::abs(*hi), 1e-8});
  best.restart_spread = (*hi - *lo) / scale;
  best.restart_disagreement = best.restart_spread > 0.01;
  best.starts_used = static_cast<int>(starts.size());
  best.iterations = total_it;
  return best;
}

MinimizeResult minimize_energy(const Functional& f, const ComplexField& init,
                               int restarts, double grad_tol) {
  MinimizeOptions opts;
  opts.grad_tol = grad_tol;
  std::vector<ComplexField> starts;
  starts.push_back(init);
  if (restarts > 1)
    starts.push_back(ComplexField::constant(f.grid(), cd{0.5, 0.0}));
  for (int k = 2; k < restarts; ++k)
    starts.push_back(
        ComplexField::random(f.grid(), opts.seed + static_cast<std::uint64_t>(k),
                             0.3));
  return minimize_energy(f, starts, opts);
}

}  // namespace glsurf
