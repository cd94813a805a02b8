#include "glsurf/gl_functional.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "glsurf/parallel.hpp"

namespace glsurf {

GLFunctional::GLFunctional(SchrodingerOp kinetic, double kinetic_coeff,
                           double mass_coeff, double quartic_coeff)
    : kinetic_(std::move(kinetic)), kc_(kinetic_coeff), mc_(mass_coeff),
      qc_(quartic_coeff) {}

double GLFunctional::energy(const ComplexField& u) const {
  return kc_ * kinetic_.quadratic_form(u) + mc_ * norm2(u) + qc_ * power4(u);
}

ComplexField GLFunctional::gradient(const ComplexField& u) const {
  ComplexField g(grid());
  kinetic_.apply(u, g);
  const double kc = kc_, mc = mc_, qc = qc_;
  par::parallel_for(g.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      g[i] = 2.0 * (kc * g[i] + mc * u[i] + 2.0 * qc * std::norm(u[i]) * u[i]);
  });
  return g;
}

namespace {

struct QuarticSums {
  double q1 = 0, q2 = 0, q3 = 0, q4 = 0;
};

// Pointwise sums for |u - alpha g|^4 = (A + B*alpha + C*alpha^2)^2 with
// A=|u|^2, B=-2Re(conj(u) g), C=|g|^2; chunk-deterministic like chunked_sum.
QuarticSums quartic_sums(const ComplexField& u, const ComplexField& g) {
  const std::vector<double>& w = u.grid().weights();
  const std::size_t n = u.size();
  const std::size_t nchunks = (n + par::kChunk - 1) / par::kChunk;
  std::vector<QuarticSums> partial(nchunks);
  par::parallel_for(n, [&](std::size_t lo, std::size_t hi) {
    QuarticSums acc;
    for (std::size_t i = lo; i < hi; ++i) {
      const cd ui = u[i], gi = g[i];
      const double a = std::norm(ui);
      const double b = -2.0 * (ui.real() * gi.real() + ui.imag() * gi.imag());
      const double c = std::norm(gi);
      const double wi = w[i];
      acc.q1 += wi * 2.0 * a * b;
      acc.q2 += wi * (b * b + 2.0 * a * c);
      acc.q3 += wi * 2.0 * b * c;
      acc.q4 += wi * c * c;
    }
    partial[lo / par::kChunk] = acc;
  });
  QuarticSums total;
  for (const QuarticSums& p : partial) {
    total.q1 += p.q1;
    total.q2 += p.q2;
    total.q3 += p.q3;
    total.q4 += p.q4;
  }
  return total;
}

struct LinePoly {
  // E(alpha) = c0 + c1 a + c2 a^2 + c3 a^3 + c4 a^4
  double c0, c1, c2, c3, c4;
  double at(double a) const {
    return c0 + a * (c1 + a * (c2 + a * (c3 + a * c4)));
  }
  double deriv(double a) const {
    return c1 + a * (2 * c2 + a * (3 * c3 + a * 4 * c4));
  }
};

// Positive minimizer of the quartic; requires c1 < 0 (descent direction).
double argmin_positive(const LinePoly& p) {
  double hi = 1.0;
  int guard = 0;
  while (p.deriv(hi) < 0.0 && guard++ < 200) hi *= 2.0;
  double lo = 0.0;
  for (int i = 0; i < 96; ++i) {
    const double mid = 0.5 * (lo + hi);
    (p.deriv(mid) < 0.0 ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

struct StartOutcome {
  double energy;
  ComplexField u;
  double grad_norm;
  long iterations;
};

StartOutcome run_start(const GLFunctional& f, const ComplexField& start,
                       const GLMinimizeOptions& opts) {
  const SchrodingerOp& K = f.kinetic_op();
  const double kc = f.kinetic_coeff(), mc = f.mass_coeff(),
               qc = f.quartic_coeff();
  const Grid& g = f.grid();
  const std::vector<double>& w = g.weights();

  ComplexField u = start;
  u.zero_dirichlet();
  ComplexField Ku(g), grad(g), Kg(g);
  K.apply(u, Ku);
  double kuu = dot_re(u, Ku);
  double muu = norm2(u);
  double q0 = power4(u);
  double energy = kc * kuu + mc * muu + qc * q0;

  double alpha_prev = 0.0, gn2_prev = 0.0;
  ComplexField grad_prev(g);
  long it = 0;
  int since_refresh = 0;

  for (; it < opts.max_iter; ++it) {
    par::parallel_for(g.node_count(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i)
        grad[i] = 2.0 * (kc * Ku[i] + mc * u[i] +
                         2.0 * qc * std::norm(u[i]) * u[i]);
    });
    const double gn2 = dot_re(grad, grad);
    if (!std::isfinite(gn2))
      throw MinimizeError("minimize_gl: non-finite gradient at step " +
                              std::to_string(it),
                          it, energy, 0.0);
    if (std::sqrt(gn2) <= opts.grad_tol) break;

    K.apply(grad, Kg);
    const double kug = dot_re(grad, Ku);
    const double kgg = dot_re(grad, Kg);
    const double mug = dot_re(u, grad);
    const QuarticSums qs = quartic_sums(u, grad);

    LinePoly poly{energy,
                  -2.0 * (kc * kug + mc * mug) + qc * qs.q1,
                  kc * kgg + mc * gn2 + qc * qs.q2,
                  qc * qs.q3,
                  qc * qs.q4};

    // BB1 length from the previous step; fall back to the exact line min.
    double alpha = -1.0;
    if (alpha_prev > 0.0) {
      const double denom = gn2_prev - dot_re(grad_prev, grad);
      if (denom > 0.0) {
        const double bb = alpha_prev * gn2_prev / denom;
        if (bb > 0.0 && std::isfinite(bb) &&
            poly.at(bb) <= energy - 1e-4 * bb * gn2)
          alpha = bb;
      }
    }
    if (alpha <= 0.0) alpha = argmin_positive(poly);
    if (!(alpha > 0.0) || !std::isfinite(alpha))
      throw MinimizeError("minimize_gl: degenerate step at iteration " +
                              std::to_string(it),
                          it, energy, std::sqrt(gn2));

    grad_prev = grad;
    gn2_prev = gn2;
    alpha_prev = alpha;

    par::parallel_for(g.node_count(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        u[i] -= alpha * grad[i];
        Ku[i] -= alpha * Kg[i];
      }
    });
    kuu += alpha * (-2.0 * kug + alpha * kgg);
    muu += alpha * (-2.0 * mug + alpha * gn2);
    q0 += alpha * (qs.q1 + alpha * (qs.q2 + alpha * (qs.q3 + alpha * qs.q4)));
    energy = kc * kuu + mc * muu + qc * q0;

    if (++since_refresh >= opts.refresh_every) {
      since_refresh = 0;
      K.apply(u, Ku);
      kuu = dot_re(u, Ku);
      muu = norm2(u);
      q0 = power4(u);
      energy = kc * kuu + mc * muu + qc * q0;
    }
  }
  (void)w;

  // exact values for the returned iterate
  K.apply(u, Ku);
  kuu = dot_re(u, Ku);
  muu = norm2(u);
  q0 = power4(u);
  energy = kc * kuu + mc * muu + qc * q0;
  par::parallel_for(g.node_count(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i)
      grad[i] = 2.0 * (kc * Ku[i] + mc * u[i] +
                       2.0 * qc * std::norm(u[i]) * u[i]);
  });
  const double gn = std::sqrt(dot_re(grad, grad));
  if (gn > opts.grad_tol * 4.0 && it >= opts.max_iter)
    throw MinimizeError("minimize_gl: no convergence after " +
                            std::to_string(opts.max_iter) + " steps (|g|=" +
                            std::to_string(gn) + ")",
                        it, energy, gn);
  return StartOutcome{energy, std::move(u), gn, it};
}

}  // namespace

MinimizeResult minimize_gl(const GLFunctional& f,
                           const std::vector<ComplexField>& starts,
                           const GLMinimizeOptions& opts) {
  if (starts.empty())
    throw std::invalid_argument("minimize_gl: no starts given");
  std::vector<double> energies;
  energies.reserve(starts.size());
  StartOutcome best{0.0, ComplexField(f.grid()), 0.0, 0};
  bool have = false;
  long total_it = 0;
  for (const ComplexField& s : starts) {
    StartOutcome r = run_start(f, s, opts);
    total_it += r.iterations;
    energies.push_back(r.energy);
    if (!have || r.energy < best.energy) {
      best = std::move(r);
      have = true;
    }
  }
  const auto [lo, hi] = std::minmax_element(energies.begin(), energies.end());
  const double scale = std::max({std::abs(*lo), std::abs(*hi), 1e-8});
  MinimizeResult out{best.energy,
                     std::move(best.u),
                     best.grad_norm,
                     total_it,
                     static_cast<int>(starts.size()),
                     (*hi - *lo) / scale,
                     (*hi - *lo) / scale > 0.01};
  return out;
}

}  // namespace glsurf
