#include "glsurf/halfline.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "glsurf/eigensolve.hpp"
#include "glsurf/gauge.hpp"
#include "glsurf/operators.hpp"

namespace glsurf::halfline {

namespace {

Grid make_grid(double xi, const GridSpec& spec) {
  double t_max = spec.t_max;
  if (t_max <= 0.0) {
    t_max = std::max(12.0, xi + 8.0);
  } else if (t_max < xi + 8.0) {
    throw std::invalid_argument(
        "halfline: truncation t_max=" + std::to_string(t_max) +
        " too short for xi=" + std::to_string(xi) + "; need at least " +
        std::to_string(xi + 8.0));
  }
  const int n = std::max(4, static_cast<int>(std::lround(t_max / spec.h)));
  return Grid({{0.0, t_max, n, Bc::Neumann, Bc::Dirichlet}});
}

EigenResult solve(double xi, const GridSpec& spec,
                  const ComplexField* warm = nullptr) {
  Grid g = make_grid(xi, spec);
  SchrodingerOp op = SchrodingerOp::with_potential(
      LinkGauge::none(g), [xi](const std::array<double, 3>& x) {
        const double d = x[0] - xi;
        return d * d;
      });
  EigenOptions eo;
  eo.tol = spec.eig_tol;
  eo.seed = spec.seed;
  eo.start = warm;
  return lowest_eigenpair(op, eo);
}

double wall_mass_of(const ComplexField& v) {
  const Grid& g = v.grid();
  const int n = g.axis(0).n;
  double m = 0.0;
  for (int i = std::max(0, n - 3); i <= n; ++i)
    m += g.weight(g.index(i)) * std::norm(v[g.index(i)]);
  return m;
}

Mu1Result check_and_pack(double xi, const GridSpec& spec,
                         const EigenResult& r) {
  const double wall = wall_mass_of(r.eigenvector);
  if (wall > 1e-8)
    throw std::runtime_error(
        "halfline: state touches the far wall (mass " + std::to_string(wall) +
        ") at xi=" + std::to_string(xi) + "; increase t_max to about " +
        std::to_string(std::max(12.0, xi + 8.0) + 6.0));
  (void)spec;
  return Mu1Result{r.eigenvalue, xi, r.residual, wall};
}

}  // namespace

Mu1Result mu1(double xi, const GridSpec& spec) {
  return check_and_pack(xi, spec, solve(xi, spec));
}

Theta0Result find_theta0(const GridSpec& spec, double xi_tol) {
  GridSpec s = spec;
  if (s.t_max <= 0.0) s.t_max = 12.0;  // shared grid lets warm starts carry

  Theta0Result out;
  ComplexField warm(make_grid(0.0, s));
  bool have_warm = false;

  // The Rayleigh quotient is quadratically accurate in the residual, so the
  // scan and line search can run at a loose solver tolerance; only the final
  // evaluations use the requested one.
  GridSpec loose = s;
  loose.eig_tol = std::max(1e-7, s.eig_tol);

  auto eval_with = [&](double xi, const GridSpec& sp) {
    EigenResult r = solve(xi, sp, have_warm ? &warm : nullptr);
    warm = r.eigenvector;
    have_warm = true;
    out.residual = r.residual;
    return check_and_pack(xi, sp, r).mu1;
  };
  auto eval = [&](double xi) { return eval_with(xi, loose); };

  // coarse scan over the search interval
  const double lo = 0.0, hi = 2.0;
  const int npts = 21;
  out.scan.reserve(npts);
  for (int i = 0; i < npts; ++i) {
    const double xi = lo + (hi - lo) * i / (npts - 1);
    out.scan.emplace_back(xi, eval(xi));
  }
  int minima = 0, arg = 0;
  for (int i = 1; i + 1 < npts; ++i) {
    if (out.scan[i].second < out.scan[i - 1].second &&
        out.scan[i].second < out.scan[i + 1].second) {
      ++minima;
      arg = i;
    }
  }
  if (minima != 1) {
    std::string dump;
    for (const auto& [x, m] : out.scan)
      dump += "\n  xi=" + std::to_string(x) + " mu1=" + std::to_string(m);
    throw std::runtime_error(
        "find_theta0: scan found " + std::to_string(minima) +
        " interior minima, expected exactly 1; scan:" + dump);
  }

  // golden-section search inside the bracketing scan cells
  const double gr = (std::sqrt(5.0) - 1.0) / 2.0;
  double a = out.scan[arg - 1].first, b = out.scan[arg + 1].first;
  double x1 = b - gr * (b - a), x2 = a + gr * (b - a);
  double f1 = eval(x1), f2 = eval(x2);
  while (b - a > xi_tol) {
    if (f1 < f2) {
      b = x2;
      x2 = x1;
      f2 = f1;
      x1 = b - gr * (b - a);
      f1 = eval(x1);
    } else {
      a = x1;
      x1 = x2;
      f1 = f2;
      x2 = a + gr * (b - a);
      f2 = eval(x2);
    }
  }
  double xi_best = 0.5 * (a + b);

  // parabolic refinement through three nearby samples
  const double d = std::max(2e-4, xi_tol);
  const double fm = eval_with(xi_best - d, s), f0 = eval_with(xi_best, s),
               fp = eval_with(xi_best + d, s);
  const double denom = fm - 2.0 * f0 + fp;
  if (denom > 0.0) {
    const double shift = 0.5 * d * (fm - fp) / denom;
    if (std::abs(shift) < d) xi_best += shift;
  }

  out.xi0 = xi_best;
  out.theta0 = eval_with(xi_best, s);
  if (!(out.theta0 > 0.5 && out.theta0 < 1.0))
    throw std::runtime_error("find_theta0: minimum " +
                             std::to_string(out.theta0) +
                             " escaped the expected window (0.5, 1)");
  return out;
}

GroundState ground_state(double xi, const GridSpec& spec) {
  if (xi < 0.0) xi = find_theta0(spec).xi0;
  EigenResult r = solve(xi, spec);
  check_and_pack(xi, spec, r);

  // rotate the global phase away and enforce a nonnegative profile
  ComplexField& v = r.eigenvector;
  std::size_t peak = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < v.size(); ++i)
    if (std::abs(v[i]) > best) {
      best = std::abs(v[i]);
      peak = i;
    }
  const cd rot = std::conj(v[peak]) / std::abs(v[peak]);
  double imag_resid = 0.0;
  for (std::size_t i = 0; i < v.size(); ++i) {
    const cd z = rot * v[i];
    imag_resid = std::max(imag_resid, std::abs(z.imag()));
    v[i] = cd{z.real(), 0.0};
  }
  if (imag_resid > 1e-7)
    throw std::runtime_error(
        "halfline: ground state not real up to a phase (residual " +
        std::to_string(imag_resid) + ")");
  if (v[0].real() < 0.0) v.scale(-1.0);
  v.scale(1.0 / norm(v));
  return GroundState{std::move(v), r.eigenvalue, xi};
}

}  // namespace glsurf::halfline
