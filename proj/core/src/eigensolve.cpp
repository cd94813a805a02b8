#include "glsurf/eigensolve.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <vector>

#include "glsurf/parallel.hpp"

namespace glsurf {

namespace {

struct CgOutcome {
  bool spd_failure = false;
  int iterations = 0;
};

// PCG for (op - sigma) x = b in the weighted inner product, Jacobi
// preconditioner from the operator diagonal.  x enters as the initial guess.
CgOutcome cg_shifted(const LinearOperator& op, double sigma,
                     const std::vector<double>& diag, const ComplexField& b,
                     ComplexField& x, double rtol, int max_iter) {
  const Grid& g = op.grid();
  CgOutcome out;

  std::vector<double> prec(diag.size());
  for (std::size_t i = 0; i < diag.size(); ++i)
    prec[i] = 1.0 / std::max(std::abs(diag[i] - sigma), 1e-8);

  ComplexField r(g), z(g), p(g), q(g);
  op.apply(x, r);
  par::parallel_for(r.size(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t i = lo; i < hi; ++i) r[i] = b[i] - (r[i] - sigma * x[i]);
  });
  const double bnorm = norm(b);
  if (bnorm == 0.0) return out;

  auto precondition = [&](const ComplexField& src, ComplexField& dst) {
    par::parallel_for(src.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) dst[i] = prec[i] * src[i];
    });
  };

  precondition(r, z);
  p = z;
  double rz = dot_re(r, z);
  for (int it = 0; it < max_iter; ++it) {
    op.apply(p, q);
    par::parallel_for(q.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) q[i] -= sigma * p[i];
    });
    const double pq = dot_re(p, q);
    if (pq <= 0.0) {
      out.spd_failure = true;
      out.iterations = it;
      return out;
    }
    const double alpha = rz / pq;
    par::parallel_for(x.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) {
        x[i] += alpha * p[i];
        r[i] -= alpha * q[i];
      }
    });
    out.iterations = it + 1;
    if (norm(r) <= rtol * bnorm) break;
    precondition(r, z);
    const double rz_next = dot_re(r, z);
    const double beta = rz_next / rz;
    rz = rz_next;
    par::parallel_for(p.size(), [&](std::size_t lo, std::size_t hi) {
      for (std::size_t i = lo; i < hi; ++i) p[i] = z[i] + beta * p[i];
    });
  }
  return out;
}

// One-dimensional grids give tridiagonal operators; recover the three bands
// with a 3-coloring (each row sees exactly one basis column per color) and
// solve the shifted systems exactly instead of by CG.
struct Tridiag {
  std::vector<cd> lower, diag, upper;
};

Tridiag extract_tridiag(const LinearOperator& op) {
  const Grid& g = op.grid();
  const std::size_t n = g.node_count();
  Tridiag t;
  t.lower.assign(n, cd{0, 0});
  t.diag.assign(n, cd{0, 0});
  t.upper.assign(n, cd{0, 0});
  ComplexField u(g), au(g);
  for (int color = 0; color < 3; ++color) {
    u.fill(cd{0, 0});
    for (std::size_t i = color; i < n; i += 3)
      if (!g.on_dirichlet(i)) u[i] = cd{1, 0};
    op.apply(u, au);
    for (std::size_t i = 0; i < n; ++i) {
      for (long dj = -1; dj <= 1; ++dj) {
        const long j = static_cast<long>(i) + dj;
        if (j < 0 || j >= static_cast<long>(n)) continue;
        if (j % 3 != color) continue;
        (dj < 0 ? t.lower : dj > 0 ? t.upper : t.diag)[i] = au[i];
      }
    }
  }
  // keep Dirichlet rows trivially invertible
  for (std::size_t i = 0; i < n; ++i)
    if (g.on_dirichlet(i)) t.diag[i] = cd{1, 0};
  return t;
}

// Thomas solve of (T - sigma) x = b; returns false on a vanishing pivot.
bool tridiag_solve(const Tridiag& t, double sigma, const ComplexField& b,
                   ComplexField& x) {
  const std::size_t n = t.diag.size();
  std::vector<cd> c(n), d(n);
  cd piv = t.diag[0] - sigma;
  if (std::abs(piv) < 1e-300) return false;
  c[0] = t.upper[0] / piv;
  d[0] = b[0] / piv;
  for (std::size_t i = 1; i < n; ++i) {
    piv = (t.diag[i] - sigma) - t.lower[i] * c[i - 1];
    if (std::abs(piv) < 1e-300) return false;
    c[i] = t.upper[i] / piv;
    d[i] = (b[i] - t.lower[i] * d[i - 1]) / piv;
  }
  x[n - 1] = d[n - 1];
  for (std::size_t i = n - 1; i-- > 0;) x[i] = d[i] - c[i] * x[i + 1];
  x.zero_dirichlet();
  return true;
}

}  // namespace

EigenResult lowest_eigenpair(const LinearOperator& op,
                             const EigenOptions& opts) {
  const Grid& g = op.grid();
  const bool one_dim = g.dim() == 1;
  Tridiag tri;
  if (one_dim) tri = extract_tridiag(op);

  ComplexField v = (opts.start && opts.start->grid() == g)
                       ? *opts.start
                       : ComplexField::random(g, opts.seed, 1.0);
  v.zero_dirichlet();
  {
    const double n0 = norm(v);
    if (!(n0 > 0.0))
      throw EigenError("lowest_eigenpair: zero start vector on " +
                           g.describe(),
                       0.0, 0.0);
    v.scale(1.0 / n0);
  }

  std::vector<double> diag;
  if (!op.jacobi_diagonal(diag)) diag.assign(g.node_count(), 1.0);

  // Applying the operator loses ~eps * |diag| per node, so residuals below
  // that are numerical noise; fold the floor into the convergence test.
  double diag_max = 1.0;
  for (double d : diag) diag_max = std::max(diag_max, std::abs(d));
  const double res_floor =
      16.0 * std::numeric_limits<double>::epsilon() * diag_max;

  ComplexField av(g), x(g);
  op.apply(v, av);
  double rho = dot_re(v, av);
  auto residual_of = [&](const ComplexField& vec, const ComplexField& avec,
                         double r) {
    ComplexField res = avec;
    res.axpy(cd{-r, 0.0}, vec);
    return norm(res);
  };
  double res = residual_of(v, av, rho);
  auto converged = [&] {
    return res <= std::max(opts.tol * std::max(1.0, std::abs(rho)), res_floor);
  };
  auto pick_sigma = [&] {
    // Rayleigh-guided shift from below once in the basin; the margin keeps
    // (op - sigma) positive definite with high probability, and the SPD
    // safeguard in CG catches the rest.
    return res < 0.5 ? rho - std::max(2.0 * res, 1e-9)
                     : std::min(opts.sigma0, rho - 1.0);
  };

  double sigma = pick_sigma();
  long inner_total = 0;
  double best_res = res;
  int stall = 0;

  int outer = 0;
  for (; outer < opts.max_outer; ++outer) {
    if (converged()) break;

    x.fill(cd{0.0, 0.0});
    bool solve_failed = false;
    if (one_dim) {
      solve_failed = !tridiag_solve(tri, sigma, v, x);
      inner_total += 1;
    } else {
      CgOutcome cg = cg_shifted(op, sigma, diag, v, x, opts.inner_rtol,
                                opts.max_inner);
      inner_total += cg.iterations;
      solve_failed = cg.spd_failure;
    }
    if (solve_failed) {
      // shift landed inside the spectrum; back off and retry
      sigma -= 2.0 * std::max(rho - sigma, 0.1);
      continue;
    }
    const double xn = norm(x);
    if (!(xn > 0.0) || !x.finite())
      throw EigenError("lowest_eigenpair: inverse iteration produced a "
                       "non-finite iterate on " +
                           g.describe(),
                       rho, res);
    x.scale(1.0 / xn);
    v = x;
    op.apply(v, av);
    rho = dot_re(v, av);
    res = residual_of(v, av, rho);

    if (res < 0.9 * best_res) {
      best_res = res;
      stall = 0;
    } else if (++stall > 12) {
      throw EigenError(
          "lowest_eigenpair: stalled at residual " + std::to_string(res) +
              " (eigenvalue " + std::to_string(rho) + ") on " + g.describe(),
          rho, res);
    }

    sigma = pick_sigma();
  }

  if (!converged())
    throw EigenError("lowest_eigenpair: no convergence after " +
                         std::to_string(opts.max_outer) + " steps (residual " +
                         std::to_string(res) + ") on " + g.describe(),
                     rho, res);

  const double vn = norm(v);
  v.scale(1.0 / vn);
  op.apply(v, av);
  rho = dot_re(v, av);
  res = residual_of(v, av, rho);

  EigenResult out{rho, std::move(v), res, outer, inner_total};
  return out;
}

}  // namespace glsurf
