#include "glsurf/cell.hpp"

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

#include "glsurf/gl_functional.hpp"
#include "glsurf/operators.hpp"
#include "glsurf/parallel.hpp"

namespace glsurf::cell {

namespace {

constexpr double kPi = std::numbers::pi;

// Ramp from 1 at w=0 to 0 at w=1.  Linear on purpose: it minimizes the ramp
// energy int |chi'|^2 over all profiles joining the plateau to zero, and at
// desk-scale cells (ell <= 8) the spectral margin ell^2 (b - zeta) feeding
// the negative main term is tight enough that smoother bumps (roughly 6.5
// for a C-infinity bridge, 5.7 for a quintic, against 4.0 here, both ramps
// combined) leave shallow tilted cells with no negative trial value at all.
// The energy only needs H^1, and the kinks land on grid nodes for every
// spacing used here, so the discrete ramp energy is exact.
double bridge(double w) { return 1.0 - w; }

// Bilinear probe of a real 2D field, zero outside its box.
double sample2(const ComplexField& phi, double x, double y) {
  const Grid& g = phi.grid();
  const AxisSpec& ax = g.axis(0);
  const AxisSpec& ay = g.axis(1);
  const double fx = (x - ax.lo) / g.h(0), fy = (y - ay.lo) / g.h(1);
  if (fx < 0.0 || fy < 0.0 || fx > ax.n || fy > ay.n) return 0.0;
  const int i0 = std::min(static_cast<int>(fx), ax.n - 1);
  const int j0 = std::min(static_cast<int>(fy), ay.n - 1);
  const double sx = fx - i0, sy = fy - j0;
  const auto v = [&](int i, int j) {
    return phi[g.index(i, j)].real();
  };
  return (1 - sx) * ((1 - sy) * v(i0, j0) + sy * v(i0, j0 + 1)) +
         sx * ((1 - sy) * v(i0 + 1, j0) + sy * v(i0 + 1, j0 + 1));
}

// Linear probe of a real 1D field, zero outside its interval.
double sample1(const ComplexField& phi, double x) {
  const Grid& g = phi.grid();
  const AxisSpec& ax = g.axis(0);
  const double fx = (x - ax.lo) / g.h(0);
  if (fx < 0.0 || fx > ax.n) return 0.0;
  const int i0 = std::min(static_cast<int>(fx), ax.n - 1);
  const double sx = fx - i0;
  return (1 - sx) * phi[g.index(i0)].real() + sx * phi[g.index(i0 + 1)].real();
}

GLFunctional cell_functional(const CellProblem& prob, LinkGauge links) {
  return GLFunctional(SchrodingerOp::kinetic(std::move(links)), 1.0, -prob.b,
                      prob.b / 2.0);
}

}  // namespace

void validate(const CellProblem& prob) {
  const auto fail = [](const std::string& what) {
    throw std::invalid_argument("cell: " + what);
  };
  if (!(prob.b > 0.0 && prob.b <= 1.0)) fail("b must lie in (0, 1]");
  if (!(prob.nu >= 0.0 && prob.nu <= kPi / 2))
    fail("nu must lie in [0, pi/2]");
  if (!(prob.ell > 0.0)) fail("ell must be positive");
  if (prob.ell > 8.0)
    fail("ell capped at 8 (grid budget); reach larger cells through the "
         "thermodynamic extrapolation instead");
  if (!(prob.t1 >= 4.0)) fail("t1 must be at least 4");
  if (!(prob.h > 0.0 && prob.h <= 0.25))
    fail("spacing h must resolve the magnetic length (h <= 1/4)");
  if (!(prob.grad_tol > 0.0)) fail("grad_tol must be positive");
  if (prob.random_starts < 0) fail("random_starts must be >= 0");
}

Grid cell_grid(const CellProblem& prob) {
  validate(prob);
  const int n1 = std::max(4, static_cast<int>(std::lround(prob.t1 / prob.h)));
  const int nk =
      std::max(4, static_cast<int>(std::lround(2.0 * prob.ell / prob.h)));
  return Grid({{0.0, prob.t1, n1, Bc::Neumann, Bc::Dirichlet},
               {-prob.ell, prob.ell, nk, Bc::Dirichlet, Bc::Dirichlet},
               {-prob.ell, prob.ell, nk, Bc::Dirichlet, Bc::Dirichlet}});
}

LinkGauge cell_links(const CellProblem& prob) {
  return build_links(cell_grid(prob), edge_potential(prob.nu), 1.0);
}

double cell_energy(const ComplexField& u, const CellProblem& prob) {
  const Grid g = cell_grid(prob);
  if (!(u.grid() == g))
    throw std::invalid_argument(
        "cell_energy: field lives on a different grid than the cell");
  for (std::size_t i = 0; i < g.node_count(); ++i)
    if (g.on_dirichlet(i) && u[i] != cd{0.0, 0.0})
      throw std::invalid_argument(
          "cell_energy: field violates the Dirichlet boundary tags");
  return cell_functional(prob, cell_links(prob)).energy(u);
}

double cutoff(double s) {
  const double a = std::abs(s);
  if (a <= 0.5) return 1.0;
  if (a >= 1.0) return 0.0;
  return bridge(2.0 * (a - 0.5));
}

double cutoff_mass() {
  // int cutoff^2 = 1 + 2 * int_{1/2}^{1} bridge^2, fixed quadrature once
  static const double lambda = [] {
    const int n = 4096;
    const double lo = 0.5, hi = 1.0, dh = (hi - lo) / n;
    double s = 0.0;
    for (int i = 0; i <= n; ++i) {
      const double c = cutoff(lo + i * dh);
      s += (i == 0 || i == n ? 0.5 : 1.0) * c * c;
    }
    return 1.0 + 2.0 * s * dh;
  }();
  return lambda;
}

TrialContext make_trial_context(const CellProblem& prob) {
  validate(prob);
  TrialContext ctx;
  if (prob.nu == 0.0) {
    auto gs = std::make_shared<halfline::GroundState>(halfline::ground_state());
    ctx.tangent_quartic = power4(gs->phi);
    ctx.zeta = gs->eigenvalue;
    ctx.tangent = std::move(gs);
  } else if (prob.nu < kPi / 2) {
    auto gs = std::make_shared<halfplane::GroundState>(
        halfplane::eigenfunction(prob.nu));
    ctx.tilted_quartic = power4(gs->phi);
    ctx.zeta = gs->sample.zeta;
    ctx.tilted = std::move(gs);
  } else {
    ctx.zeta = 1.0;  // tangent edge: no localized state, d = 0 for b <= 1
  }
  return ctx;
}

double proof_amplitude(double b, double zeta, double quartic) {
  if (!(b > zeta) || !(quartic > 0.0)) return 0.0;
  return std::sqrt((b - zeta) / (b * quartic));
}

int lattice_count(double ell, double M) {
  if (!(M > 0.0)) throw std::invalid_argument("lattice spacing M must be > 0");
  const double r = ell / M;
  int m = static_cast<int>(std::floor(r));
  if (m >= r) --m;  // strictly below r
  return 2 * std::max(m, 0) + 1;
}

ComplexField lattice_trial(const CellProblem& prob, const TrialContext& ctx,
                           double M, double t) {
  validate(prob);
  if (!(prob.nu > 0.0 && prob.nu < kPi / 2))
    throw std::invalid_argument(
        "lattice_trial: translated half-plane states exist only for "
        "0 < nu < pi/2");
  if (!ctx.tilted)
    throw std::invalid_argument(
        "lattice_trial: context carries no half-plane state");
  const halfplane::GroundState& gs = *ctx.tilted;
  if (gs.sample.t1 < prob.t1)
    throw std::invalid_argument(
        "lattice_trial: half-plane state truncated at x1=" +
        std::to_string(gs.sample.t1) + ", shallower than the cell depth " +
        std::to_string(prob.t1));
  const int count = lattice_count(prob.ell, M);
  const int m = (count - 1) / 2;
  const double sn = std::sin(prob.nu);

  // The wall pushes the half-plane state off the zero line of its potential,
  // so its x2 barycenter sits a few units negative.  Shift every copy by that
  // barycenter so copy j is centered at M*j; otherwise the whole comb hangs
  // off-center on the cutoff ramp at the cell sizes we can afford.  The
  // accompanying phase keeps each shifted copy energy-equivalent.
  const Grid& hg = gs.phi.grid();
  const double mass = par::chunked_sum(hg.node_count(), [&](std::size_t i) {
    return hg.weight(i) * std::norm(gs.phi[i]);
  });
  const double moment = par::chunked_sum(hg.node_count(), [&](std::size_t i) {
    return hg.weight(i) * hg.position(i)[1] * std::norm(gs.phi[i]);
  });
  const double xbar = moment / mass;

  const Grid g = cell_grid(prob);
  ComplexField u = ComplexField::zeros(g);
  par::parallel_for(g.node_count(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t idx = lo; idx < hi; ++idx) {
      if (g.on_dirichlet(idx)) continue;
      const auto p = g.position(idx);
      const double eta =
          cutoff(p[1] / prob.ell) * cutoff(p[2] / prob.ell);
      if (eta == 0.0) continue;
      cd sum{0.0, 0.0};
      for (int j = -m; j <= m; ++j) {
        const double c = M * j - xbar;
        const double amp = sample2(gs.phi, p[0], p[1] - c);
        if (amp != 0.0) sum += std::polar(amp, c * sn * p[2]);
      }
      u[idx] = t * eta * sum;
    }
  });
  if (!u.finite())
    throw std::runtime_error("lattice_trial: non-finite trial state");
  return u;
}

ComplexField tangent_trial(const CellProblem& prob, const TrialContext& ctx,
                           double t) {
  validate(prob);
  if (prob.nu != 0.0)
    throw std::invalid_argument(
        "tangent_trial: the x2-invariant sheet applies only at nu = 0");
  if (!ctx.tangent)
    throw std::invalid_argument(
        "tangent_trial: context carries no half-line profile");
  const halfline::GroundState& gs = *ctx.tangent;
  const AxisSpec& ax = gs.phi.grid().axis(0);
  if (ax.hi < prob.t1)
    throw std::invalid_argument(
        "tangent_trial: half-line profile truncated at x1=" +
        std::to_string(ax.hi) + ", shallower than the cell depth " +
        std::to_string(prob.t1));

  const Grid g = cell_grid(prob);
  ComplexField u = ComplexField::zeros(g);
  par::parallel_for(g.node_count(), [&](std::size_t lo, std::size_t hi) {
    for (std::size_t idx = lo; idx < hi; ++idx) {
      if (g.on_dirichlet(idx)) continue;
      const auto p = g.position(idx);
      const double eta = cutoff(p[1] / prob.ell) * cutoff(p[2] / prob.ell);
      if (eta == 0.0) continue;
      const double amp = sample1(gs.phi, p[0]);
      // the modulation exp(i xi0 x3) centers the fiber momentum at the well
      // minimum; without it the x3 kinetic term pays xi0^2 extra per unit
      u[idx] = t * eta * std::polar(amp, gs.xi * p[2]);
    }
  });
  if (!u.finite())
    throw std::runtime_error("tangent_trial: non-finite trial state");
  return u;
}

double trial_upper_bound_lattice(const CellProblem& prob,
                                 const TrialContext& ctx, double M, double t) {
  return cell_energy(lattice_trial(prob, ctx, M, t), prob);
}

double trial_upper_bound_tangent(const CellProblem& prob,
                                 const TrialContext& ctx, double t) {
  return cell_energy(tangent_trial(prob, ctx, t), prob);
}

CellSolution solve_cell(const CellProblem& prob) {
  return solve_cell(prob, make_trial_context(prob));
}

CellSolution solve_cell(const CellProblem& prob, const TrialContext& ctx) {
  validate(prob);
  const Grid g = cell_grid(prob);
  LinkGauge links = cell_links(prob);
  GLFunctional f = cell_functional(prob, links);

  std::vector<ComplexField> starts;
  ComplexField flat = ComplexField::constant(g, cd{0.5, 0.0});
  flat.zero_dirichlet();
  starts.push_back(std::move(flat));
  for (int k = 0; k < prob.random_starts; ++k)
    starts.push_back(ComplexField::random(g, prob.seed + k, 0.3));
  if (prob.nu == 0.0 && ctx.tangent) {
    const double t = proof_amplitude(prob.b, ctx.zeta, ctx.tangent_quartic);
    if (t > 0.0) starts.push_back(tangent_trial(prob, ctx, t));
  } else if (ctx.tilted) {
    const double t = proof_amplitude(prob.b, ctx.zeta, ctx.tilted_quartic);
    if (t > 0.0)
      starts.push_back(lattice_trial(prob, ctx, /*M=*/4.0, t));
  }

  GLMinimizeOptions opts;
  opts.grad_tol = prob.grad_tol;
  opts.max_iter = prob.max_iter;
  MinimizeResult res = minimize_gl(f, starts, opts);

  // the zero competitor beats whatever the descent stalled on
  const bool use_zero = res.energy > 0.0;
  CellSolution sol{use_zero ? 0.0 : res.energy,
                   use_zero ? ComplexField::zeros(g)
                            : std::move(res.minimizer)};
  sol.restart_spread = res.restart_spread;
  sol.restart_disagreement = res.restart_disagreement;
  sol.starts_used = res.starts_used;
  sol.iterations = res.iterations;
  sol.sup_norm = sup_norm(sol.minimizer);
  sol.l2_mass = norm2(sol.minimizer);
  const double quartic = power4(sol.minimizer);
  sol.virial_gap = std::abs(sol.d_value + (prob.b / 2.0) * quartic);

  const auto wfn = [](const std::array<double, 3>& x) {
    if (x[0] < 4.0) return 0.0;
    const double ln = std::log(x[0]);
    return x[0] / (ln * ln);
  };
  const double kin = kinetic_form_weighted(sol.minimizer, links, wfn);
  const double loc = par::chunked_sum(g.node_count(), [&](std::size_t idx) {
    const auto p = g.position(idx);
    const double w = wfn(p);
    if (w == 0.0) return 0.0;
    const double m2 = std::norm(sol.minimizer[idx]);
    return w * g.weight(idx) * (m2 + p[0] * p[0] * m2 * m2);
  });
  sol.decay_weighted_integral = kin + loc;
  return sol;
}

Subadditivity subadditivity_check(const CellProblem& base, int n) {
  if (n != 2 && n != 3)
    throw std::invalid_argument("subadditivity_check: n must be 2 or 3");
  CellProblem big = base;
  big.ell = n * base.ell;
  validate(big);  // fails loudly when n*ell escapes the grid budget
  const TrialContext ctx = make_trial_context(base);
  Subadditivity out;
  out.lhs = solve_cell(big, ctx).d_value;
  out.rhs = n * n * solve_cell(base, ctx).d_value;
  return out;
}

}  // namespace glsurf::cell
