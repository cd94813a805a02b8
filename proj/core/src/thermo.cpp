#include "glsurf/thermo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>
#include <string>

namespace glsurf::thermo {

namespace {

constexpr double kHalfPi = std::numbers::pi / 2.0;
constexpr double kZeroTol = 1e-4;   // |E| below this counts as a zero entry
constexpr double kShapeSlack = 1e-4;

double decay_x(double ell) { return std::pow(ell, -2.0 / 3.0); }

// Least-squares intercept/slope of f = A + c * x over samples[i0..].
struct LineFit {
  double A;
  double c;
};
LineFit fit_tail(const std::vector<DensitySample>& s, std::size_t i0) {
  const double n = static_cast<double>(s.size() - i0);
  double sx = 0.0, sy = 0.0, sxx = 0.0, sxy = 0.0;
  for (std::size_t i = i0; i < s.size(); ++i) {
    const double x = decay_x(s[i].ell), y = s[i].f;
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double det = n * sxx - sx * sx;
  const double c = (n * sxy - sx * sy) / det;
  return {(sy - c * sx) / n, c};
}

// Re-fit the decay exponent from three spread samples: solve
//   (f1-f2)/(f2-f3) = (l1^-p - l2^-p)/(l2^-p - l3^-p)
// for p by bisection.  Returns NaN when the data cannot identify one.
double refit_exponent(const std::vector<DensitySample>& s) {
  const DensitySample &a = s.front(), &b = s[s.size() / 2],
                      &c = s.back();
  const double den = b.f - c.f;
  if (den == 0.0) return std::numeric_limits<double>::quiet_NaN();
  const double r = (a.f - b.f) / den;
  const auto model = [&](double p) {
    return (std::pow(a.ell, -p) - std::pow(b.ell, -p)) /
           (std::pow(b.ell, -p) - std::pow(c.ell, -p));
  };
  double lo = 0.05, hi = 4.0;
  double flo = model(lo) - r, fhi = model(hi) - r;
  if (!std::isfinite(flo) || !std::isfinite(fhi) || flo * fhi > 0.0)
    return std::numeric_limits<double>::quiet_NaN();
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    const double fm = model(mid) - r;
    if (fm == 0.0) return mid;
    if (flo * fm <= 0.0) {
      hi = mid;
    } else {
      lo = mid;
      flo = fm;
    }
  }
  return 0.5 * (lo + hi);
}

void check_sorted_range(const std::vector<double>& v, const char* what,
                        double lo, double hi, bool lo_open) {
  if (v.empty())
    throw std::invalid_argument(std::string("energy table: empty ") + what +
                                " grid");
  for (std::size_t i = 0; i < v.size(); ++i) {
    const bool below = lo_open ? !(v[i] > lo) : !(v[i] >= lo);
    if (below || !(v[i] <= hi))
      throw std::invalid_argument(std::string("energy table: ") + what + " = " +
                                  std::to_string(v[i]) + " out of range");
    if (i > 0 && !(v[i] > v[i - 1]))
      throw std::invalid_argument(std::string("energy table: ") + what +
                                  " grid must be strictly increasing");
  }
}

std::string at_entry(double b, double nu) {
  return "at (b = " + std::to_string(b) + ", nu = " + std::to_string(nu) + ")";
}

}  // namespace

SideDensity side_density(double ell, double d) {
  if (!(ell > 0.0))
    throw std::invalid_argument("side_density: ell must be positive");
  const double L = 2.0 * ell;
  return {L, d / (L * L)};
}

ExtrapolationFit extrapolate(const std::vector<DensitySample>& samples) {
  if (samples.size() < 3)
    throw std::invalid_argument(
        "extrapolate: need at least 3 density samples");
  for (std::size_t i = 0; i < samples.size(); ++i) {
    if (!(samples[i].ell > 0.0) || !std::isfinite(samples[i].f))
      throw std::invalid_argument("extrapolate: malformed sample");
    if (i > 0 && !(samples[i].ell > samples[i - 1].ell))
      throw std::invalid_argument(
          "extrapolate: cell sizes must be strictly increasing");
  }

  const LineFit all = fit_tail(samples, 0);
  // largest-ell half: ceil(n/2) samples
  const std::size_t half_start = samples.size() - (samples.size() + 1) / 2;
  const LineFit tail = fit_tail(samples, half_start);

  double min_f = samples.front().f;
  for (const auto& s : samples) min_f = std::min(min_f, s.f);
  if (min_f < all.A - kShapeSlack)
    throw std::runtime_error(
        "extrapolate: sample density " + std::to_string(min_f) +
        " dips below the fitted limit " + std::to_string(all.A) +
        "; finite cells bound their limit from above");

  ExtrapolationFit fit;
  fit.ell_samples.reserve(samples.size());
  fit.f_values.reserve(samples.size());
  for (const auto& s : samples) {
    fit.ell_samples.push_back(s.ell);
    fit.f_values.push_back(s.f);
  }
  fit.A = std::min(all.A, min_f);
  double cenv = 0.0;
  for (const auto& s : samples)
    cenv = std::max(cenv, (s.f - fit.A) / decay_x(s.ell));
  fit.C_env = cenv;
  fit.window_stability = std::abs(all.A - tail.A);
  fit.exponent_estimate = refit_exponent(samples);
  return fit;
}

double extrapolation_gain(const std::vector<double>& ells) {
  if (ells.size() < 2)
    throw std::invalid_argument(
        "extrapolation_gain: need at least 2 cell sizes");
  const double n = static_cast<double>(ells.size());
  double sx = 0.0, sxx = 0.0;
  for (double ell : ells) {
    const double x = decay_x(ell);
    sx += x;
    sxx += x * x;
  }
  const double xbar = sx / n;
  const double sdev = sxx - n * xbar * xbar;
  double gain = 0.0;
  for (double ell : ells)
    gain += std::abs(1.0 / n - xbar * (decay_x(ell) - xbar) / sdev);
  return gain;
}

EnergyResult E_of(double b, double nu, const halfplane::SpectralCurve& curve,
                  const std::vector<double>& ells,
                  const cell::CellProblem& proto) {
  if (!(b > 0.0) || !(b <= 1.0))
    throw std::invalid_argument("E_of: b must lie in (0, 1]");
  if (!(nu >= 0.0) || !(nu <= kHalfPi))
    throw std::invalid_argument("E_of: nu must lie in [0, pi/2]");
  if (b <= curve.zeta_at(nu)) return {0.0, "analytic-zero", {}};

  if (ells.size() < 3)
    throw std::invalid_argument(
        "E_of: need at least 3 cell sizes to extrapolate");
  cell::CellProblem p = proto;
  p.b = b;
  p.nu = nu;
  p.ell = ells.front();
  const cell::TrialContext ctx = cell::make_trial_context(p);
  std::vector<DensitySample> samples;
  samples.reserve(ells.size());
  for (double ell : ells) {
    p.ell = ell;
    const cell::CellSolution sol = cell::solve_cell(p, ctx);
    samples.push_back({ell, side_density(ell, sol.d_value).g});
  }
  ExtrapolationFit fit = extrapolate(samples);
  return {fit.A, "extrapolated", std::move(fit)};
}

void audit_table(const EnergyTable& t) {
  const std::size_t nb = t.b_grid.size(), nn = t.nu_grid.size();
  if (t.E.size() != nn || t.provenance.size() != nn)
    throw std::invalid_argument("audit_table: row count mismatch");
  for (std::size_t j = 0; j < nn; ++j)
    if (t.E[j].size() != nb || t.provenance[j].size() != nb)
      throw std::invalid_argument("audit_table: column count mismatch");

  double db = 0.0;
  for (std::size_t i = 1; i < nb; ++i)
    db = std::max(db, t.b_grid[i] - t.b_grid[i - 1]);
  const double lip =
      (t.t1 > 0.0 && t.ells.size() >= 2)
          ? t.t1 * extrapolation_gain(t.ells)
          : 0.0;

  for (std::size_t j = 0; j < nn; ++j) {
    const double nu = t.nu_grid[j];
    const double z = t.zeta_curve.zeta_at(nu);
    const bool tangent_row = std::abs(nu - kHalfPi) < 1e-12;
    for (std::size_t i = 0; i < nb; ++i) {
      const double b = t.b_grid[i], E = t.E[j][i];
      if (E > 0.0)
        throw std::runtime_error("audit_table: positive energy " +
                                 std::to_string(E) + " " + at_entry(b, nu));
      if (tangent_row && E != 0.0)
        throw std::runtime_error(
            "audit_table: tangent-edge row must vanish, got " +
            std::to_string(E) + " " + at_entry(b, nu));
      if (nb > 1) {
        if (std::abs(E) <= kZeroTol && b - z > db + 1e-9)
          throw std::runtime_error(
              "audit_table: zero entry more than one grid cell above the "
              "spectral curve " +
              at_entry(b, nu));
        if (E < -kZeroTol && z - b > db + 1e-9)
          throw std::runtime_error(
              "audit_table: negative entry more than one grid cell below "
              "the spectral curve " +
              at_entry(b, nu));
      }
      if (i > 0) {
        const double prev = t.E[j][i - 1];
        if (E > prev + kShapeSlack)
          throw std::runtime_error("audit_table: row increases in b " +
                                   at_entry(b, nu));
        const double step = t.b_grid[i] - t.b_grid[i - 1];
        if (lip > 0.0 && std::abs(E - prev) > lip * step + 2e-4)
          throw std::runtime_error(
              "audit_table: jump " + std::to_string(std::abs(E - prev)) +
              " exceeds the Lipschitz bound " +
              std::to_string(lip * step) + " " + at_entry(b, nu));
      }
    }
  }
}

EnergyTable build_energy_table(const std::vector<double>& b_grid,
                               const std::vector<double>& nu_grid,
                               const halfplane::SpectralCurve& curve,
                               const std::vector<double>& ells,
                               const cell::CellProblem& proto) {
  check_sorted_range(b_grid, "b", 0.0, 1.0, /*lo_open=*/true);
  check_sorted_range(nu_grid, "nu", 0.0, kHalfPi, /*lo_open=*/false);

  EnergyTable t{b_grid, nu_grid, {}, {}, curve, ells, proto.h, proto.t1};
  t.E.reserve(nu_grid.size());
  t.provenance.reserve(nu_grid.size());
  for (double nu : nu_grid) {
    std::vector<double> row;
    std::vector<std::string> prow;
    row.reserve(b_grid.size());
    prow.reserve(b_grid.size());
    for (double b : b_grid) {
      EnergyResult r = E_of(b, nu, curve, ells, proto);
      row.push_back(r.E);
      prow.push_back(std::move(r.provenance));
    }
    t.E.push_back(std::move(row));
    t.provenance.push_back(std::move(prow));
  }
  audit_table(t);
  return t;
}

nlohmann::json to_json(const EnergyTable& t) {
  nlohmann::json j;
  j["b"] = t.b_grid;
  j["nu"] = t.nu_grid;
  j["E"] = t.E;
  j["provenance"] = t.provenance;
  j["zeta"] = {{"nu", t.zeta_curve.nus()}, {"zeta", t.zeta_curve.zetas()}};
  j["meta"] = {{"theta0", t.zeta_curve.theta0_ref()},
               {"ells", t.ells},
               {"grid", {{"h", t.h}, {"t1", t.t1}, {"layout", "E[nu][b]"}}}};
  return j;
}

}  // namespace glsurf::thermo
