#include "glsurf/halfplane.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "glsurf/eigensolve.hpp"
#include "glsurf/gauge.hpp"
#include "glsurf/halfline.hpp"
#include "glsurf/interp.hpp"
#include "glsurf/operators.hpp"

namespace glsurf::halfplane {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kEdgeGap = 0.05;  // "essential edge" proximity threshold

struct Boxes {
  double t1, t2_lo, t2_hi;
  bool capped;
};

// Box sizes from the expected Agmon decay (radial rate ~ sqrt(gap)) cut down
// by the classical turning strip |cos(nu) x1 + sin(nu) x2| <~ 1.6 plus a
// tunneling margin; the strip matters near nu = pi/2 where the radial scale
// explodes but the state stays pinned to a thin diagonal band.
Boxes make_boxes(double nu, double gap_est, const GridSpec& spec) {
  const double t_rad = spec.box_factor / std::sqrt(std::max(gap_est, 1e-4));
  Boxes b;
  b.capped = t_rad > spec.t_cap;
  b.t1 = std::clamp(t_rad, spec.t1_min, spec.t_cap);
  const double sn = std::max(std::sin(nu), 0.08);
  const double strip_lo = (1.6 + std::cos(nu) * b.t1) / sn + 8.0;
  const double strip_hi = 1.6 / sn + 8.0;
  b.t2_lo = std::clamp(std::min(t_rad, strip_lo), spec.t2_min, spec.t_cap);
  b.t2_hi = std::clamp(std::min(t_rad, strip_hi), spec.t2_min, spec.t_cap);
  return b;
}

Grid tilted_grid(const Boxes& b, double h) {
  const int n1 = std::max(4, static_cast<int>(std::lround(b.t1 / h)));
  const int n2 = std::max(
      4, static_cast<int>(std::lround((b.t2_lo + b.t2_hi) / h)));
  return Grid({{0.0, b.t1, n1, Bc::Neumann, Bc::Dirichlet},
               {-b.t2_lo, b.t2_hi, n2, Bc::Dirichlet, Bc::Dirichlet}});
}

Grid tangent_grid(double t1, double t3, double h) {
  const int n1 = std::max(4, static_cast<int>(std::lround(t1 / h)));
  const int n3 = std::max(4, static_cast<int>(std::lround(2.0 * t3 / h)));
  return Grid({{0.0, t1, n1, Bc::Neumann, Bc::Dirichlet},
               {-t3, t3, n3, Bc::Dirichlet, Bc::Dirichlet}});
}

SchrodingerOp make_operator(double nu, const Grid& g) {
  if (nu == 0.0) {
    // magnetic fiber in the (x1, x3) plane, gauge A = (0, x1)
    LinkGauge lg = build_links(
        g,
        [](const std::array<double, 3>& x) {
          return std::array<double, 3>{0.0, x[0], 0.0};
        },
        1.0);
    return SchrodingerOp::kinetic(std::move(lg));
  }
  const double c = std::cos(nu), s = std::sin(nu);
  return SchrodingerOp::with_potential(
      LinkGauge::none(g), [c, s](const std::array<double, 3>& x) {
        const double v = c * x[0] + s * x[1];
        return v * v;
      });
}

EigenResult solve_on(double nu, const Grid& g, double tol, std::uint64_t seed,
                     const ComplexField* warm) {
  SchrodingerOp op = make_operator(nu, g);
  EigenOptions eo;
  eo.tol = tol;
  eo.seed = seed;
  eo.max_outer = 400;
  eo.start = warm;
  return lowest_eigenpair(op, eo);
}

// |v|^2 mass in the three node layers hugging each far wall, split by axis
// so truncation errors can name the direction that needs more room.
struct WallMass {
  double x1 = 0.0, x2 = 0.0;
  double total() const { return x1 + x2; }
};

WallMass wall_mass_by_axis(const ComplexField& v, bool include_axis2) {
  const Grid& g = v.grid();
  const int n0 = g.axis(0).n, n1 = g.axis(1).n;
  WallMass m;
  for (std::size_t idx = 0; idx < g.node_count(); ++idx) {
    const auto c = g.unpack(idx);
    const double w = g.weight(idx) * std::norm(v[idx]);
    if (c[0] >= n0 - 2) m.x1 += w;
    if (include_axis2 && (c[1] <= 2 || c[1] >= n1 - 2)) m.x2 += w;
  }
  return m;
}

double wall_mass(const ComplexField& v, bool include_axis2) {
  return wall_mass_by_axis(v, include_axis2).total();
}

}  // namespace

ComplexField resample(const ComplexField& src, const Grid& dst) {
  const Grid& sg = src.grid();
  if (sg.dim() != 2 || dst.dim() != 2)
    throw std::invalid_argument("resample: expects 2D grids");
  ComplexField out(dst);
  for (std::size_t idx = 0; idx < dst.node_count(); ++idx) {
    if (dst.on_dirichlet(idx)) continue;
    const auto p = dst.position(idx);
    double fi = (p[0] - sg.axis(0).lo) / sg.h(0);
    double fj = (p[1] - sg.axis(1).lo) / sg.h(1);
    if (fi < 0.0 || fj < 0.0 || fi > sg.axis(0).n || fj > sg.axis(1).n)
      continue;  // outside the source box: leave zero
    const int i0 = std::min(static_cast<int>(fi), sg.axis(0).n - 1);
    const int j0 = std::min(static_cast<int>(fj), sg.axis(1).n - 1);
    const double a = fi - i0, b = fj - j0;
    out[idx] = (1 - a) * (1 - b) * src[sg.index(i0, j0)] +
               a * (1 - b) * src[sg.index(i0 + 1, j0)] +
               (1 - a) * b * src[sg.index(i0, j0 + 1)] +
               a * b * src[sg.index(i0 + 1, j0 + 1)];
  }
  return out;
}

namespace {

struct LevelSolves {
  EigenResult coarse;
  EigenResult fine;    // == coarse when refinement disabled
  bool refined;
  Boxes boxes;
};

LevelSolves solve_levels(double nu, const GridSpec& spec) {
  if (!(nu >= 0.0 && nu <= kPi / 2 + 1e-12))
    throw std::invalid_argument("halfplane: nu must lie in [0, pi/2]");

  // cheap bootstrap for the gap scale unless the caller knows it
  double gap_est = spec.gap_hint;
  if (gap_est <= 0.0) {
    const Grid bg = (nu == 0.0) ? tangent_grid(16.0, 16.0, 0.5)
                                : tilted_grid({16.0, 16.0, 16.0, false}, 0.5);
    EigenResult boot = solve_on(nu, bg, 1e-5, spec.seed, nullptr);
    gap_est = std::max(1.0 - boot.eigenvalue, 1e-4);
  }

  Boxes boxes = make_boxes(nu, gap_est, spec);
  Grid cg = (nu == 0.0) ? tangent_grid(boxes.t1, spec.tangent_t3, spec.h)
                        : tilted_grid(boxes, spec.h);

  LevelSolves out{solve_on(nu, cg, spec.eig_tol, spec.seed, nullptr),
                  EigenResult{0, ComplexField(cg), 0, 0, 0},
                  false,
                  boxes};

  if (spec.richardson) {
    Grid fg = (nu == 0.0)
                  ? tangent_grid(boxes.t1, spec.tangent_t3, spec.h / 2)
                  : tilted_grid(boxes, spec.h / 2);
    ComplexField warm = resample(out.coarse.eigenvector, fg);
    out.fine = solve_on(nu, fg, spec.eig_tol, spec.seed, &warm);
    out.refined = true;
  } else {
    out.fine = out.coarse;
  }

  // truncation audit on the finest level (skipped when the cap already
  // degraded the box on purpose)
  if (!boxes.capped) {
    const WallMass wm = wall_mass_by_axis(out.fine.eigenvector, nu != 0.0);
    if (wm.total() > 1e-6) {
      const char* axis = wm.x1 >= wm.x2 ? "x1 (enlarge t1)" : "x2 (enlarge t2)";
      throw std::runtime_error(
          "halfplane: eigenfunction touches the box wall on axis " +
          std::string(axis) + " (mass " + std::to_string(wm.total()) +
          ") at nu=" + std::to_string(nu) +
          "; increase box_factor or t_cap");
    }
  }
  return out;
}

ZetaResult pack_zeta(double nu, const LevelSolves& ls) {
  ZetaResult z;
  z.nu = nu;
  z.zeta_h = ls.coarse.eigenvalue;
  z.zeta_h2 = ls.fine.eigenvalue;
  z.zeta = ls.refined ? (4.0 * z.zeta_h2 - z.zeta_h) / 3.0 : z.zeta_h;
  z.gap = 1.0 - z.zeta;
  z.essential_edge = ls.boxes.capped || z.gap < kEdgeGap;
  z.residual = ls.fine.residual;
  z.t1 = ls.boxes.t1;
  z.t2_lo = ls.boxes.t2_lo;
  z.t2_hi = ls.boxes.t2_hi;
  return z;
}

}  // namespace

ZetaResult zeta(double nu, const GridSpec& spec) {
  return pack_zeta(nu, solve_levels(nu, spec));
}

GroundState eigenfunction(double nu, const GridSpec& spec) {
  if (!(nu > 0.0 && nu < kPi / 2))
    throw std::domain_error(
        "halfplane: no localized eigenfunction at nu=" + std::to_string(nu) +
        "; the tilted ground state exists only for 0 < nu < pi/2");
  LevelSolves ls = solve_levels(nu, spec);
  ZetaResult sample = pack_zeta(nu, ls);
  ComplexField phi = std::move(ls.fine.eigenvector);
  const Grid& g = phi.grid();

  // the operator is real: rotate the phase away and make the profile >= 0
  std::size_t peak = 0;
  double best = -1.0;
  for (std::size_t i = 0; i < phi.size(); ++i)
    if (std::abs(phi[i]) > best) {
      best = std::abs(phi[i]);
      peak = i;
    }
  const cd rot = std::conj(phi[peak]) / std::abs(phi[peak]);
  double imag_resid = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const cd w = rot * phi[i];
    imag_resid = std::max(imag_resid, std::abs(w.imag()));
    phi[i] = cd{w.real(), 0.0};
  }
  if (imag_resid > 1e-6)
    throw std::runtime_error(
        "halfplane: ground state not real up to a phase (residual " +
        std::to_string(imag_resid) + ")");
  double pos = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) pos += phi[i].real();
  if (pos < 0.0) phi.scale(-1.0);

  // Perron ground state: any remaining negatives are roundoff in the far
  // tail, so fold them up; a sign change above roundoff is a wrong state.
  double sup = 0.0, low = 0.0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    sup = std::max(sup, phi[i].real());
    low = std::min(low, phi[i].real());
  }
  if (low < -1e-8 * sup)
    throw std::runtime_error(
        "halfplane: ground state changes sign (min " + std::to_string(low) +
        " vs max " + std::to_string(sup) + "); not a Perron eigenvector");
  for (std::size_t i = 0; i < phi.size(); ++i)
    phi[i] = cd{std::abs(phi[i].real()), 0.0};
  phi.scale(1.0 / norm(phi));

  DecayReport rep;
  rep.alpha_bound = std::sqrt(std::max(1.0 - sample.zeta, 0.0));
  rep.tail_mass = wall_mass(phi, true);

  // centroid of |phi|^2, then log-linear fit of shell means of |phi|
  double cx = 0, cy = 0;
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const double m = g.weight(i) * std::norm(phi[i]);
    const auto p = g.position(i);
    cx += m * p[0];
    cy += m * p[1];
  }
  const double wall_dist = std::min(
      {sample.t1 - cx, sample.t2_hi - cy, cy + sample.t2_lo});
  const double r_hi = 0.8 * wall_dist, r_lo = 4.0;
  const int nbins = std::max(3, static_cast<int>(r_hi - r_lo));
  std::vector<double> sum(nbins, 0.0);
  std::vector<int> cnt(nbins, 0);
  for (std::size_t i = 0; i < phi.size(); ++i) {
    const auto p = g.position(i);
    const double r = std::hypot(p[0] - cx, p[1] - cy);
    const int b = static_cast<int>((r - r_lo) / (r_hi - r_lo) * nbins);
    if (r >= r_lo && b >= 0 && b < nbins) {
      sum[b] += std::abs(phi[i]);
      ++cnt[b];
    }
  }
  std::vector<double> rs, logs;
  for (int b = 0; b < nbins; ++b) {
    if (cnt[b] == 0) continue;
    const double mean = sum[b] / cnt[b];
    if (mean < 1e-13) continue;
    rs.push_back(r_lo + (b + 0.5) * (r_hi - r_lo) / nbins);
    logs.push_back(std::log(mean));
  }
  if (rs.size() >= 3) rep.alpha_fit = -linear_fit(rs, logs).slope;

  return GroundState{std::move(phi), ls.fine.eigenvalue, sample, rep};
}

SpectralCurve::SpectralCurve(std::vector<double> nus,
                             std::vector<double> zetas,
                             std::vector<unsigned char> essential_flags,
                             double theta0_ref)
    : nu_(std::move(nus)), z_(std::move(zetas)),
      flag_(std::move(essential_flags)), theta0_(theta0_ref) {
  if (nu_.size() < 2 || z_.size() != nu_.size() || flag_.size() != nu_.size())
    throw std::invalid_argument("SpectralCurve: inconsistent sample arrays");
  validate();
  z_interp_ = z_;
  for (double& v : z_interp_) v = std::min(v, 1.0);
  for (std::size_t i = 1; i < z_interp_.size(); ++i)  // flatten slack dips
    z_interp_[i] = std::max(z_interp_[i], z_interp_[i - 1]);
}

void SpectralCurve::validate() const {
  const double z_lo = theta0_ > 0.0 ? theta0_ - 1e-3 : 0.5;
  for (std::size_t i = 0; i < nu_.size(); ++i) {
    if (!(z_[i] >= z_lo && z_[i] <= 1.0 + 1e-3))
      throw std::runtime_error(
          "SpectralCurve: sample " + std::to_string(i) + " (nu=" +
          std::to_string(nu_[i]) + ", zeta=" + std::to_string(z_[i]) +
          ") escaped [" + std::to_string(z_lo) + ", 1.001]");
    if (i > 0 && z_[i] < z_[i - 1] - 1e-4)
      throw std::runtime_error(
          "SpectralCurve: monotonicity violated between nu=" +
          std::to_string(nu_[i - 1]) + " (" + std::to_string(z_[i - 1]) +
          ") and nu=" + std::to_string(nu_[i]) + " (" + std::to_string(z_[i]) +
          ")");
  }
  if (theta0_ > 0.0 && std::abs(z_.front() - theta0_) > 2e-3)
    throw std::runtime_error(
        "SpectralCurve: tangent value " + std::to_string(z_.front()) +
        " disagrees with the half-line constant " + std::to_string(theta0_));
  if (std::abs(nu_.back() - kPi / 2) < 1e-9 && std::abs(z_.back() - 1.0) > 2e-3)
    throw std::runtime_error("SpectralCurve: value at pi/2 is " +
                             std::to_string(z_.back()) + ", expected ~1");
}

double SpectralCurve::zeta_at(double nu) const {
  nu = std::clamp(nu, nu_.front(), nu_.back());
  return MonotoneCubic(nu_, z_interp_)(nu);
}

double SpectralCurve::nu_at(double z) const {
  MonotoneCubic f(nu_, z_interp_);
  if (z <= z_interp_.front()) return nu_.front();
  if (z >= z_interp_.back()) return nu_.back();
  return f.inverse(z);
}

nlohmann::json SpectralCurve::to_json() const {
  nlohmann::json j;
  j["nu"] = nu_;
  j["zeta"] = z_;
  j["essential_edge"] = std::vector<int>(flag_.begin(), flag_.end());
  j["theta0_ref"] = theta0_;
  return j;
}

SpectralCurve SpectralCurve::from_json(const nlohmann::json& j) {
  std::vector<int> fl = j.at("essential_edge").get<std::vector<int>>();
  return SpectralCurve(j.at("nu").get<std::vector<double>>(),
                       j.at("zeta").get<std::vector<double>>(),
                       std::vector<unsigned char>(fl.begin(), fl.end()),
                       j.at("theta0_ref").get<double>());
}

SpectralCurve build_curve(int samples, const GridSpec& spec,
                          double theta0_ref) {
  if (samples < 9)
    throw std::invalid_argument("build_curve: need at least 9 samples");
  if (theta0_ref <= 0.0) theta0_ref = halfline::find_theta0().theta0;

  std::vector<double> nus(samples), zs(samples);
  std::vector<unsigned char> flags(samples);
  double prev_gap = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double nu = (kPi / 2) * i / (samples - 1);
    GridSpec s = spec;
    // the curve is nondecreasing, so the previous gap (shrunk for safety)
    // bounds the next one well enough to size the boxes
    if (i > 0 && prev_gap > 0.0) s.gap_hint = std::max(0.5 * prev_gap, 5e-4);
    ZetaResult z = zeta(nu, s);
    nus[i] = nu;
    zs[i] = z.zeta;
    flags[i] = z.essential_edge ? 1 : 0;
    prev_gap = z.gap;
  }
  return SpectralCurve(std::move(nus), std::move(zs), std::move(flags),
                       theta0_ref);
}

}  // namespace glsurf::halfplane
