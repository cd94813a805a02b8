#include "glsurf/operators.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "glsurf/parallel.hpp"

namespace glsurf {

ComplexField LinearOperator::operator()(const ComplexField& in) const {
  ComplexField out(grid());
  apply(in, out);
  return out;
}

SchrodingerOp::SchrodingerOp(LinkGauge links, std::vector<double> potential)
    : links_(std::move(links)), potential_(std::move(potential)) {
  const Grid& g = links_.grid();
  const std::size_t n = g.node_count();
  if (!potential_.empty() && potential_.size() != n)
    throw std::invalid_argument("SchrodingerOp: potential size mismatch");
  for (int a = 0; a < g.dim(); ++a) {
    auto& h = hop_[static_cast<size_t>(a)];
    h.assign(n, cd{1.0, 0.0});
    for (std::size_t i = 0; i < n; ++i)
      h[i] = std::polar(1.0, -links_.phase(a, i));
  }
}

SchrodingerOp SchrodingerOp::with_potential(
    LinkGauge links,
    const std::function<double(const std::array<double, 3>&)>& v) {
  const Grid& g = links.grid();
  std::vector<double> pot(g.node_count());
  for (std::size_t i = 0; i < pot.size(); ++i) {
    pot[i] = v(g.position(i));
    if (!std::isfinite(pot[i]))
      throw std::runtime_error("SchrodingerOp: non-finite potential at node " +
                               std::to_string(i));
  }
  return SchrodingerOp(std::move(links), std::move(pot));
}

namespace {

struct StencilDims {
  int dim;
  int na[3];
  std::size_t stride[3];
  double h2inv[3];
  bool neu_lo[3], neu_hi[3];
};

StencilDims stencil_dims(const Grid& g) {
  StencilDims d{};
  d.dim = g.dim();
  const std::size_t sh1 = static_cast<std::size_t>(g.nodes(1));
  const std::size_t sh2 = static_cast<std::size_t>(g.nodes(2));
  d.stride[0] = sh1 * sh2;
  d.stride[1] = sh2;
  d.stride[2] = 1;
  for (int a = 0; a < d.dim; ++a) {
    d.na[a] = g.axis(a).n;
    d.h2inv[a] = 1.0 / (g.h(a) * g.h(a));
    d.neu_lo[a] = g.axis(a).bc_lo == Bc::Neumann;
    d.neu_hi[a] = g.axis(a).bc_hi == Bc::Neumann;
  }
  return d;
}

}  // namespace

void SchrodingerOp::apply(const ComplexField& in, ComplexField& out) const {
  const Grid& g = links_.grid();
  if (in.grid() != g || out.grid() != g)
    throw std::invalid_argument("SchrodingerOp::apply: grid mismatch");
  const StencilDims sd = stencil_dims(g);
  const cd* u = in.data();
  cd* y = out.data();
  const double* pot = potential_.empty() ? nullptr : potential_.data();
  const int nodes1 = g.nodes(1), nodes2 = g.nodes(2);

  par::parallel_for(g.node_count(), [&](std::size_t b, std::size_t e) {
    auto c = g.unpack(b);
    for (std::size_t idx = b; idx < e; ++idx) {
      if (g.on_dirichlet(idx)) {
        y[idx] = cd{0.0, 0.0};
      } else {
        const cd u0 = u[idx];
        cd kin{0.0, 0.0};
        for (int a = 0; a < sd.dim; ++a) {
          const int ia = c[static_cast<size_t>(a)];
          const std::size_t s = sd.stride[a];
          const auto& hop = hop_[static_cast<size_t>(a)];
          if (ia > 0 && ia < sd.na[a]) {
            const cd fwd = hop[idx] * u[idx + s];
            const cd bwd = std::conj(hop[idx - s]) * u[idx - s];
            kin += sd.h2inv[a] * (2.0 * u0 - fwd - bwd);
          } else if (ia == 0) {
            // on_dirichlet already excluded Dirichlet faces
            kin += sd.h2inv[a] * 2.0 * (u0 - hop[idx] * u[idx + s]);
          } else {
            kin += sd.h2inv[a] * 2.0 * (u0 - std::conj(hop[idx - s]) * u[idx - s]);
          }
        }
        y[idx] = kin + (pot ? pot[idx] * u0 : cd{0.0, 0.0});
      }
      if (++c[2] >= nodes2) {
        c[2] = 0;
        if (++c[1] >= nodes1) {
          c[1] = 0;
          ++c[0];
        }
      }
    }
  });
}

bool SchrodingerOp::jacobi_diagonal(std::vector<double>& d) const {
  const Grid& g = links_.grid();
  const StencilDims sd = stencil_dims(g);
  double kin_diag = 0.0;
  for (int a = 0; a < sd.dim; ++a) kin_diag += 2.0 * sd.h2inv[a];
  d.assign(g.node_count(), 1.0);
  for (std::size_t i = 0; i < d.size(); ++i) {
    if (g.on_dirichlet(i)) continue;
    d[i] = kin_diag + (potential_.empty() ? 0.0 : potential_[i]);
  }
  return true;
}

double SchrodingerOp::quadratic_form(const ComplexField& u) const {
  double q = kinetic_form(u, links_);
  if (!potential_.empty()) {
    const std::vector<double>& w = u.grid().weights();
    q += par::chunked_sum(u.size(), [&](std::size_t i) {
      return w[i] * potential_[i] * std::norm(u[i]);
    });
  }
  return q;
}

namespace {

// Edge sum shared by kinetic_form and its weighted variant.
template <class WeightFn>
double edge_sum(const ComplexField& u, const LinkGauge& links,
                const WeightFn& wfn) {
  const Grid& g = links.grid();
  if (u.grid() != g)
    throw std::invalid_argument("kinetic_form: grid mismatch");
  const StencilDims sd = stencil_dims(g);

  double total = 0.0;
  for (int a = 0; a < sd.dim; ++a) {
    total += par::chunked_sum(g.node_count(), [&](std::size_t idx) {
      const auto c = g.unpack(idx);
      const int ia = c[static_cast<size_t>(a)];
      if (ia >= sd.na[a]) return 0.0;
      // transverse trapezoid weight: product over other axes
      double t = g.h(a);
      for (int bax = 0; bax < sd.dim; ++bax) {
        if (bax == a) continue;
        const int ib = c[static_cast<size_t>(bax)];
        double wb = g.h(bax);
        if (ib == 0 || ib == sd.na[bax]) wb *= 0.5;
        t *= wb;
      }
      const std::size_t s = sd.stride[a];
      const cd hop = std::polar(1.0, -links.phase(a, idx)) * u[idx + s] - u[idx];
      std::array<double, 3> mid = g.position(idx);
      mid[static_cast<size_t>(a)] += 0.5 * g.h(a);
      return t * sd.h2inv[a] * std::norm(hop) * wfn(mid);
    });
  }
  return total;
}

}  // namespace

double kinetic_form(const ComplexField& u, const LinkGauge& links) {
  return edge_sum(u, links, [](const std::array<double, 3>&) { return 1.0; });
}

double kinetic_form_weighted(
    const ComplexField& u, const LinkGauge& links,
    const std::function<double(const std::array<double, 3>&)>& w) {
  return edge_sum(u, links, w);
}

}  // namespace glsurf
