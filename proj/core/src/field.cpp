#include "glsurf/field.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

#include "glsurf/parallel.hpp"

namespace glsurf {

ComplexField::ComplexField(Grid g) : grid_(std::move(g)) {
  v_.assign(grid_.node_count(), cd{0.0, 0.0});
}

ComplexField ComplexField::constant(const Grid& g, cd value) {
  ComplexField f(g);
  f.fill(value);
  return f;
}

ComplexField ComplexField::random(const Grid& g, std::uint64_t seed,
                                  double amplitude) {
  ComplexField f(g);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (std::size_t i = 0; i < f.size(); ++i) {
    if (g.on_dirichlet(i)) continue;
    const double re = u(rng), im = u(rng);
    f[i] = amplitude * cd{re, im};
  }
  return f;
}

void ComplexField::fill(cd value) {
  for (std::size_t i = 0; i < v_.size(); ++i)
    v_[i] = grid_.on_dirichlet(i) ? cd{0.0, 0.0} : value;
}

void ComplexField::zero_dirichlet() {
  for (std::size_t i = 0; i < v_.size(); ++i)
    if (grid_.on_dirichlet(i)) v_[i] = cd{0.0, 0.0};
}

bool ComplexField::finite() const {
  for (const cd& z : v_)
    if (!std::isfinite(z.real()) || !std::isfinite(z.imag())) return false;
  return true;
}

void ComplexField::scale(double s) {
  par::parallel_for(v_.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) v_[i] *= s;
  });
}

void ComplexField::axpy(cd alpha, const ComplexField& x) {
  if (x.size() != v_.size()) throw std::invalid_argument("axpy: size mismatch");
  par::parallel_for(v_.size(), [&](std::size_t b, std::size_t e) {
    for (std::size_t i = b; i < e; ++i) v_[i] += alpha * x.v_[i];
  });
}

cd dot(const ComplexField& f, const ComplexField& g) {
  if (f.grid() != g.grid())
    throw std::invalid_argument("dot: fields live on different grids");
  const std::vector<double>& w = f.grid().weights();
  return par::chunked_sum_c(f.size(), [&](std::size_t i) {
    return w[i] * std::conj(f[i]) * g[i];
  });
}

double dot_re(const ComplexField& f, const ComplexField& g) {
  if (f.grid() != g.grid())
    throw std::invalid_argument("dot_re: fields live on different grids");
  const std::vector<double>& w = f.grid().weights();
  return par::chunked_sum(f.size(), [&](std::size_t i) {
    const cd a = f[i], b = g[i];
    return w[i] * (a.real() * b.real() + a.imag() * b.imag());
  });
}

double norm2(const ComplexField& f) {
  const std::vector<double>& w = f.grid().weights();
  return par::chunked_sum(f.size(),
                          [&](std::size_t i) { return w[i] * std::norm(f[i]); });
}

double norm(const ComplexField& f) { return std::sqrt(norm2(f)); }

double power4(const ComplexField& f) {
  const std::vector<double>& w = f.grid().weights();
  return par::chunked_sum(f.size(), [&](std::size_t i) {
    const double m = std::norm(f[i]);
    return w[i] * m * m;
  });
}

double sup_norm(const ComplexField& f) {
  return par::chunked_max(f.size(),
                          [&](std::size_t i) { return std::abs(f[i]); });
}

}  // namespace glsurf
