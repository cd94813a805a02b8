#pragma once

#include <complex>
#include <cstdint>
#include <vector>

#include "glsurf/grid.hpp"

namespace glsurf {

using cd = std::complex<double>;

// Complex node values on a Grid.  Nodes on Dirichlet faces hold exact zeros;
// every constructor and mutator here maintains that.
class ComplexField {
 public:
  explicit ComplexField(Grid g);

  static ComplexField zeros(const Grid& g) { return ComplexField(g); }
  static ComplexField constant(const Grid& g, cd value);
  // Deterministic seeded start: amplitude * (u1 + i*u2), u uniform in (-1,1).
  static ComplexField random(const Grid& g, std::uint64_t seed,
                             double amplitude = 1.0);

  const Grid& grid() const { return grid_; }
  std::size_t size() const { return v_.size(); }
  cd* data() { return v_.data(); }
  const cd* data() const { return v_.data(); }
  cd& operator[](std::size_t i) { return v_[i]; }
  const cd& operator[](std::size_t i) const { return v_[i]; }

  void fill(cd value);
  void zero_dirichlet();          // re-assert exact zeros on Dirichlet faces
  bool finite() const;            // all entries finite

  // In-place BLAS-ish helpers (all preserve Dirichlet zeros trivially).
  void scale(double s);
  void axpy(cd alpha, const ComplexField& x);  // *this += alpha * x

 private:
  Grid grid_;
  std::vector<cd> v_;
};

// Weighted (trapezoid) reductions.  dot is conjugate-linear in the first slot.
cd dot(const ComplexField& f, const ComplexField& g);
double dot_re(const ComplexField& f, const ComplexField& g);
double norm2(const ComplexField& f);   // integral of |f|^2
double norm(const ComplexField& f);
double power4(const ComplexField& f);  // integral of |f|^4
double sup_norm(const ComplexField& f);

}  // namespace glsurf
