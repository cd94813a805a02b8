#pragma once

#include <vector>

namespace glsurf {

// Monotonicity-preserving piecewise cubic Hermite interpolant
// (Fritsch-Carlson slope limiting).  Evaluation outside [x.front, x.back]
// clamps to the end values.
class MonotoneCubic {
 public:
  MonotoneCubic(std::vector<double> x, std::vector<double> y);

  double operator()(double x) const;
  double x_min() const { return x_.front(); }
  double x_max() const { return x_.back(); }
  const std::vector<double>& xs() const { return x_; }
  const std::vector<double>& ys() const { return y_; }

  // True if the data is nondecreasing up to `slack` per adjacent pair.
  bool nondecreasing(double slack = 0.0) const;

  // Solves f(x) = y on the data range; requires nondecreasing data and
  // y within [y.front, y.back].  Bisection to ~1e-13 of the x-range.
  double inverse(double y) const;

 private:
  std::vector<double> x_, y_, m_;  // m_: limited endpoint slopes
};

struct LinearFit {
  double intercept = 0.0;
  double slope = 0.0;
  double residual_rms = 0.0;     // weighted RMS of fit residuals
  double intercept_stderr = 0.0; // from the weighted normal equations
};

// Weighted least squares y ~ intercept + slope*x.  Weights must be positive;
// pass empty for uniform weights.
LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y,
                     const std::vector<double>& w = {});

}  // namespace glsurf
