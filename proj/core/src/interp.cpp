#include "glsurf/interp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace glsurf {

MonotoneCubic::MonotoneCubic(std::vector<double> x, std::vector<double> y)
    : x_(std::move(x)), y_(std::move(y)) {
  const std::size_t n = x_.size();
  if (n < 2 || y_.size() != n)
    throw std::invalid_argument("MonotoneCubic: need >= 2 matching samples");
  for (std::size_t i = 1; i < n; ++i)
    if (!(x_[i] > x_[i - 1]))
      throw std::invalid_argument("MonotoneCubic: x not strictly increasing");

  // Fritsch-Carlson: start from three-point slopes, then limit so each
  // Hermite piece preserves the sign of the data differences.
  std::vector<double> d(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i)
    d[i] = (y_[i + 1] - y_[i]) / (x_[i + 1] - x_[i]);
  m_.assign(n, 0.0);
  m_[0] = d[0];
  m_[n - 1] = d[n - 2];
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (d[i - 1] * d[i] <= 0.0) {
      m_[i] = 0.0;
    } else {
      const double w1 = 2.0 * (x_[i + 1] - x_[i]) + (x_[i] - x_[i - 1]);
      const double w2 = (x_[i + 1] - x_[i]) + 2.0 * (x_[i] - x_[i - 1]);
      m_[i] = (w1 + w2) / (w1 / d[i - 1] + w2 / d[i]);
    }
  }
  for (std::size_t i = 0; i + 1 < n; ++i) {
    if (d[i] == 0.0) {
      m_[i] = m_[i + 1] = 0.0;
      continue;
    }
    const double a = m_[i] / d[i], b = m_[i + 1] / d[i];
    const double s = a * a + b * b;
    if (s > 9.0) {
      const double t = 3.0 / std::sqrt(s);
      m_[i] = t * a * d[i];
      m_[i + 1] = t * b * d[i];
    }
  }
}

double MonotoneCubic::operator()(double x) const {
  if (x <= x_.front()) return y_.front();
  if (x >= x_.back()) return y_.back();
  const auto it = std::upper_bound(x_.begin(), x_.end(), x);
  const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
  const double h = x_[i + 1] - x_[i];
  const double t = (x - x_[i]) / h;
  const double t2 = t * t, t3 = t2 * t;
  const double h00 = 2 * t3 - 3 * t2 + 1, h10 = t3 - 2 * t2 + t;
  const double h01 = -2 * t3 + 3 * t2, h11 = t3 - t2;
  return h00 * y_[i] + h10 * h * m_[i] + h01 * y_[i + 1] + h11 * h * m_[i + 1];
}

bool MonotoneCubic::nondecreasing(double slack) const {
  for (std::size_t i = 1; i < y_.size(); ++i)
    if (y_[i] < y_[i - 1] - slack) return false;
  return true;
}

double MonotoneCubic::inverse(double y) const {
  if (!nondecreasing(0.0))
    throw std::domain_error("MonotoneCubic::inverse: data not nondecreasing");
  if (y <= y_.front()) return x_.front();
  if (y >= y_.back()) return x_.back();
  double lo = x_.front(), hi = x_.back();
  for (int i = 0; i < 100; ++i) {
    const double mid = 0.5 * (lo + hi);
    ((*this)(mid) < y ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y,
                     const std::vector<double>& w) {
  const std::size_t n = x.size();
  if (n < 2 || y.size() != n || (!w.empty() && w.size() != n))
    throw std::invalid_argument("linear_fit: need >= 2 matching samples");
  double sw = 0, sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = w.empty() ? 1.0 : w[i];
    if (!(wi > 0.0)) throw std::invalid_argument("linear_fit: weight <= 0");
    sw += wi;
    sx += wi * x[i];
    sy += wi * y[i];
    sxx += wi * x[i] * x[i];
    sxy += wi * x[i] * y[i];
  }
  const double det = sw * sxx - sx * sx;
  if (!(std::abs(det) > 0.0))
    throw std::invalid_argument("linear_fit: degenerate abscissas");
  LinearFit f;
  f.intercept = (sxx * sy - sx * sxy) / det;
  f.slope = (sw * sxy - sx * sy) / det;
  double ss = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double wi = w.empty() ? 1.0 : w[i];
    const double r = y[i] - f.intercept - f.slope * x[i];
    ss += wi * r * r;
  }
  f.residual_rms = std::sqrt(ss / sw);
  if (n > 2) {
    const double var = ss / static_cast<double>(n - 2);
    f.intercept_stderr = std::sqrt(std::max(0.0, var * sxx / det));
  }
  return f;
}

}  // namespace glsurf
