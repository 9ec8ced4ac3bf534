#pragma once

// Interpolation tables used by the cached scale/speed machinery:
//  - HermiteTable: cubic Hermite interpolant with caller-supplied node
//    derivatives (the cumulative maps all have analytically exact
//    derivatives, which makes this strictly more accurate than fitting
//    slopes from the data);
//  - pchip_derivatives: Fritsch-Carlson shape-preserving slopes for tabulated
//    data without exact derivatives (used for tabulated model coefficients);
//  - LinearTable: piecewise-linear table (tabulated spectra).

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fpt {

class HermiteTable {
 public:
  HermiteTable() = default;
  HermiteTable(std::vector<double> x, std::vector<double> f,
               std::vector<double> d)
      : x_(std::move(x)), f_(std::move(f)), d_(std::move(d)) {
    if (x_.size() < 2 || x_.size() != f_.size() || x_.size() != d_.size()) {
      throw std::invalid_argument("HermiteTable: need >= 2 matching arrays");
    }
    for (std::size_t i = 1; i < x_.size(); ++i) {
      if (!(x_[i] > x_[i - 1])) {
        throw std::invalid_argument("HermiteTable: abscissae must increase");
      }
    }
  }

  bool empty() const { return x_.empty(); }
  const std::vector<double>& nodes() const { return x_; }
  const std::vector<double>& values() const { return f_; }
  const std::vector<double>& derivatives() const { return d_; }
  double front_x() const { return x_.front(); }
  double back_x() const { return x_.back(); }

  // Evaluate the interpolant; arguments outside the table are clamped to the
  // nearest endpoint (callers stay in range by construction).
  double operator()(double x) const {
    const auto [i, t, h] = locate(x);
    const double t2 = t * t;
    const double t3 = t2 * t;
    const double h00 = 2.0 * t3 - 3.0 * t2 + 1.0;
    const double h10 = t3 - 2.0 * t2 + t;
    const double h01 = -2.0 * t3 + 3.0 * t2;
    const double h11 = t3 - t2;
    return h00 * f_[i] + h10 * h * d_[i] + h01 * f_[i + 1] + h11 * h * d_[i + 1];
  }

  // Derivative of the interpolant.
  double derivative(double x) const {
    const auto [i, t, h] = locate(x);
    const double t2 = t * t;
    const double g00 = (6.0 * t2 - 6.0 * t) / h;
    const double g10 = 3.0 * t2 - 4.0 * t + 1.0;
    const double g01 = (-6.0 * t2 + 6.0 * t) / h;
    const double g11 = 3.0 * t2 - 2.0 * t;
    return g00 * f_[i] + g10 * d_[i] + g01 * f_[i + 1] + g11 * d_[i + 1];
  }

 private:
  struct Loc {
    std::size_t i;
    double t;
    double h;
  };

  Loc locate(double x) const {
    if (x <= x_.front()) return {0, 0.0, x_[1] - x_[0]};
    if (x >= x_.back()) {
      const std::size_t i = x_.size() - 2;
      return {i, 1.0, x_[i + 1] - x_[i]};
    }
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double h = x_[i + 1] - x_[i];
    return {i, (x - x_[i]) / h, h};
  }

  std::vector<double> x_, f_, d_;
};

// Fritsch-Carlson monotone (shape-preserving) slopes.
inline std::vector<double> pchip_derivatives(const std::vector<double>& x,
                                             const std::vector<double>& f) {
  const std::size_t n = x.size();
  if (n < 2 || f.size() != n) {
    throw std::invalid_argument("pchip_derivatives: bad sizes");
  }
  std::vector<double> h(n - 1), delta(n - 1), d(n);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    h[i] = x[i + 1] - x[i];
    delta[i] = (f[i + 1] - f[i]) / h[i];
  }
  if (n == 2) {
    d[0] = d[1] = delta[0];
    return d;
  }
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (delta[i - 1] * delta[i] <= 0.0) {
      d[i] = 0.0;
    } else {
      const double w1 = 2.0 * h[i] + h[i - 1];
      const double w2 = h[i] + 2.0 * h[i - 1];
      d[i] = (w1 + w2) / (w1 / delta[i - 1] + w2 / delta[i]);
    }
  }
  // One-sided endpoint slopes, limited to preserve shape.
  auto endpoint = [](double h0, double h1, double d0, double d1) {
    double s = ((2.0 * h0 + h1) * d0 - h0 * d1) / (h0 + h1);
    if (s * d0 <= 0.0) {
      s = 0.0;
    } else if (d0 * d1 <= 0.0 && std::abs(s) > 3.0 * std::abs(d0)) {
      s = 3.0 * d0;
    }
    return s;
  };
  d[0] = endpoint(h[0], h[1], delta[0], delta[1]);
  d[n - 1] = endpoint(h[n - 2], h[n - 3], delta[n - 2], delta[n - 3]);
  return d;
}

class LinearTable {
 public:
  LinearTable() = default;
  LinearTable(std::vector<double> x, std::vector<double> f)
      : x_(std::move(x)), f_(std::move(f)) {
    if (x_.size() < 2 || x_.size() != f_.size()) {
      throw std::invalid_argument("LinearTable: need >= 2 matching arrays");
    }
    for (std::size_t i = 1; i < x_.size(); ++i) {
      if (!(x_[i] > x_[i - 1])) {
        throw std::invalid_argument("LinearTable: abscissae must increase");
      }
    }
  }

  bool empty() const { return x_.empty(); }
  const std::vector<double>& nodes() const { return x_; }
  const std::vector<double>& values() const { return f_; }

  // Zero outside the tabulated range (documented zero-extension).
  double operator()(double x) const {
    if (x < x_.front() || x > x_.back()) return 0.0;
    const auto it = std::upper_bound(x_.begin(), x_.end(), x);
    if (it == x_.begin()) return f_.front();
    if (it == x_.end()) return f_.back();
    const std::size_t i = static_cast<std::size_t>(it - x_.begin()) - 1;
    const double t = (x - x_[i]) / (x_[i + 1] - x_[i]);
    return f_[i] + t * (f_[i + 1] - f_[i]);
  }

 private:
  std::vector<double> x_, f_;
};

}  // namespace fpt
