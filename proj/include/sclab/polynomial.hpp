#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

namespace sclab {

/// Dense univariate polynomial, coefficients in increasing degree.
class Polynomial {
 public:
  Polynomial() = default;
  explicit Polynomial(std::vector<double> coeffs) : c_(std::move(coeffs)) {}

  /// a t^2 + b t + c
  static Polynomial quadratic(double a, double b, double c) { return Polynomial({c, b, a}); }

  std::size_t degree() const { return c_.empty() ? 0 : c_.size() - 1; }
  double coefficient(std::size_t k) const { return k < c_.size() ? c_[k] : 0.0; }

  double operator()(double t) const {
    double v = 0.0;
    for (auto it = c_.rbegin(); it != c_.rend(); ++it) v = v * t + *it;
    return v;
  }

  Polynomial derivative() const {
    if (c_.size() <= 1) return Polynomial();
    std::vector<double> d(c_.size() - 1);
    for (std::size_t k = 1; k < c_.size(); ++k) d[k - 1] = double(k) * c_[k];
    return Polynomial(std::move(d));
  }

  Polynomial antiderivative() const {
    std::vector<double> a(c_.size() + 1, 0.0);
    for (std::size_t k = 0; k < c_.size(); ++k) a[k + 1] = c_[k] / double(k + 1);
    return Polynomial(std::move(a));
  }

  /// Exact integral over [lo, hi].
  double integrate(double lo, double hi) const {
    const auto a = antiderivative();
    return a(hi) - a(lo);
  }

  friend Polynomial operator*(const Polynomial& p, const Polynomial& q) {
    if (p.c_.empty() || q.c_.empty()) return Polynomial();
    std::vector<double> r(p.c_.size() + q.c_.size() - 1, 0.0);
    for (std::size_t i = 0; i < p.c_.size(); ++i) {
      for (std::size_t j = 0; j < q.c_.size(); ++j) r[i + j] += p.c_[i] * q.c_[j];
    }
    return Polynomial(std::move(r));
  }

  friend Polynomial operator+(const Polynomial& p, const Polynomial& q) {
    std::vector<double> r(std::max(p.c_.size(), q.c_.size()), 0.0);
    for (std::size_t i = 0; i < p.c_.size(); ++i) r[i] += p.c_[i];
    for (std::size_t i = 0; i < q.c_.size(); ++i) r[i] += q.c_[i];
    return Polynomial(std::move(r));
  }

 private:
  std::vector<double> c_;
};

}  // namespace sclab
