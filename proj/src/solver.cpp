#include "sclab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace sclab {

CsrMatrix::CsrMatrix(std::size_t n, std::vector<Triplet> triplets) : n_(n) {
  std::sort(triplets.begin(), triplets.end(), [](const Triplet& a, const Triplet& b) {
    return a.row < b.row || (a.row == b.row && a.col < b.col);
  });
  row_start_.assign(n + 1, 0);
  const Triplet* prev = nullptr;
  for (const auto& t : triplets) {
    if (t.row >= n || t.col >= n) throw std::out_of_range("CsrMatrix: index out of range");
    const bool same = prev != nullptr && prev->row == t.row && prev->col == t.col;
    prev = &t;
    if (same) {
      values_.back() += t.value;
      continue;
    }
    cols_.push_back(t.col);
    values_.push_back(t.value);
    ++row_start_[t.row + 1];
  }
  std::partial_sum(row_start_.begin(), row_start_.end(), row_start_.begin());
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t k = row_start_[i]; k < row_start_[i + 1]; ++k) s += values_[k] * x[cols_[k]];
    y[i] = s;
  }
}

std::vector<double> CsrMatrix::diagonal() const {
  std::vector<double> d(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = row_start_[i]; k < row_start_[i + 1]; ++k) {
      if (cols_[k] == i) d[i] += values_[k];
    }
  }
  return d;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double scaled_max(std::span<const double> r, std::span<const double> diag) {
  double m = 0.0;
  for (std::size_t i = 0; i < r.size(); ++i) m = std::max(m, std::abs(r[i]) / diag[i]);
  return m;
}

}  // namespace

CgResult conjugate_gradient(const CsrMatrix& a, std::span<const double> b,
                            const CgOptions& options) {
  const std::size_t n = a.rows();
  if (b.size() != n) throw std::invalid_argument("conjugate_gradient: size mismatch");
  CgResult res;
  res.x.assign(n, 0.0);
  if (n == 0) {
    res.converged = true;
    return res;
  }
  const auto diag = a.diagonal();
  for (double d : diag) {
    if (!(d > 0.0)) throw std::invalid_argument("conjugate_gradient: non-positive diagonal");
  }

  std::vector<double> r(b.begin(), b.end());
  std::vector<double> z(n), p(n), ap(n);
  auto true_residual = [&] {
    a.multiply(res.x, ap);
    for (std::size_t i = 0; i < n; ++i) r[i] = b[i] - ap[i];
    return scaled_max(r, diag);
  };

  double scaled = scaled_max(r, diag);
  while (res.iterations < options.max_iterations && scaled > options.tolerance) {
    // (re)start from the current iterate and true residual
    for (std::size_t i = 0; i < n; ++i) {
      z[i] = r[i] / diag[i];
      p[i] = z[i];
    }
    double rz = dot(r, z);
    std::size_t since_restart = 0;
    while (res.iterations < options.max_iterations) {
      a.multiply(p, ap);
      const double pap = dot(p, ap);
      if (!(pap > 0.0)) break;
      const double step = rz / pap;
      for (std::size_t i = 0; i < n; ++i) {
        res.x[i] += step * p[i];
        r[i] -= step * ap[i];
      }
      ++res.iterations;
      ++since_restart;
      if (scaled_max(r, diag) <= options.tolerance) break;
      for (std::size_t i = 0; i < n; ++i) z[i] = r[i] / diag[i];
      const double rz_new = dot(r, z);
      const double beta = rz_new / rz;
      rz = rz_new;
      for (std::size_t i = 0; i < n; ++i) p[i] = z[i] + beta * p[i];
    }
    const double before = scaled;
    scaled = true_residual();
    if (since_restart == 0 || (scaled >= before && scaled > options.tolerance)) {
      // no progress possible in floating point
      if (scaled > options.tolerance) break;
    }
  }
  res.scaled_residual = scaled;
  res.converged = scaled <= options.tolerance;
  return res;
}

}  // namespace sclab
