#pragma once

#include <cstddef>
#include <span>
#include <stdexcept>
#include <vector>

namespace sclab {

/// Compressed sparse row matrix, square, built from (row, col, value) triplets.
class CsrMatrix {
 public:
  struct Triplet {
    std::size_t row;
    std::size_t col;
    double value;
  };

  CsrMatrix() = default;
  /// Duplicate entries are summed.
  CsrMatrix(std::size_t n, std::vector<Triplet> triplets);

  std::size_t rows() const { return n_; }
  std::size_t nonzeros() const { return values_.size(); }

  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> diagonal() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> row_start_;
  std::vector<std::size_t> cols_;
  std::vector<double> values_;
};

struct CgOptions {
  /// Stop when max_i |b_i - (Ax)_i| / A_ii falls below this.
  double tolerance = 1e-12;
  std::size_t max_iterations = 100'000;
};

struct CgResult {
  std::vector<double> x;
  std::size_t iterations = 0;
  /// Final true residual, row-scaled by the diagonal, max norm.
  double scaled_residual = 0.0;
  bool converged = false;
};

class SolverError : public std::runtime_error {
 public:
  SolverError(const std::string& what, double residual)
      : std::runtime_error(what), residual_(residual) {}
  double residual() const { return residual_; }

 private:
  double residual_;
};

/**
 * Jacobi-preconditioned conjugate gradient for symmetric positive definite A.
 *
 * The recursive residual drifts away from b - Ax on badly scaled systems, so
 * the true residual is recomputed whenever the recursion claims convergence
 * and CG restarts from the current iterate if it is not yet small enough.
 */
CgResult conjugate_gradient(const CsrMatrix& a, std::span<const double> b,
                            const CgOptions& options = {});

}  // namespace sclab
