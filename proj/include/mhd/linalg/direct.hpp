#pragma once

#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "mhd/linalg/sparse.hpp"

namespace mhd::linalg {

/// Raised when a factorization hits a zero pivot, the matrix is numerically
/// singular, or the computed solution fails its residual check.
class SingularMatrixError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Sparse LU with partial threshold pivoting (threshold 0.1) and a fill-
/// reducing column ordering.
class SparseLU {
 public:
  /// Factorizes A. Throws SingularMatrixError when A is structurally or
  /// numerically singular (reciprocal condition estimate below 1e-13).
  explicit SparseLU(const SparseMatrix& a);
  ~SparseLU();
  SparseLU(SparseLU&&) noexcept;
  SparseLU& operator=(SparseLU&&) noexcept;

  int size() const;
  /// Solves A x = b followed by one step of iterative refinement; throws
  /// SingularMatrixError if the residual check then fails.
  std::vector<double> solve(std::span<const double> b) const;
  /// Reciprocal 1-norm condition number estimate (Hager's method).
  double rcond() const { return rcond_; }

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
  SparseMatrix a_;
  double rcond_ = 0.0;
};

/// One-shot LU solve.
std::vector<double> sparse_lu_solve(const SparseMatrix& a, std::span<const double> b);

/// Sparse Cholesky (LL^T). Throws SingularMatrixError unless A is symmetric
/// positive definite.
class SparseCholesky {
 public:
  explicit SparseCholesky(const SparseMatrix& a);
  ~SparseCholesky();
  SparseCholesky(SparseCholesky&&) noexcept;
  SparseCholesky& operator=(SparseCholesky&&) noexcept;

  int size() const;
  void solve(std::span<const double> b, std::span<double> x) const;
  std::vector<double> solve(std::span<const double> b) const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace mhd::linalg
