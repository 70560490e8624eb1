#pragma once

#include <functional>
#include <span>
#include <vector>

#include "mhd/linalg/sparse.hpp"

namespace mhd::linalg {

/// z = M^{-1} r for a symmetric positive definite preconditioner M.
using Preconditioner = std::function<void(std::span<const double> r, std::span<double> z)>;

struct MinresOptions {
  double tol = 1e-8;
  int maxit = 1000;
};

struct MinresResult {
  std::vector<double> x;
  int iterations = 0;
  bool converged = false;
  /// Final preconditioned residual norm divided by the initial one.
  double relative_residual = 0.0;
  /// History of the relative preconditioned residual, one entry per iteration.
  std::vector<double> history;
};

/// Preconditioned MINRES (Paige-Saunders) from a zero initial guess. Stops
/// when the M^{-1}-norm of the residual has dropped by `tol`. Throws
/// std::invalid_argument if A is not symmetric to 1e-12 relative.
MinresResult minres(const SparseMatrix& a, std::span<const double> b, const Preconditioner& m,
                    const MinresOptions& options = {});

/// Unpreconditioned variant (M = I).
MinresResult minres(const SparseMatrix& a, std::span<const double> b, const MinresOptions& options = {});

}  // namespace mhd::linalg
