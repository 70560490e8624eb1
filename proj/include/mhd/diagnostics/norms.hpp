#pragma once

#include <span>

#include "mhd/assembly/operators.hpp"
#include "mhd/linalg/direct.hpp"
#include "mhd/state.hpp"

namespace mhd {

/// Time-step weighted norms:
///   |u|_{1,k}^2    = k^-1 |u|^2 + |grad u|^2 + k^-1 |P div u|^2
///   |E|_{curl,k}^2 = |E|^2 + k |curl E|^2
///   |B|_{div,k}^2  = k^-1 |B|^2 + |div B|^2
///   |p|_{0,k}^2    = k |p|^2
/// with P the L2 projection onto the pressure space. The X norm combines the
/// first three.
struct NormRecord {
  double u = 0.0;
  double E = 0.0;
  double B = 0.0;
  double p = 0.0;
  double X = 0.0;
};

class WeightedNorms {
 public:
  WeightedNorms(const OperatorSet& ops, double k);

  double k() const { return k_; }
  double u_squared(std::span<const double> u) const;
  double E_squared(std::span<const double> e) const;
  double B_squared(std::span<const double> b) const;
  double p_squared(std::span<const double> p) const;

  NormRecord compute(const State& s) const;
  double x_norm(const State& s) const;
  /// X norm of a - b.
  double x_distance(const State& a, const State& b) const;

 private:
  const OperatorSet& ops_;
  double k_;
  linalg::SparseCholesky mass_p_;
};

struct DivBStats {
  double max_abs = 0.0;  // max over tets of |div B_h|
  double l2 = 0.0;       // |div B_h|_{L2}
};

DivBStats divb_monitor(const Discretization& disc, std::span<const double> b);

/// Discrete dual norm sqrt(f^T A^{-1} f), A the vector Laplacian restricted to
/// interior velocity DOFs; the supremum of (f, v) / |grad v| over discrete v.
class DualNorm {
 public:
  DualNorm(const Discretization& disc, const OperatorSet& ops);
  double operator()(std::span<const double> f) const;

 private:
  const Discretization& disc_;
  linalg::SparseCholesky stiffness_;
};

}  // namespace mhd
