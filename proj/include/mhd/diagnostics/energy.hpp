#pragma once

#include <span>
#include <vector>

#include "mhd/assembly/block_system.hpp"
#include "mhd/assembly/operators.hpp"
#include "mhd/diagnostics/norms.hpp"
#include "mhd/state.hpp"

namespace mhd {

/// One row of the energy ledger.
struct EnergyRecord {
  int step = 0;
  double t = 0.0;
  double kinetic = 0.0;      // 1/2 |u|^2
  double magnetic = 0.0;     // S/(2 Rm) |B|^2
  double dissipation = 0.0;  // 1/Re |grad u|^2
  double joule = 0.0;        // S |j|^2
  /// Residual of the discrete energy identity
  ///   (u - u_old, u)/k + S/Rm (B - B_old, B)/k + 1/Re |grad u|^2 + S |j|^2
  ///   + S/Rm |div B|^2 + c - (p, g) - <f, u> - <r, E> - <l, B>,
  /// with c the explicit convection work of the symmetric scheme.
  double identity_residual = 0.0;
  /// Sum of the magnitudes of the identity terms, for relative checks.
  double identity_scale = 0.0;
  /// RHS minus LHS of the per-step inequality
  ///   |u|^2 + S/Rm |B|^2 + 2k/Re |grad u|^2 + 2kS |j|^2
  ///     <= |u_old|^2 + S/Rm |B_old|^2 + 2k <f, u>.
  double step_margin = 0.0;
  double divb_max = 0.0;
  double divb_l2 = 0.0;
  NormRecord norms;
  /// E_0 + F_n - max_{j<=n} (E_j + D_j) for the accumulated bound, with
  /// E_j = |u^j|^2 + S/Rm |B^j|^2, D_j = sum_{i<=j} k/Re |grad u^i|^2 + 2kS |j^i|^2
  /// and F_n = k Re sum_{i<=n} |f^i|_{-1}^2.
  double bound_margin = 0.0;
};

/// int |E + u x beta|^2 by degree-6 quadrature.
double current_norm_squared(const Discretization& disc, std::span<const double> u, std::span<const double> E,
                            std::span<const double> beta);

/// Builds ledger rows step by step and tracks the accumulated energy bound.
class EnergyLedger {
 public:
  EnergyLedger(const Discretization& disc, const OperatorSet& ops, const Params& params);

  /// Row for the initial state (no identity terms).
  const EnergyRecord& start(const State& s);

  /// Row for the step old -> next. `beta` is the magnetic field inside the
  /// current j = E + u x beta. `explicit_convection` is the work of convection
  /// terms treated explicitly (zero for implicit schemes).
  const EnergyRecord& add_step(const State& old, const State& next, std::span<const double> beta,
                               const SourceData& sources, double explicit_convection = 0.0);

  const std::vector<EnergyRecord>& records() const { return records_; }
  double max_divb() const;
  double min_step_margin_relative() const;
  double max_identity_residual_relative() const;
  double min_bound_margin_relative() const;
  bool energy_non_increasing(double rel_tol = 1e-12) const;

 private:
  EnergyRecord base_record(const State& s) const;

  const Discretization& disc_;
  const OperatorSet& ops_;
  Params params_;
  WeightedNorms norms_;
  DualNorm dual_;
  std::vector<EnergyRecord> records_;
  double e0_ = 0.0;
  double dissipation_sum_ = 0.0;
  double forcing_sum_ = 0.0;
  double max_left_ = 0.0;
};

}  // namespace mhd
