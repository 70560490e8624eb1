#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "mhd/diagnostics/energy.hpp"
#include "mhd/io/config.hpp"
#include "mhd/solver/mhd_solver.hpp"

namespace mhd {

/// A step that failed; `step` is the index of the step being computed.
class TransientError : public std::runtime_error {
 public:
  TransientError(int step, const std::string& message);
  int step() const { return step_; }

 private:
  int step_;
};

struct StepWarning {
  int step = 0;
  Warning warning;
};

struct TransientSummary {
  int steps = 0;
  double max_divb = 0.0;
  /// max over steps of max_T |div B_h| / |b|_inf
  double max_divb_relative = 0.0;
  double min_step_margin_relative = 0.0;
  double min_bound_margin_relative = 0.0;
  double max_identity_residual_relative = 0.0;
  bool energy_monotone = true;
  std::vector<int> nonlinear_iterations;  // per step, nonlinear schemes only
  std::vector<StepWarning> warnings;
  std::vector<std::string> files;
};

struct TransientResult {
  std::vector<EnergyRecord> ledger;
  State final_state;
  TransientSummary summary;
};

/// Initial state selected by `initial`: trig (velocity and magnetic field),
/// magnetic, velocity or zero. B is taken from a vector potential.
State initial_state(const MhdSolver& solver, const RunConfig& cfg);

/// Sources selected by `source`; `forced` is a constant-in-time body force.
SourceData run_sources(const Discretization& disc, const RunConfig& cfg);

/// Runs cfg.steps steps of the configured scheme. With a non-empty `out_dir`
/// the ledger CSV and VTK snapshots are written there (the ledger also when a
/// step fails). A failing step throws TransientError.
TransientResult run_transient(const RunConfig& cfg, const std::string& out_dir = "");

struct PreconditionerBenchRow {
  int n = 0;
  int unknowns = 0;
  int iterations = 0;
  bool converged = false;
  /// |A x - b|_2 / |b|_2 of the MINRES solution.
  double relative_residual = 0.0;
  /// Relative difference to the LU solution in the weighted product norm
  /// (|u|_{1,k}, |E|_{curl,k}, |B|_{div,k}, |p|_{0,k}).
  double difference_to_direct = 0.0;
  /// max |x_minres - x_direct| / max |x_direct| over all coefficients.
  double max_coefficient_difference = 0.0;
};

/// First symmetric-scheme step of `cfg` on an n^3 mesh solved by
/// preconditioned MINRES (cfg.solver.tol, cfg.solver.maxit) and by LU.
PreconditionerBenchRow preconditioner_bench(const RunConfig& cfg, int n);

}  // namespace mhd
