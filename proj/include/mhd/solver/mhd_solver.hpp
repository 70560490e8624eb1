#pragma once

#include <memory>
#include <stdexcept>
#include <string>
#include <vector>

#include "mhd/assembly/system_assembler.hpp"
#include "mhd/diagnostics/norms.hpp"
#include "mhd/linalg/block_preconditioner.hpp"

namespace mhd {

enum class LinearSolverKind { direct, minres };

struct LinearSolverOptions {
  LinearSolverKind kind = LinearSolverKind::direct;
  double tol = 1e-10;  // MINRES relative preconditioned residual
  int maxit = 5000;
};

struct LinearSolveInfo {
  int iterations = 0;
  /// |A x - b|_inf / (|A|_inf |x|_inf + |b|_inf)
  double residual = 0.0;
};

enum class NonlinearMethod { picard, newton };

const char* method_name(NonlinearMethod method);

struct NonlinearOptions {
  double tol = 1e-8;
  int maxit = 50;
  /// Bound on the relative algebraic residual of the nonlinear step.
  double residual_tol = 1e-6;
};

/// Raised when the inner iteration fails; carries the increment history.
class NonlinearSolveError : public std::runtime_error {
 public:
  NonlinearSolveError(const std::string& what, std::vector<double> increments)
      : std::runtime_error(what), increments_(std::move(increments)) {}
  const std::vector<double>& increments() const { return increments_; }

 private:
  std::vector<double> increments_;
};

struct StepResult {
  State state;
  std::vector<Warning> warnings;
  LinearSolveInfo solve;
};

struct NonlinearStepResult {
  State state;
  /// Relative X-norm increments |x^{m+1} - x^m|_X / |x^{m+1}|_X.
  std::vector<double> increments;
  /// max |div B| of every inner iterate.
  std::vector<double> inner_divb;
  int iterations = 0;
  double residual = 0.0;
  std::vector<Warning> warnings;
};

/// Time-stepping driver on a fixed discretization and parameter set.
class MhdSolver {
 public:
  MhdSolver(const Discretization& disc, const Params& params);
  ~MhdSolver();

  const Discretization& discretization() const { return disc_; }
  const Params& params() const { return params_; }
  const OperatorSet& operators() const { return *ops_; }
  const SystemAssembler& assembler() const { return *assembler_; }
  const WeightedNorms& norms() const { return *norms_; }

  /// Nodal P2 interpolant with boundary DOFs zeroed.
  std::vector<double> interpolate_velocity(const VectorField& u0) const;

  /// u from its nodal interpolant, B from face fluxes of B0, E = 0, p = 0.
  /// Throws std::invalid_argument if the discrete divergence of B exceeds
  /// 1e-8 relative to the flux scale. Boundary fluxes are kept as
  /// interpolated; time stepping assumes B0.n = 0 on the boundary.
  State initialize_state(const VectorField& u0, const VectorField& B0) const;

  /// As above with B0 = curl A, fluxes taken as C times the edge circulations
  /// of A (boundary circulations zeroed), which is divergence free exactly.
  State initialize_state_from_potential(const VectorField& u0, const VectorField& potential) const;

  std::vector<double> solve(const BlockSystem& system, const LinearSolverOptions& options,
                            LinearSolveInfo* info = nullptr) const;

  /// One step of a single-step linearized scheme from `minus`.
  StepResult step_linearized(Scheme scheme, const State& minus, const SourceData& sources,
                             const LinearSolverOptions& options = {}) const;

  /// One implicit Euler step of the nonlinear problem by inner Picard or
  /// Newton iteration started from `initial` (default: `minus`). Throws
  /// NonlinearSolveError on non-convergence.
  NonlinearStepResult solve_nonlinear_step(NonlinearMethod method, const State& minus, const SourceData& sources,
                                           const NonlinearOptions& options = {},
                                           const State* initial = nullptr) const;

  /// Relative algebraic residual |F(x)|_inf / |rhs|_inf of the nonlinear step
  /// old -> x.
  double nonlinear_residual(const State& x, const State& old, const SourceData& sources) const;

  /// Weighted-norm block preconditioner, built on first use.
  const linalg::BlockDiagonalPreconditioner& preconditioner() const;

 private:
  const Discretization& disc_;
  Params params_;
  std::unique_ptr<OperatorSet> ops_;
  std::unique_ptr<SystemAssembler> assembler_;
  std::unique_ptr<WeightedNorms> norms_;
  mutable std::unique_ptr<linalg::BlockDiagonalPreconditioner> precond_;
};

}  // namespace mhd
