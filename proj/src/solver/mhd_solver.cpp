#include "mhd/solver/mhd_solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "mhd/assembly/preconditioner.hpp"
#include "mhd/linalg/direct.hpp"
#include "mhd/linalg/minres.hpp"

namespace mhd {

namespace {

double relative_residual(const linalg::SparseMatrix& a, std::span<const double> x, std::span<const double> b) {
  std::vector<double> r = a.multiply(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= b[i];
  const double scale = a.norm_inf() * linalg::norm_inf(x) + linalg::norm_inf(b);
  return scale > 0 ? linalg::norm_inf(r) / scale : 0.0;
}

double max_abs(std::span<const double> v) { return linalg::norm_inf(v); }

}  // namespace

const char* method_name(NonlinearMethod method) {
  return method == NonlinearMethod::picard ? "picard" : "newton";
}

MhdSolver::MhdSolver(const Discretization& disc, const Params& params)
    : disc_(disc),
      params_(params),
      ops_(std::make_unique<OperatorSet>(assemble_operators(disc))),
      assembler_(std::make_unique<SystemAssembler>(disc, *ops_)),
      norms_(std::make_unique<WeightedNorms>(*ops_, params.k)) {
  params_.validate();
}

MhdSolver::~MhdSolver() = default;

std::vector<double> MhdSolver::interpolate_velocity(const VectorField& u0) const {
  std::vector<double> u(disc_.layout().n_u, 0.0);
  const auto& mask = disc_.velocity_mask();
  for (int node = 0; node < disc_.num_p2_nodes(); ++node) {
    const Vec3 v = u0(disc_.p2_node_position(node));
    for (int c = 0; c < 3; ++c) u[3 * node + c] = mask[3 * node + c] ? 0.0 : v[c];
  }
  return u;
}

State MhdSolver::initialize_state(const VectorField& u0, const VectorField& B0) const {
  State s = zero_state(disc_.layout());
  s.u = interpolate_velocity(u0);
  s.B = interpolate_vector(disc_.mesh(), 2, B0);
  const std::vector<double> db = disc_.complex().D.apply(s.B);
  const double bmax = max_abs(s.B);
  const double dmax = max_abs(db);
  if (bmax > 0 && dmax > 1e-8 * 4.0 * bmax) {
    std::ostringstream os;
    os << "initial magnetic field is not discretely divergence free: max |D b| = " << dmax
       << " (flux scale " << bmax << ")";
    throw std::invalid_argument(os.str());
  }
  return s;
}

State MhdSolver::initialize_state_from_potential(const VectorField& u0, const VectorField& potential) const {
  State s = zero_state(disc_.layout());
  s.u = interpolate_velocity(u0);
  std::vector<double> a = interpolate_vector(disc_.mesh(), 1, potential);
  const auto& mask = disc_.edge_mask();
  for (std::size_t e = 0; e < a.size(); ++e) {
    if (mask[e]) a[e] = 0.0;
  }
  s.B = disc_.complex().C.apply(a);
  return s;
}

const linalg::BlockDiagonalPreconditioner& MhdSolver::preconditioner() const {
  if (!precond_) {
    precond_ = std::make_unique<linalg::BlockDiagonalPreconditioner>(
        build_block_preconditioner(disc_, *ops_, params_));
  }
  return *precond_;
}

std::vector<double> MhdSolver::solve(const BlockSystem& system, const LinearSolverOptions& options,
                                     LinearSolveInfo* info) const {
  std::vector<double> x;
  LinearSolveInfo local;
  if (options.kind == LinearSolverKind::direct) {
    x = linalg::sparse_lu_solve(system.matrix, system.rhs);
  } else {
    if (!system.symmetric) throw std::invalid_argument("solve: MINRES requires the symmetric scheme");
    const auto& M = preconditioner();
    const linalg::MinresResult r = linalg::minres(
        system.matrix, system.rhs, [&M](std::span<const double> in, std::span<double> out) { M.apply(in, out); },
        {options.tol, options.maxit});
    if (!r.converged) {
      std::ostringstream os;
      os << "MINRES did not converge in " << r.iterations << " iterations (relative residual "
         << r.relative_residual << ")";
      throw linalg::SingularMatrixError(os.str());
    }
    x = r.x;
    local.iterations = r.iterations;
  }
  local.residual = relative_residual(system.matrix, x, system.rhs);
  if (info != nullptr) *info = local;
  return x;
}

StepResult MhdSolver::step_linearized(Scheme scheme, const State& minus, const SourceData& sources,
                                      const LinearSolverOptions& options) const {
  StepResult out;
  const BlockSystem sys = assembler_->assemble(scheme, minus, minus, params_, sources, {}, &out.warnings);
  try {
    out.state = unpack(disc_.layout(), solve(sys, options, &out.solve));
  } catch (const linalg::SingularMatrixError& e) {
    std::ostringstream os;
    os << "step " << minus.step + 1 << " (" << scheme_name(scheme) << "): " << e.what();
    throw linalg::SingularMatrixError(os.str());
  }
  out.state.t = minus.t + params_.k;
  out.state.step = minus.step + 1;
  return out;
}

NonlinearStepResult MhdSolver::solve_nonlinear_step(NonlinearMethod method, const State& minus,
                                                    const SourceData& sources, const NonlinearOptions& options,
                                                    const State* initial) const {
  NonlinearStepResult out;
  State x = initial != nullptr ? *initial : minus;
  AssemblyOptions aopt;
  aopt.newton_convection = ConvectionForm::newton_skew;
  const Scheme scheme = method == NonlinearMethod::picard ? Scheme::picard : Scheme::newton;
  bool converged = false;
  for (int m = 0; m < options.maxit; ++m) {
    std::vector<Warning>* warn = (m == 0) ? &out.warnings : nullptr;
    const BlockSystem sys = assembler_->assemble(scheme, x, minus, params_, sources, aopt, warn);
    State next;
    try {
      next = unpack(disc_.layout(), solve(sys, {}));
    } catch (const linalg::SingularMatrixError& e) {
      std::ostringstream os;
      os << "step " << minus.step + 1 << ", " << method_name(method) << " iteration " << m + 1 << ": " << e.what();
      throw NonlinearSolveError(os.str(), out.increments);
    }
    const double xn = norms_->x_norm(next);
    const double dx = norms_->x_distance(next, x);
    const double inc = xn > 0 ? dx / xn : dx;
    out.increments.push_back(inc);
    out.inner_divb.push_back(divb_monitor(disc_, next.B).max_abs);
    x = std::move(next);
    out.iterations = m + 1;
    if (!std::isfinite(inc)) break;
    if (inc <= options.tol) {
      converged = true;
      break;
    }
  }
  x.t = minus.t + params_.k;
  x.step = minus.step + 1;
  if (!converged) {
    std::ostringstream os;
    os << "step " << minus.step + 1 << ": " << method_name(method) << " iteration did not converge in "
       << out.iterations << " iterations (last increment "
       << (out.increments.empty() ? 0.0 : out.increments.back()) << ")";
    throw NonlinearSolveError(os.str(), out.increments);
  }
  out.residual = nonlinear_residual(x, minus, sources);
  if (!(out.residual <= options.residual_tol)) {
    std::ostringstream os;
    os << "step " << minus.step + 1 << ": nonlinear residual " << out.residual << " exceeds "
       << options.residual_tol;
    throw NonlinearSolveError(os.str(), out.increments);
  }
  out.state = std::move(x);
  return out;
}

double MhdSolver::nonlinear_residual(const State& x, const State& old, const SourceData& sources) const {
  const BlockSystem sys = assembler_->assemble(Scheme::picard, x, old, params_, sources);
  const std::vector<double> xv = pack(disc_.layout(), x);
  std::vector<double> r = sys.matrix.multiply(xv);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] -= sys.rhs[i];
  const double scale = linalg::norm_inf(sys.rhs);
  return scale > 0 ? linalg::norm_inf(r) / scale : linalg::norm_inf(r);
}

}  // namespace mhd
