#include "mhd/solver/transient.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "mhd/cases.hpp"
#include "mhd/io/ledger_csv.hpp"
#include "mhd/io/vtk.hpp"
#include "mhd/linalg/direct.hpp"
#include "mhd/linalg/minres.hpp"

namespace mhd {

namespace fs = std::filesystem;

TransientError::TransientError(int step, const std::string& message)
    : std::runtime_error("step " + std::to_string(step) + ": " + message), step_(step) {}

State initial_state(const MhdSolver& solver, const RunConfig& cfg) {
  const Box& box = cfg.box;
  const bool with_u = cfg.initial == "trig" || cfg.initial == "velocity";
  const bool with_b = cfg.initial == "trig" || cfg.initial == "magnetic";
  const VectorField zero = [](const Vec3&) { return Vec3::Zero().eval(); };
  const VectorField u0 = with_u ? cases::trig_velocity(box, cfg.u_amplitude) : zero;
  const VectorField a0 = with_b ? cases::trig_potential(box, cfg.b_amplitude) : zero;
  return solver.initialize_state_from_potential(u0, a0);
}

SourceData run_sources(const Discretization& disc, const RunConfig& cfg) {
  SourceData s;
  if (cfg.source == "forced") s.f = cases::velocity_load(disc, cases::trig_forcing(cfg.box, cfg.source_amplitude));
  return s;
}

namespace {

double dot(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

// Work of the convection terms that are not skew in the new velocity.
double convection_work(const SystemAssembler& as, RunScheme scheme, const State& minus, const State& next) {
  if (scheme == RunScheme::symmetric) {
    return dot(next.u, as.convection(minus.u, ConvectionForm::skew).multiply(minus.u));
  }
  if (scheme == RunScheme::newton) {
    const auto lhs = as.convection(minus.u, ConvectionForm::newton).multiply(next.u);
    const auto rhs = as.convection(minus.u, ConvectionForm::advective).multiply(minus.u);
    double s = 0.0;
    for (std::size_t i = 0; i < lhs.size(); ++i) s += next.u[i] * (lhs[i] - rhs[i]);
    return s;
  }
  return 0.0;
}

std::string snapshot_name(const RunConfig& cfg, int step) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "_%04d.vtk", step);
  return cfg.vtk_prefix + buf;
}

}  // namespace

TransientResult run_transient(const RunConfig& cfg, const std::string& out_dir) {
  const Discretization disc(generate_structured_cube(cfg.n, cfg.box));
  const MhdSolver solver(disc, cfg.params);
  const SourceData sources = run_sources(disc, cfg);
  EnergyLedger ledger(disc, solver.operators(), cfg.params);

  TransientResult out;
  const bool write = !out_dir.empty();
  fs::path dir(out_dir);
  if (write) fs::create_directories(dir);
  const auto snapshot = [&](const State& s) {
    if (!write || cfg.vtk_stride <= 0 || s.step % cfg.vtk_stride != 0) return;
    const fs::path p = dir / snapshot_name(cfg, s.step);
    write_vtk(p.string(), disc, s);
    out.summary.files.push_back(p.string());
  };
  const auto flush_ledger = [&]() {
    if (!write) return;
    const fs::path p = dir / cfg.ledger;
    if (p.has_parent_path()) fs::create_directories(p.parent_path());
    // One row per step; the initial record only seeds the accumulated bound.
    write_ledger_csv(p.string(), std::span(ledger.records()).subspan(1));
    out.summary.files.push_back(p.string());
  };

  State state = initial_state(solver, cfg);
  ledger.start(state);
  snapshot(state);

  const auto track_divb = [&](const State& s) {
    const double bmax = linalg::norm_inf(s.B);
    const double d = divb_monitor(disc, s.B).max_abs;
    if (bmax > 0) out.summary.max_divb_relative = std::max(out.summary.max_divb_relative, d / bmax);
  };
  track_divb(state);

  for (int n = 1; n <= cfg.steps; ++n) {
    try {
      State next;
      std::vector<Warning> warnings;
      std::vector<double> beta;
      double conv = 0.0;
      switch (cfg.scheme) {
        case RunScheme::picard:
        case RunScheme::symmetric:
        case RunScheme::newton: {
          const Scheme s = cfg.scheme == RunScheme::picard      ? Scheme::picard
                           : cfg.scheme == RunScheme::symmetric ? Scheme::symmetric
                                                                : Scheme::newton;
          StepResult r = solver.step_linearized(s, state, sources, cfg.solver);
          next = std::move(r.state);
          warnings = std::move(r.warnings);
          beta = state.B;
          conv = convection_work(solver.assembler(), cfg.scheme, state, next);
          break;
        }
        case RunScheme::nonlinear_picard:
        case RunScheme::nonlinear_newton: {
          const NonlinearMethod m =
              cfg.scheme == RunScheme::nonlinear_picard ? NonlinearMethod::picard : NonlinearMethod::newton;
          NonlinearStepResult r = solver.solve_nonlinear_step(m, state, sources, cfg.nonlinear);
          next = std::move(r.state);
          warnings = std::move(r.warnings);
          out.summary.nonlinear_iterations.push_back(r.iterations);
          beta = next.B;
          break;
        }
      }
      for (Warning& w : warnings) out.summary.warnings.push_back({n, std::move(w)});
      ledger.add_step(state, next, beta, sources, conv);
      track_divb(next);
      state = std::move(next);
      snapshot(state);
    } catch (const std::exception& e) {
      flush_ledger();
      throw TransientError(n, e.what());
    }
  }
  flush_ledger();

  out.summary.steps = cfg.steps;
  out.summary.max_divb = ledger.max_divb();
  out.summary.min_step_margin_relative = ledger.min_step_margin_relative();
  out.summary.min_bound_margin_relative = ledger.min_bound_margin_relative();
  out.summary.max_identity_residual_relative = ledger.max_identity_residual_relative();
  out.summary.energy_monotone = ledger.energy_non_increasing();
  out.ledger = ledger.records();
  out.final_state = std::move(state);
  return out;
}

PreconditionerBenchRow preconditioner_bench(const RunConfig& cfg, int n) {
  const Discretization disc(generate_structured_cube(n, cfg.box));
  const MhdSolver solver(disc, cfg.params);
  const State s0 = initial_state(solver, cfg);
  const BlockSystem sys = solver.assembler().symmetric_picard(s0, cfg.params, run_sources(disc, cfg));

  PreconditionerBenchRow row;
  row.n = n;
  row.unknowns = sys.matrix.rows();
  const auto& M = solver.preconditioner();
  const linalg::MinresResult r = linalg::minres(
      sys.matrix, sys.rhs, [&M](std::span<const double> in, std::span<double> out) { M.apply(in, out); },
      {cfg.solver.tol, cfg.solver.maxit});
  row.iterations = r.iterations;
  row.converged = r.converged;
  std::vector<double> res = sys.matrix.multiply(r.x);
  for (std::size_t i = 0; i < res.size(); ++i) res[i] -= sys.rhs[i];
  const double bn = linalg::norm2(sys.rhs);
  row.relative_residual = bn > 0 ? linalg::norm2(res) / bn : linalg::norm2(res);
  const std::vector<double> xd = linalg::sparse_lu_solve(sys.matrix, sys.rhs);
  double diff = 0.0;
  for (std::size_t i = 0; i < xd.size(); ++i) diff = std::max(diff, std::abs(xd[i] - r.x[i]));
  const double scale = linalg::norm_inf(xd);
  row.max_coefficient_difference = scale > 0 ? diff / scale : diff;
  const State a = unpack(disc.layout(), r.x);
  const State b = unpack(disc.layout(), xd);
  std::vector<double> dp(a.p.size());
  for (std::size_t i = 0; i < dp.size(); ++i) dp[i] = a.p[i] - b.p[i];
  const WeightedNorms& N = solver.norms();
  const double dx = N.x_distance(a, b);
  const double xn = N.x_norm(b);
  const double num = std::sqrt(dx * dx + N.p_squared(dp));
  const double den = std::sqrt(xn * xn + N.p_squared(b.p));
  row.difference_to_direct = den > 0 ? num / den : num;
  return row;
}

}  // namespace mhd
