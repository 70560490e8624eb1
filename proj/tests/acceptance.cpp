// Acceptance checks: one PASS/FAIL line per criterion. Reference quantities
// are computed here from coordinates, quadrature and dense oracles.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <string>
#include <vector>

#include <Eigen/Sparse>

#include "mhd/assembly/fields.hpp"
#include "mhd/assembly/preconditioner.hpp"
#include "mhd/cases.hpp"
#include "mhd/diagnostics/energy.hpp"
#include "mhd/diagnostics/manufactured.hpp"
#include "mhd/linalg/direct.hpp"
#include "mhd/linalg/minres.hpp"
#include "mhd/solver/transient.hpp"
#include "support.hpp"

using namespace mhd;
using testing::integrate;
using testing::Vec3;

namespace {

struct Outcome {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail += (detail.empty() ? "" : "; ") + std::string("failed: ") + what;
    }
  }
  void note(const std::string& s) { detail += (detail.empty() ? "" : "; ") + s; }
};

std::string fmt(const char* f, double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, f, v);
  return buf;
}

// Relative Gauss-law defect max_T |div B| / |b|_inf from geometric outward signs.
double gauss_defect(const TetMesh& mesh, std::span<const double> b) {
  const double scale = testing::max_abs(b);
  const double d = testing::max_abs(testing::geometric_div(mesh, b));
  return scale > 0 ? d / scale : d;
}

Eigen::SparseMatrix<double> to_eigen(const linalg::SparseMatrix& a) {
  std::vector<Eigen::Triplet<double>> t;
  for (int i = 0; i < a.rows(); ++i) {
    for (int p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) t.emplace_back(i, a.col_idx()[p], a.values()[p]);
  }
  Eigen::SparseMatrix<double> m(a.rows(), a.cols());
  m.setFromTriplets(t.begin(), t.end());
  return m;
}

double l2_velocity_sq(const Discretization& disc, std::span<const double> u) {
  return integrate(disc, 4, [&](const ElementContext& c, int q) { return velocity_at(c, u, q).squaredNorm(); });
}
double l2_face_sq(const Discretization& disc, std::span<const double> b) {
  return integrate(disc, 4, [&](const ElementContext& c, int q) { return face_field_at(c, b, q).squaredNorm(); });
}
double grad_sq(const Discretization& disc, std::span<const double> u) {
  return integrate(disc, 4, [&](const ElementContext& c, int q) { return velocity_gradient_at(c, u, q).squaredNorm(); });
}
double current_sq(const Discretization& disc, std::span<const double> u, std::span<const double> e,
                  std::span<const double> beta) {
  return integrate(disc, 6, [&](const ElementContext& c, int q) {
    return (edge_field_at(c, e, q) + velocity_at(c, u, q).cross(face_field_at(c, beta, q))).squaredNorm();
  });
}

// 1. Exactness and ranks of the incidence complex.
Outcome exactness_and_ranks() {
  Outcome o;
  const auto t0 = std::chrono::steady_clock::now();
  for (int n : {1, 2, 3}) {
    const DeRhamComplex dc = build_complex(generate_structured_cube(n));
    const bool cg = product(dc.C, dc.G).nnz() == 0 || testing::dense(product(dc.C, dc.G)).isZero();
    const bool dcz = product(dc.D, dc.C).nnz() == 0 || testing::dense(product(dc.D, dc.C)).isZero();
    o.require(cg && dcz, "library CG = 0, DC = 0 on n = " + std::to_string(n));
    matrix_rank(dc.G);
    matrix_rank(dc.C);
    matrix_rank(dc.D);
  }
  const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  o.require(elapsed < 1.0, "library checks on n = 1..3 within 1 s");
  o.note("library time " + fmt("%.3f s", elapsed));

  for (int n : {1, 2, 3}) {
    const TetMesh mesh = generate_structured_cube(n);
    const DeRhamComplex dc = build_complex(mesh);
    const Eigen::MatrixXi G = testing::dense(dc.G), C = testing::dense(dc.C), D = testing::dense(dc.D);
    o.require((C * G).isZero() && (D * C).isZero(), "dense oracle CG = 0, DC = 0 on n = " + std::to_string(n));
    const int rG = testing::modular_rank(G), rC = testing::modular_rank(C), rD = testing::modular_rank(D);
    const int V = mesh.num_vertices(), E = mesh.num_edges(), F = mesh.num_faces(), T = mesh.num_tets();
    o.require(rG == V - 1 && rC == E - rG && rD == F - rC && rD == T, "exact ranks on n = " + std::to_string(n));
    o.require(matrix_rank(dc.G) == rG && matrix_rank(dc.C) == rC && matrix_rank(dc.D) == rD,
              "library ranks equal oracle ranks on n = " + std::to_string(n));
    if (n == 1) {
      o.require(rG == 7 && rC == 12 && rD == 6, "ranks 7/12/6 on n = 1");
      o.note("n=1 ranks " + std::to_string(rG) + "/" + std::to_string(rC) + "/" + std::to_string(rD));
    }
  }
  return o;
}

// 2. Gauss law for every scheme, checked at every step.
Outcome gauss_law() {
  Outcome o;
  RunConfig cfg;
  cfg.n = 4;
  cfg.steps = 10;
  const Discretization disc(generate_structured_cube(cfg.n, cfg.box));
  const MhdSolver solver(disc, cfg.params);
  const SourceData src = run_sources(disc, cfg);
  double worst = 0.0;
  for (RunScheme rs : {RunScheme::picard, RunScheme::symmetric, RunScheme::newton, RunScheme::nonlinear_picard,
                       RunScheme::nonlinear_newton}) {
    State s = initial_state(solver, cfg);
    double scheme_worst = gauss_defect(disc.mesh(), s.B);
    for (int step = 1; step <= cfg.steps; ++step) {
      switch (rs) {
        case RunScheme::picard: s = solver.step_linearized(Scheme::picard, s, src).state; break;
        case RunScheme::symmetric: s = solver.step_linearized(Scheme::symmetric, s, src).state; break;
        case RunScheme::newton: s = solver.step_linearized(Scheme::newton, s, src).state; break;
        case RunScheme::nonlinear_picard:
          s = solver.solve_nonlinear_step(NonlinearMethod::picard, s, src, cfg.nonlinear).state;
          break;
        case RunScheme::nonlinear_newton:
          s = solver.solve_nonlinear_step(NonlinearMethod::newton, s, src, cfg.nonlinear).state;
          break;
      }
      scheme_worst = std::max(scheme_worst, gauss_defect(disc.mesh(), s.B));
    }
    o.require(scheme_worst <= 1e-12, std::string(run_scheme_name(rs)) + " Gauss law");
    worst = std::max(worst, scheme_worst);
  }
  o.note("max_T |div B| / |b|_inf over 5 schemes x 10 steps = " + fmt("%.3g", worst));
  return o;
}

// Forced Picard run shared by criteria 3 and 4.
struct ForcedRun {
  std::vector<State> states;
  SourceData src;
  Params params;
};

ForcedRun forced_picard_run(const Discretization& disc, double amplitude, int steps) {
  RunConfig cfg;
  cfg.n = 4;
  cfg.source = amplitude > 0 ? "forced" : "none";
  cfg.source_amplitude = amplitude;
  ForcedRun r;
  r.params = cfg.params;
  const MhdSolver solver(disc, cfg.params);
  r.src = run_sources(disc, cfg);
  r.states.push_back(initial_state(solver, cfg));
  for (int i = 0; i < steps; ++i) r.states.push_back(solver.step_linearized(Scheme::picard, r.states.back(), r.src).state);
  return r;
}

// 3. Discrete energy identity of the Picard scheme, all terms by quadrature.
Outcome energy_identity(const Discretization& disc, const ForcedRun& run) {
  Outcome o;
  const Params& P = run.params;
  double worst = 0.0;
  for (std::size_t n = 1; n < run.states.size(); ++n) {
    const State& a = run.states[n - 1];
    const State& b = run.states[n];
    std::vector<double> du(b.u.size()), dB(b.B.size());
    for (std::size_t i = 0; i < du.size(); ++i) du[i] = b.u[i] - a.u[i];
    for (std::size_t i = 0; i < dB.size(); ++i) dB[i] = b.B[i] - a.B[i];
    const double t1 = integrate(disc, 4, [&](const ElementContext& c, int q) {
      return velocity_at(c, du, q).dot(velocity_at(c, b.u, q));
    }) / P.k;
    const double t2 = P.S / P.Rm * integrate(disc, 4, [&](const ElementContext& c, int q) {
      return face_field_at(c, dB, q).dot(face_field_at(c, b.B, q));
    }) / P.k;
    const double t3 = grad_sq(disc, b.u) / P.Re;
    const double t4 = P.S * current_sq(disc, b.u, b.E, a.B);
    const double t5 = P.grad_div ? P.S / P.Rm * integrate(disc, 4, [&](const ElementContext& c, int q) {
      const double d = face_div_at(c, b.B, q);
      return d * d;
    }) : 0.0;
    const double t6 = testing::dot(run.src.f, b.u);
    const double res = t1 + t2 + t3 + t4 + t5 - t6;
    const double scale = std::abs(t1) + std::abs(t2) + std::abs(t3) + std::abs(t4) + std::abs(t5) + std::abs(t6);
    worst = std::max(worst, std::abs(res) / scale);
  }
  o.require(worst <= 1e-10, "identity residual <= 1e-10 relative");
  o.note("20 forced Picard steps on n=4, max relative residual " + fmt("%.3g", worst));
  return o;
}

// 4. Accumulated energy bound under forcing and monotone energy without it.
Outcome energy_bounds(const Discretization& disc, const ForcedRun& forced, const ForcedRun& free_run) {
  Outcome o;
  const Params& P = forced.params;
  const OperatorSet ops = assemble_operators(disc);

  // |f|_{-1}^2 = f_I^T A_II^{-1} f_I with A the vector Laplacian.
  const auto& mask = disc.velocity_mask();
  std::vector<int> interior;
  for (int i = 0; i < static_cast<int>(mask.size()); ++i) {
    if (!mask[i]) interior.push_back(i);
  }
  const Eigen::SparseMatrix<double> A = to_eigen(ops.stiffness_u);
  std::vector<int> pos(mask.size(), -1);
  for (std::size_t i = 0; i < interior.size(); ++i) pos[interior[i]] = static_cast<int>(i);
  std::vector<Eigen::Triplet<double>> trip;
  for (int col = 0; col < A.outerSize(); ++col) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(A, col); it; ++it) {
      if (pos[it.row()] >= 0 && pos[it.col()] >= 0) trip.emplace_back(pos[it.row()], pos[it.col()], it.value());
    }
  }
  Eigen::SparseMatrix<double> AI(interior.size(), interior.size());
  AI.setFromTriplets(trip.begin(), trip.end());
  Eigen::SimplicialLDLT<Eigen::SparseMatrix<double>> ldlt(AI);
  Eigen::VectorXd fI(interior.size());
  for (std::size_t i = 0; i < interior.size(); ++i) fI[i] = forced.src.f[interior[i]];
  const double f_dual_sq = fI.dot(ldlt.solve(fI));

  const auto energy = [&](const State& s) { return l2_velocity_sq(disc, s.u) + P.S / P.Rm * l2_face_sq(disc, s.B); };
  const double e0 = energy(forced.states[0]);
  double dissipation = 0.0, max_left = e0, worst = 1e300;
  EnergyLedger ledger(disc, ops, P);
  ledger.start(forced.states[0]);
  for (std::size_t n = 1; n < forced.states.size(); ++n) {
    const State& s = forced.states[n];
    ledger.add_step(forced.states[n - 1], s, forced.states[n - 1].B, forced.src);
    dissipation += P.k / P.Re * grad_sq(disc, s.u) + 2.0 * P.k * P.S * current_sq(disc, s.u, s.E, forced.states[n - 1].B);
    max_left = std::max(max_left, energy(s) + dissipation);
    const double rhs = e0 + P.k * P.Re * static_cast<double>(n) * f_dual_sq;
    worst = std::min(worst, (rhs - max_left) / rhs);
  }
  o.require(worst >= -1e-9, "accumulated bound margin >= -1e-9 (test side)");
  o.require(ledger.min_bound_margin_relative() >= -1e-9, "accumulated bound margin >= -1e-9 (ledger)");
  o.note("min relative margin " + fmt("%.4g", worst) + " (ledger " + fmt("%.4g", ledger.min_bound_margin_relative()) + ")");

  double prev = energy(free_run.states[0]);
  bool monotone = true;
  for (std::size_t n = 1; n < free_run.states.size(); ++n) {
    const double e = energy(free_run.states[n]);
    if (e > prev * (1.0 + 1e-12)) monotone = false;
    prev = e;
  }
  o.require(monotone, "energy non-increasing without forcing");
  o.note("unforced energy " + fmt("%.6g", energy(free_run.states[0])) + " -> " + fmt("%.6g", prev));
  return o;
}

// 5. The skew-symmetric form gives d(u, u) = |grad u|^2 / Re.
Outcome skew_identity() {
  Outcome o;
  const Discretization disc(generate_structured_cube(2));
  const OperatorSet ops = assemble_operators(disc);
  const SystemAssembler as(disc, ops);
  const int nu = disc.layout().n_u;
  const double Re = 3.0;
  double worst = 0.0;
  for (std::uint32_t trial = 0; trial < 100; ++trial) {
    const auto w = testing::random_vector(nu, 1000 + trial);
    const auto u = testing::random_interior(disc.velocity_mask(), 5000 + trial);
    const auto Nu = as.convection(w, ConvectionForm::skew).multiply(u);
    const auto Au = ops.stiffness_u.multiply(u);
    const double d = testing::dot(u, Au) / Re + testing::dot(u, Nu);
    const double exact = grad_sq(disc, u) / Re;
    worst = std::max(worst, std::abs(d - exact) / exact);
  }
  o.require(worst <= 1e-12, "d(u,u) = |grad u|^2 / Re to 1e-12");
  o.note("100 random pairs on n=2, max relative deviation " + fmt("%.3g", worst));
  return o;
}

// 6. Commuting diagram against exact edge, face and cell rules.
Outcome commuting_diagram() {
  Outcome o;
  auto phi = [](const Vec3& x) { return x.x() * x.y() * x.z() - 0.5 * x.y() * x.y() + x.x(); };
  auto grad_phi = [](const Vec3& x) { return Vec3(x.y() * x.z() + 1.0, x.x() * x.z() - x.y(), x.x() * x.y()); };
  auto E = [](const Vec3& x) { return Vec3(x.y() * x.z(), x.x() * x.x() - x.z(), x.y() * x.y() + x.x()); };
  auto curl_E = [](const Vec3& x) { return Vec3(2 * x.y() + 1.0, x.y() - 1.0, 2 * x.x() - x.z()); };
  auto B = [](const Vec3& x) { return Vec3(x.x() * x.y(), x.z() * x.z() + x.y(), x.x() * x.z() - x.y() * x.y()); };
  auto div_B = [](const Vec3& x) { return x.y() + 1.0 + x.x(); };
  double worst = 0.0;
  for (int n : {1, 2, 3}) {
    const TetMesh mesh = generate_structured_cube(n, Box{1.0, 0.8, 1.2});
    const DeRhamComplex dc = build_complex(mesh);
    const auto g = dc.G.apply(interpolate_scalar(mesh, 0, phi));
    for (int e = 0; e < mesh.num_edges(); ++e) worst = std::max(worst, std::abs(g[e] - testing::simpson_circulation(mesh, e, grad_phi)));
    const auto c = dc.C.apply(interpolate_vector(mesh, 1, E));
    for (int f = 0; f < mesh.num_faces(); ++f) worst = std::max(worst, std::abs(c[f] - testing::midpoint_flux(mesh, f, curl_E)));
    const auto d = dc.D.apply(interpolate_vector(mesh, 2, B));
    const auto avg = interpolate_scalar(mesh, 3, div_B);
    for (int t = 0; t < mesh.num_tets(); ++t) {
      const Vec3 x = testing::tet_centroid(mesh, t);
      const auto& v = mesh.tets[t];
      const double vol = std::abs(testing::signed_volume(mesh.vertices[v[0]], mesh.vertices[v[1]],
                                                         mesh.vertices[v[2]], mesh.vertices[v[3]]));
      // div B is linear, so its cell integral is |T| times the centroid value.
      worst = std::max(worst, std::abs(d[t] - vol * div_B(x)));
      worst = std::max(worst, std::abs(avg[t] - div_B(x)));
    }
  }
  o.require(worst <= 1e-12, "grad, curl, div squares commute to 1e-12");
  o.note("n = 1..3 on a 1 x 0.8 x 1.2 box, max defect " + fmt("%.3g", worst));
  return o;
}

// 7. Grad-div augmentation is invisible for compliant data and detects
// non-compliant data.
Outcome grad_div_equivalence() {
  Outcome o;
  const Box box;
  const Discretization disc(generate_structured_cube(3, box));
  Params with = Params{}, without = Params{};
  without.grad_div = false;
  const MhdSolver sa(disc, with), sn(disc, without);
  const State minus = sa.initialize_state_from_potential(cases::trig_velocity(box, 1.0), cases::trig_potential(box, 1.0));
  const auto& MB = sa.operators().mass_B;

  SourceData ok;
  ok.l = MB.multiply(disc.complex().C.apply(testing::random_interior(disc.edge_mask(), 77)));
  const State a = sa.step_linearized(Scheme::picard, minus, ok).state;
  const State b = sn.step_linearized(Scheme::picard, minus, ok).state;
  const double rel = sa.norms().x_distance(a, b) / sa.norms().x_norm(a);
  o.require(rel <= 1e-8, "compliant data: augmented and plain solutions agree to 1e-8");
  o.require(gauss_defect(disc.mesh(), a.B) <= 1e-12 && gauss_defect(disc.mesh(), b.B) <= 1e-12,
            "compliant data keep div B = 0");
  std::vector<Warning> ws;
  o.require(check_source_compliance(disc, minus.B, b.B, &ws) && ws.empty(), "compliant data pass the check");
  o.note("compliant X-distance " + fmt("%.3g", rel));

  const auto y = testing::random_interior(disc.face_mask(), 78);
  o.require(testing::max_abs(testing::geometric_div(disc.mesh(), y)) > 1e-3, "test source has D y != 0");
  SourceData bad;
  bad.l = MB.multiply(y);
  const State c = sa.step_linearized(Scheme::picard, minus, bad).state;
  const State d = sn.step_linearized(Scheme::picard, minus, bad).state;
  const double rel_bad = sa.norms().x_distance(c, d) / sa.norms().x_norm(c);
  const double div_plain = gauss_defect(disc.mesh(), d.B);
  const double div_aug = gauss_defect(disc.mesh(), c.B);
  o.require(rel_bad > 1e-6, "non-compliant data: solutions differ");
  o.require(div_plain > 1e-8, "non-compliant data: plain solve has div B != 0");
  ws.clear();
  const bool flagged = !check_source_compliance(disc, minus.B, d.B, &ws) && !ws.empty() &&
                       ws[0].kind == Warning::Kind::noncompliant_source;
  o.require(flagged, "non-compliant data are reported");
  o.note("non-compliant X-distance " + fmt("%.3g", rel_bad) + ", relative div B plain " + fmt("%.3g", div_plain) +
         ", augmented " + fmt("%.3g", div_aug));
  return o;
}

// 8. Newton: restart, superlinear increments, agreement with Picard.
Outcome newton_convergence() {
  Outcome o;
  const Box box;
  const Discretization disc(generate_structured_cube(2, box));
  const MhdSolver solver(disc, Params{1.0, 1.0, 1.0, 0.01, true});
  const State minus =
      solver.initialize_state_from_potential(cases::trig_velocity(box, 5.0), cases::trig_potential(box, 5.0));
  NonlinearOptions opts;
  opts.tol = 1e-12;
  opts.maxit = 200;
  const auto nw = solver.solve_nonlinear_step(NonlinearMethod::newton, minus, {}, opts);
  const auto pc = solver.solve_nonlinear_step(NonlinearMethod::picard, minus, {}, opts);

  int pairs = 0;
  bool superlinear = true;
  for (std::size_t m = 0; m + 1 < nw.increments.size(); ++m) {
    if (nw.increments[m] <= 1e-2 && nw.increments[m] > 1e-14) {
      ++pairs;
      if (nw.increments[m + 1] > std::pow(nw.increments[m], 1.3)) superlinear = false;
    }
  }
  o.require(pairs >= 2 && superlinear, "increments decay with exponent 1.3 once below 1e-2");
  std::string hist;
  for (double e : nw.increments) hist += (hist.empty() ? "" : ",") + fmt("%.1e", e);
  o.note("newton increments " + hist);

  const double agree = solver.norms().x_distance(nw.state, pc.state) / solver.norms().x_norm(nw.state);
  o.require(agree <= 1e-6, "Picard and Newton limits agree to 1e-6");
  o.note("picard iterations " + std::to_string(pc.iterations) + ", limit distance " + fmt("%.2g", agree));

  State start = nw.state;
  start.t = minus.t;
  start.step = minus.step;
  const auto again = solver.solve_nonlinear_step(NonlinearMethod::newton, minus, {}, NonlinearOptions{}, &start);
  o.require(again.iterations == 1 && again.increments[0] <= 1e-8, "restart converges in one iteration");
  o.note("restart increment " + fmt("%.2g", again.increments[0]));
  return o;
}

// 9. Symmetric scheme: symmetry and mesh-robust preconditioned MINRES.
Outcome symmetric_minres() {
  Outcome o;
  RunConfig cfg;
  std::vector<int> iterations;
  for (int n : {2, 4}) {
    const Discretization disc(generate_structured_cube(n, cfg.box));
    const MhdSolver solver(disc, cfg.params);
    const State s0 = initial_state(solver, cfg);
    const BlockSystem sys = solver.assembler().symmetric_picard(s0, cfg.params, run_sources(disc, cfg));
    const Eigen::SparseMatrix<double> A = to_eigen(sys.matrix);
    const Eigen::SparseMatrix<double> At = A.transpose();
    const double asym = Eigen::SparseMatrix<double>(A - At).coeffs().cwiseAbs().maxCoeff();
    const double amax = A.coeffs().cwiseAbs().maxCoeff();
    o.require(asym <= 1e-12 * amax, "matrix symmetric to 1e-12 on n = " + std::to_string(n));

    const auto& M = solver.preconditioner();
    const linalg::MinresResult r = linalg::minres(
        sys.matrix, sys.rhs, [&M](std::span<const double> in, std::span<double> out) { M.apply(in, out); },
        {1e-8, 5000});
    o.require(r.converged, "MINRES reaches 1e-8 on n = " + std::to_string(n));
    iterations.push_back(r.iterations);

    const std::vector<double> xd = linalg::sparse_lu_solve(sys.matrix, sys.rhs);
    const State a = unpack(disc.layout(), r.x), b = unpack(disc.layout(), xd);
    const WeightedNorms& N = solver.norms();
    const double dx = N.x_distance(a, b) / N.x_norm(b);
    o.require(dx <= 1e-7, "MINRES agrees with LU to 1e-7 in the X norm on n = " + std::to_string(n));
    o.note("n=" + std::to_string(n) + ": asym " + fmt("%.2g", asym / amax) + ", " + std::to_string(r.iterations) +
           " its, X diff " + fmt("%.2g", dx));
  }
  const double ratio = static_cast<double>(std::max(iterations[0], iterations[1])) / std::min(iterations[0], iterations[1]);
  o.require(ratio <= 1.5, "iteration counts within 50%");
  return o;
}

// 10. Patch tests and convergence of B.
Outcome patch_tests() {
  Outcome o;
  double worst = 0.0;
  for (int n : {2, 3}) {
    const Discretization disc(generate_structured_cube(n, Box{1.0, 0.9, 1.1}));
    const DofLayout& L = disc.layout();
    const Params P{2.0, 0.5, 1.5, 0.05, true};
    const MhdSolver solver(disc, P);
    const auto& C = disc.complex().C;

    State minus = zero_state(L);
    minus.u = testing::random_interior(disc.velocity_mask(), 11 + n);
    minus.E = testing::random_vector(L.n_E, 12 + n);
    minus.B = C.apply(testing::random_interior(disc.edge_mask(), 13 + n));

    State exact = zero_state(L);
    exact.u = testing::random_interior(disc.velocity_mask(), 21 + n);
    exact.E = testing::random_interior(disc.edge_mask(), 22 + n);
    exact.B = C.apply(testing::random_interior(disc.edge_mask(), 23 + n));
    exact.p = testing::random_vector(L.n_p, 24 + n);
    double mean = 0.0;
    for (int i = 0; i < L.n_p; ++i) mean += solver.operators().p_integrals[i] * exact.p[i];
    mean /= disc.domain_volume();
    for (double& v : exact.p) v -= mean;

    const BlockSystem sys0 = solver.assembler().picard(minus, P, {});
    const auto x = pack(L, exact);
    auto s = sys0.matrix.multiply(x);
    for (std::size_t i = 0; i < s.size(); ++i) s[i] -= sys0.rhs[i];
    SourceData src;
    src.f.assign(s.begin() + L.off_u, s.begin() + L.off_u + L.n_u);
    src.r.assign(s.begin() + L.off_E, s.begin() + L.off_E + L.n_E);
    src.l.assign(s.begin() + L.off_B, s.begin() + L.off_B + L.n_B);
    src.g.assign(s.begin() + L.off_p, s.begin() + L.off_p + L.n_p);
    for (double& v : src.g) v = -v;
    o.require(std::abs(s[L.off_lambda]) <= 1e-12, "mean-pressure row is consistent");

    const auto got = pack(L, solver.step_linearized(Scheme::picard, minus, src).state);
    double err = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) err = std::max(err, std::abs(got[i] - x[i]));
    worst = std::max(worst, err / testing::max_abs(x));
  }
  o.require(worst <= 1e-10, "random discrete states reproduced to 1e-10");
  o.note("random discrete patch error " + fmt("%.2g", worst));

  const Box box;
  const ManufacturedCase mc = manufactured_case("patch", box);
  double hydro = 0.0;
  for (int n : {2, 3}) {
    const Discretization disc(generate_structured_cube(n, box));
    const ManufacturedErrors e = manufactured_solve(disc, Params{}, mc);
    hydro = std::max({hydro, e.u_l2, e.u_h1, e.E_l2, e.B_l2, e.p_l2});
  }
  o.require(hydro <= 1e-10, "hydrostatic patch reproduced to 1e-10");
  o.note("hydrostatic patch error " + fmt("%.2g", hydro));

  const std::vector<int> sizes{2, 4};
  const ConvergenceTable t = manufactured_convergence("trig", sizes, box, Params{});
  o.require(t.orders.size() == 1 && t.orders[0].B_l2 >= 0.8, "trig B order >= 0.8");
  o.note("trig B L2 order " + fmt("%.3f", t.orders.empty() ? 0.0 : t.orders[0].B_l2));
  return o;
}

// 11. Step-size warning at the analytic threshold.
Outcome step_size_warning() {
  Outcome o;
  const Box box;
  const Discretization disc(generate_structured_cube(3, box));
  const double b0 = 10.0;
  for (double S : {1.0, 2.0}) {
    const double threshold = 1.0 / (8.0 * S * b0 * b0);
    for (double factor : {1.1, 0.9}) {
      const Params P{1.0, 1.0, S, factor * threshold, true};
      const MhdSolver solver(disc, P);
      State minus = zero_state(disc.layout());
      minus.u = solver.interpolate_velocity(cases::trig_velocity(box, 1.0));
      minus.B = interpolate_vector(disc.mesh(), 2, [&](const Vec3&) { return Vec3(b0, 0, 0); });
      const double lib = solver.assembler().step_size_threshold(minus.B, P);
      o.require(std::abs(lib - threshold) <= 1e-12 * threshold, "library threshold equals 1/(8 S |B|^2)");
      const StepResult r = solver.step_linearized(Scheme::picard, minus, {});
      bool warned = false;
      for (const auto& w : r.warnings) warned = warned || w.kind == Warning::Kind::step_size_bound;
      const std::string tag = "S=" + fmt("%g", S) + " k=" + fmt("%g", factor) + "x";
      o.require(warned == (factor > 1.0), "warning fires exactly above the threshold (" + tag + ")");
      if (factor < 1.0) {
        const BlockSystem sys = solver.assembler().picard(minus, P, {});
        const auto x = pack(disc.layout(), r.state);
        auto res = sys.matrix.multiply(x);
        for (std::size_t i = 0; i < res.size(); ++i) res[i] -= sys.rhs[i];
        double anorm = 0.0;
        for (int i = 0; i < sys.matrix.rows(); ++i) {
          double row = 0.0;
          for (int p = sys.matrix.row_ptr()[i]; p < sys.matrix.row_ptr()[i + 1]; ++p) row += std::abs(sys.matrix.values()[p]);
          anorm = std::max(anorm, row);
        }
        const double rel = testing::max_abs(res) / (anorm * testing::max_abs(x) + testing::max_abs(sys.rhs));
        o.require(rel <= 1e-10, "solve residual below the threshold (" + tag + ")");
        o.note(tag + " residual " + fmt("%.2g", rel));
      }
    }
  }
  return o;
}

}  // namespace

int main() {
  int failures = 0;
  auto report = [&](int id, const char* name, const std::function<Outcome()>& check) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = check();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    if (!o.pass) ++failures;
    std::printf("%s %2d %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", id, name, o.detail.c_str(), secs);
    std::fflush(stdout);
  };

  report(1, "complex exactness and ranks", exactness_and_ranks);
  report(2, "Gauss law for all schemes", gauss_law);
  {
    const Discretization disc(generate_structured_cube(4));
    ForcedRun forced, free_run;
    bool ok = true;
    std::string why;
    try {
      forced = forced_picard_run(disc, 10.0, 20);
      free_run = forced_picard_run(disc, 0.0, 20);
    } catch (const std::exception& e) {
      ok = false;
      why = e.what();
    }
    auto guarded = [&](std::function<Outcome()> f) {
      return [=]() {
        if (!ok) {
          Outcome o;
          o.pass = false;
          o.note("forced run failed: " + why);
          return o;
        }
        return f();
      };
    };
    report(3, "discrete energy identity", guarded([&] { return energy_identity(disc, forced); }));
    report(4, "energy bounds", guarded([&] { return energy_bounds(disc, forced, free_run); }));
  }
  report(5, "skew convection identity", skew_identity);
  report(6, "commuting diagram", commuting_diagram);
  report(7, "grad-div equivalence and compliance", grad_div_equivalence);
  report(8, "Newton convergence", newton_convergence);
  report(9, "symmetric scheme and MINRES", symmetric_minres);
  report(10, "patch tests", patch_tests);
  report(11, "step-size warning", step_size_warning);
  std::printf("%d of 11 criteria passed\n", 11 - failures);
  return failures == 0 ? 0 : 1;
}
