#include <doctest.h>

#include <cmath>

#include "mhd/assembly/fields.hpp"
#include "mhd/cases.hpp"
#include "mhd/diagnostics/energy.hpp"
#include "mhd/diagnostics/manufactured.hpp"
#include "mhd/diagnostics/norms.hpp"
#include "mhd/solver/transient.hpp"
#include "support.hpp"

using namespace mhd;
using testing::integrate;
using testing::Vec3;

namespace {

// Step-size warnings are expected for the strong frozen fields used here.
bool structural_warnings(const std::vector<Warning>& ws) {
  for (const auto& w : ws) {
    if (w.kind == Warning::Kind::noncompliant_source || w.kind == Warning::Kind::divergence_violation) return true;
  }
  return false;
}

}  // namespace

TEST_CASE("weighted norms") {
  const Discretization disc(generate_structured_cube(1));
  const OperatorSet ops = assemble_operators(disc);
  const double k = 0.02;
  const WeightedNorms norms(ops, k);
  const DofLayout& L = disc.layout();

  const NormRecord z = norms.compute(zero_state(L));
  CHECK(z.u == 0.0);
  CHECK(z.E == 0.0);
  CHECK(z.B == 0.0);
  CHECK(z.p == 0.0);
  CHECK(z.X == 0.0);

  const auto u = testing::random_vector(L.n_u, 1);
  const auto e = testing::random_vector(L.n_E, 2);
  const auto b = testing::random_vector(L.n_B, 3);
  const auto p = testing::random_vector(L.n_p, 4);
  const Eigen::MatrixXd Mp = testing::dense(ops.mass_p);
  const Eigen::VectorXd div = testing::dense(ops.div_up) * testing::as_eigen(u);
  const Eigen::VectorXd proj = Mp.ldlt().solve(div);
  const double u2 = integrate(disc, 4, [&](const ElementContext& c, int q) {
    return velocity_at(c, u, q).squaredNorm() / k + velocity_gradient_at(c, u, q).squaredNorm();
  }) + proj.dot(Mp * proj) / k;
  CHECK(norms.u_squared(u) == doctest::Approx(u2).epsilon(1e-12));
  const double e2 = integrate(disc, 4, [&](const ElementContext& c, int q) {
    return edge_field_at(c, e, q).squaredNorm() + k * edge_curl_at(c, e, q).squaredNorm();
  });
  CHECK(norms.E_squared(e) == doctest::Approx(e2).epsilon(1e-12));
  const double b2 = integrate(disc, 4, [&](const ElementContext& c, int q) {
    return face_field_at(c, b, q).squaredNorm() / k + std::pow(face_div_at(c, b, q), 2);
  });
  CHECK(norms.B_squared(b) == doctest::Approx(b2).epsilon(1e-12));
  const double p2 = k * integrate(disc, 4, [&](const ElementContext& c, int q) { return std::pow(pressure_at(c, p, q), 2); });
  CHECK(norms.p_squared(p) == doctest::Approx(p2).epsilon(1e-12));

  State s = zero_state(L);
  s.u = u;
  s.E = e;
  s.B = b;
  s.p = p;
  const NormRecord r = norms.compute(s);
  CHECK(r.X == doctest::Approx(std::sqrt(u2 + e2 + b2)).epsilon(1e-12));
  CHECK(norms.x_norm(s) == doctest::Approx(r.X));
  CHECK(norms.x_distance(s, s) == 0.0);

  // Divergence-free fields: only the k^-1 |B|^2 term, which scales with 1/k.
  const auto bc = ops.curl.multiply(testing::random_vector(L.n_E, 5));
  const double mass = testing::dot(bc, ops.mass_B.multiply(bc));
  CHECK(norms.B_squared(bc) == doctest::Approx(mass / k).epsilon(1e-13));
  const WeightedNorms quarter(ops, k / 4);
  CHECK(quarter.B_squared(bc) == doctest::Approx(4.0 * norms.B_squared(bc)).epsilon(1e-14));
}

TEST_CASE("div-B monitor") {
  const Discretization disc(generate_structured_cube(2));
  const TetMesh& mesh = disc.mesh();
  const DofLayout& L = disc.layout();
  const DivBStats zero = divb_monitor(disc, std::vector<double>(L.n_B, 0.0));
  CHECK(zero.max_abs == 0.0);
  CHECK(zero.l2 == 0.0);
  const auto curl = disc.complex().C.apply(testing::random_vector(L.n_E, 7));
  CHECK(divb_monitor(disc, curl).max_abs <= 1e-12);

  int f = 0;
  while (mesh.boundary_face[f]) ++f;
  std::vector<double> b(L.n_B, 0.0);
  b[f] = 1.0;
  const DivBStats s = divb_monitor(disc, b);
  const double vol = mesh.tet_volumes[0];
  CHECK(s.max_abs == doctest::Approx(1.0 / vol).epsilon(1e-13));
  CHECK(s.l2 == doctest::Approx(std::sqrt(2.0 / vol)).epsilon(1e-13));
}

TEST_CASE("discrete dual norm") {
  const Discretization disc(generate_structured_cube(2));
  const OperatorSet ops = assemble_operators(disc);
  const DualNorm dual(disc, ops);
  const auto v = testing::random_interior(disc.velocity_mask(), 9);
  const auto f = ops.stiffness_u.multiply(v);
  CHECK(dual(f) == doctest::Approx(std::sqrt(testing::dot(v, f))).epsilon(1e-12));
  CHECK(dual(std::vector<double>(disc.layout().n_u, 0.0)) == 0.0);
}

TEST_CASE("current norm against quadrature") {
  const Discretization disc(generate_structured_cube(2));
  const DofLayout& L = disc.layout();
  const auto u = testing::random_vector(L.n_u, 11);
  const auto e = testing::random_vector(L.n_E, 12);
  const auto b = testing::random_vector(L.n_B, 13);
  const double ref = integrate(disc, 6, [&](const ElementContext& c, int q) {
    return (edge_field_at(c, e, q) + velocity_at(c, u, q).cross(face_field_at(c, b, q))).squaredNorm();
  });
  CHECK(current_norm_squared(disc, u, e, b) == doctest::Approx(ref).epsilon(1e-12));
}

TEST_CASE("energy ledger over short runs") {
  for (RunScheme scheme : {RunScheme::picard, RunScheme::symmetric, RunScheme::newton, RunScheme::nonlinear_picard,
                           RunScheme::nonlinear_newton}) {
    RunConfig cfg;
    cfg.n = 2;
    cfg.steps = 5;
    cfg.scheme = scheme;
    const TransientResult r = run_transient(cfg);
    INFO(run_scheme_name(scheme));
    CHECK(r.ledger.size() == 6);
    CHECK(r.summary.energy_monotone);
    for (std::size_t i = 1; i < r.ledger.size(); ++i) {
      const double prev = r.ledger[i - 1].kinetic + r.ledger[i - 1].magnetic;
      const double cur = r.ledger[i].kinetic + r.ledger[i].magnetic;
      CHECK(cur <= prev * (1.0 + 1e-12));
      CHECK(r.ledger[i].step == static_cast<int>(i));
    }
    CHECK(r.summary.max_divb_relative <= 1e-12);
    if (scheme == RunScheme::picard || scheme == RunScheme::nonlinear_picard) {
      CHECK(r.summary.max_identity_residual_relative <= 1e-10);
      CHECK(r.summary.min_step_margin_relative >= -1e-10);
      CHECK(r.summary.min_bound_margin_relative >= -1e-9);
    }
  }
}

TEST_CASE("energy ledger with forcing") {
  RunConfig cfg;
  cfg.n = 2;
  cfg.steps = 4;
  cfg.source = "forced";
  cfg.source_amplitude = 5.0;
  const TransientResult r = run_transient(cfg);
  CHECK(r.summary.max_identity_residual_relative <= 1e-10);
  CHECK(r.summary.min_step_margin_relative >= -1e-10);
  CHECK(r.summary.min_bound_margin_relative >= -1e-9);
  for (const auto& rec : r.ledger) {
    CHECK(rec.kinetic >= 0.0);
    CHECK(rec.magnetic >= 0.0);
    CHECK(rec.norms.X > 0.0);
  }
}

TEST_CASE("manufactured solutions") {
  const Box box;
  const Params params;
  SUBCASE("hydrostatic patch is reproduced") {
    const ManufacturedCase mc = manufactured_case("patch", box);
    // n = 1 leaves a single interior velocity node, too few to control the pressure.
    for (int n : {2, 3}) {
      const Discretization disc(generate_structured_cube(n, box));
      std::vector<Warning> ws;
      const ManufacturedErrors e = manufactured_solve(disc, params, mc, &ws);
      CHECK(e.u_l2 <= 1e-10);
      CHECK(e.u_h1 <= 1e-10);
      CHECK(e.E_l2 <= 1e-10);
      CHECK(e.B_l2 <= 1e-10);
      CHECK(e.p_l2 <= 1e-10);
      CHECK_FALSE(structural_warnings(ws));
    }
  }
  SUBCASE("random discrete states are reproduced") {
    for (int n : {2, 3}) {
      const Discretization disc(generate_structured_cube(n, Box{1.0, 0.7, 1.3}));
      for (std::uint32_t seed : {1u, 2u, 3u}) CHECK(discrete_patch_error(disc, Params{2.0, 0.5, 3.0, 0.05, true}, seed) <= 1e-10);
    }
  }
  SUBCASE("trigonometric case converges in B") {
    const std::vector<int> sizes{2, 4};
    const ConvergenceTable t = manufactured_convergence("trig", sizes, box, params);
    REQUIRE(t.rows.size() == 2);
    REQUIRE(t.orders.size() == 1);
    CHECK(t.orders[0].B_l2 >= 0.8);
    CHECK(t.rows[1].B_l2 < t.rows[0].B_l2);
    CHECK_FALSE(structural_warnings(t.warnings));
    for (const auto& row : t.rows) CHECK(row.divb_max <= 1e-9);
  }
  SUBCASE("Stokes case has a second-order velocity gradient") {
    const std::vector<int> sizes{4, 8};
    Params p1 = params;
    p1.k = 1.0;
    const ConvergenceTable t = manufactured_convergence("stokes", sizes, box, p1);
    CHECK(t.orders[0].u_h1 >= 1.7);
  }
  SUBCASE("bad requests") {
    const std::vector<int> one{2};
    CHECK_THROWS_AS(manufactured_convergence("trig", one, box, params), std::invalid_argument);
    const std::vector<int> two{2, 3};
    const std::vector<double> ks{0.1};
    CHECK_THROWS_AS(manufactured_convergence("trig", two, box, params, ks), std::invalid_argument);
    CHECK_THROWS_AS(manufactured_case("nope", box), std::invalid_argument);
  }
}

TEST_CASE("source compliance check") {
  const Discretization disc(generate_structured_cube(2));
  const DofLayout& L = disc.layout();
  const auto old = disc.complex().C.apply(testing::random_vector(L.n_E, 21));
  const auto step = disc.complex().C.apply(testing::random_vector(L.n_E, 22));
  std::vector<double> next(old);
  for (int i = 0; i < L.n_B; ++i) next[i] += step[i];
  std::vector<Warning> ws;
  CHECK(check_source_compliance(disc, old, next, &ws));
  CHECK(ws.empty());
  next[3] += 1e-3;
  CHECK_FALSE(check_source_compliance(disc, old, next, &ws));
  REQUIRE(ws.size() == 1);
  CHECK(ws[0].kind == Warning::Kind::noncompliant_source);
}
