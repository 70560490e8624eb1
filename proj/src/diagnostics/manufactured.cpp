#include "mhd/diagnostics/manufactured.hpp"

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>
#include <stdexcept>

#include "mhd/assembly/fields.hpp"

namespace mhd {

namespace {

// Separable trigonometric fields on the box; s_i = sin(a_i x_i), c_i = cos(a_i x_i).
struct Trig {
  double a[3];

  explicit Trig(const Box& box) : a{std::numbers::pi / box.lx, std::numbers::pi / box.ly, std::numbers::pi / box.lz} {}

  double s(int i, const Vec3& x) const { return std::sin(a[i] * x[i]); }
  double c(int i, const Vec3& x) const { return std::cos(a[i] * x[i]); }

  // X = sin^2(a x) and its first three derivatives.
  std::array<double, 4> sq(int i, const Vec3& x) const {
    const double t = a[i] * x[i];
    const double ai = a[i];
    return {std::sin(t) * std::sin(t), ai * std::sin(2 * t), 2 * ai * ai * std::cos(2 * t),
            -4 * ai * ai * ai * std::sin(2 * t)};
  }

  // u = curl(0, 0, X Y Z) = (X Y' Z, -X' Y Z, 0)
  Vec3 u(const Vec3& x) const {
    const auto X = sq(0, x), Y = sq(1, x), Z = sq(2, x);
    return {X[0] * Y[1] * Z[0], -X[1] * Y[0] * Z[0], 0.0};
  }
  Mat3 grad_u(const Vec3& x) const {
    const auto X = sq(0, x), Y = sq(1, x), Z = sq(2, x);
    Mat3 g;
    g.row(0) << X[1] * Y[1] * Z[0], X[0] * Y[2] * Z[0], X[0] * Y[1] * Z[1];
    g.row(1) << -X[2] * Y[0] * Z[0], -X[1] * Y[1] * Z[0], -X[1] * Y[0] * Z[1];
    g.row(2).setZero();
    return g;
  }
  Vec3 lap_u(const Vec3& x) const {
    const auto X = sq(0, x), Y = sq(1, x), Z = sq(2, x);
    return {X[2] * Y[1] * Z[0] + X[0] * Y[3] * Z[0] + X[0] * Y[1] * Z[2],
            -(X[3] * Y[0] * Z[0] + X[1] * Y[2] * Z[0] + X[1] * Y[0] * Z[2]), 0.0};
  }

  // A = (s_y s_z, s_x s_z, s_x s_y); zero tangential trace on the boundary.
  Vec3 potential(const Vec3& x) const {
    return {s(1, x) * s(2, x), s(0, x) * s(2, x), s(0, x) * s(1, x)};
  }
  Vec3 curl_potential(const Vec3& x) const {
    return {s(0, x) * (a[1] * c(1, x) - a[2] * c(2, x)), s(1, x) * (a[2] * c(2, x) - a[0] * c(0, x)),
            s(2, x) * (a[0] * c(0, x) - a[1] * c(1, x))};
  }
  // curl curl A = -lap A, since div A = 0.
  Vec3 curl_curl_potential(const Vec3& x) const {
    return {(a[1] * a[1] + a[2] * a[2]) * s(1, x) * s(2, x), (a[0] * a[0] + a[2] * a[2]) * s(0, x) * s(2, x),
            (a[0] * a[0] + a[1] * a[1]) * s(0, x) * s(1, x)};
  }

  double p(const Vec3& x) const { return c(0, x) * c(1, x) * c(2, x); }
  Vec3 grad_p(const Vec3& x) const {
    return {-a[0] * s(0, x) * c(1, x) * c(2, x), -a[1] * c(0, x) * s(1, x) * c(2, x),
            -a[2] * c(0, x) * c(1, x) * s(2, x)};
  }
};

Vec3 linear_w(const Vec3& x) { return 0.5 * Vec3(x.y(), x.z(), x.x()); }

const VectorField kZero = [](const Vec3&) { return Vec3::Zero().eval(); };

ManufacturedCase zero_case(const std::string& name) {
  ManufacturedCase mc;
  mc.name = name;
  mc.u = mc.lap_u = mc.E = mc.curl_E = mc.B = mc.curl_B = mc.grad_div_B = mc.grad_p = mc.w = mc.beta_potential =
      kZero;
  mc.grad_u = [](const Vec3&) { return Mat3::Zero().eval(); };
  mc.p = mc.div_w = [](const Vec3&) { return 0.0; };
  return mc;
}

ManufacturedCase trig_case(const Box& box) {
  const Trig T(box);
  ManufacturedCase mc = zero_case("trig");
  mc.u = [T](const Vec3& x) { return T.u(x); };
  mc.grad_u = [T](const Vec3& x) { return T.grad_u(x); };
  mc.lap_u = [T](const Vec3& x) { return T.lap_u(x); };
  mc.E = [T](const Vec3& x) { return T.potential(x); };
  mc.curl_E = [T](const Vec3& x) { return T.curl_potential(x); };
  mc.B = [T](const Vec3& x) { return T.curl_potential(x); };
  mc.B_potential = [T](const Vec3& x) { return T.potential(x); };
  mc.curl_B = [T](const Vec3& x) { return T.curl_curl_potential(x); };
  mc.p = [T](const Vec3& x) { return T.p(x); };
  mc.grad_p = [T](const Vec3& x) { return T.grad_p(x); };
  mc.w = linear_w;
  mc.beta_potential = [T](const Vec3& x) { return Vec3(0.8 * T.potential(x)); };
  return mc;
}

ManufacturedCase stokes_case(const Box& box) {
  const Trig T(box);
  ManufacturedCase mc = zero_case("stokes");
  mc.u = [T](const Vec3& x) { return T.u(x); };
  mc.grad_u = [T](const Vec3& x) { return T.grad_u(x); };
  mc.lap_u = [T](const Vec3& x) { return T.lap_u(x); };
  mc.p = [T](const Vec3& x) { return T.p(x); };
  mc.grad_p = [T](const Vec3& x) { return T.grad_p(x); };
  return mc;
}

ManufacturedCase patch_case(const Box& box) {
  const Trig T(box);
  ManufacturedCase mc = zero_case("patch");
  const Vec3 mid(0.5 * box.lx, 0.5 * box.ly, 0.5 * box.lz);
  const Vec3 gp(1.0, 2.0, -1.0);
  mc.p = [mid, gp](const Vec3& x) { return gp.dot(x - mid); };
  mc.grad_p = [gp](const Vec3&) { return gp; };
  mc.w = linear_w;
  mc.beta_potential = [T](const Vec3& x) { return Vec3(0.8 * T.potential(x)); };
  return mc;
}

}  // namespace

ManufacturedCase manufactured_case(const std::string& name, const Box& box) {
  if (name == "trig") return trig_case(box);
  if (name == "stokes") return stokes_case(box);
  if (name == "patch") return patch_case(box);
  throw std::invalid_argument("unknown manufactured case '" + name + "'");
}

State manufactured_old_state(const Discretization& disc, const ManufacturedCase& mc) {
  State s = zero_state(disc.layout());
  for (int node = 0; node < disc.num_p2_nodes(); ++node) {
    const Vec3 v = mc.w(disc.p2_node_position(node));
    for (int c = 0; c < 3; ++c) s.u[3 * node + c] = v[c];
  }
  std::vector<double> a = interpolate_vector(disc.mesh(), 1, mc.beta_potential);
  for (std::size_t e = 0; e < a.size(); ++e) {
    if (disc.edge_mask()[e]) a[e] = 0.0;
  }
  s.B = disc.complex().C.apply(a);
  return s;
}

SourceData manufactured_sources(const Discretization& disc, const Params& prm, const ManufacturedCase& mc,
                                const State& old) {
  prm.validate();
  const DofLayout& L = disc.layout();
  SourceData s;
  s.f.assign(L.n_u, 0.0);
  s.r.assign(L.n_E, 0.0);
  s.l.assign(L.n_B, 0.0);
  s.g.assign(L.n_p, 0.0);
  for (int t = 0; t < disc.num_tets(); ++t) {
    const ElementContext ctx = make_element_context(disc, t, 6);
    for (int q = 0; q < ctx.num_points(); ++q) {
      const Vec3& x = ctx.points[q];
      const double wq = ctx.weight[q];
      const Vec3 beta = face_field_at(ctx, old.B, q);
      const Vec3 u = mc.u(x);
      const Vec3 w = mc.w(x);
      const Mat3 gu = mc.grad_u(x);
      const Vec3 j = mc.E(x) + u.cross(beta);
      const Vec3 f = (u - w) / prm.k + gu * w + 0.5 * mc.div_w(x) * u - mc.lap_u(x) / prm.Re +
                     prm.S * beta.cross(j) + mc.grad_p(x);
      const Vec3 r = prm.S * j - prm.S / prm.Rm * mc.curl_B(x);
      const Vec3 l = -prm.S / prm.Rm * mc.grad_div_B(x);
      const double g = gu.trace();
      for (int i = 0; i < 10; ++i) {
        const double phi = wq * ctx.p2.value(q, i);
        for (int c = 0; c < 3; ++c) s.f[3 * ctx.p2_nodes[i] + c] += phi * f[c];
      }
      for (int i = 0; i < 6; ++i) s.r[ctx.edges[i]] += wq * r.dot(ctx.nd.vec(q, i));
      for (int i = 0; i < 4; ++i) s.l[ctx.faces[i]] += wq * l.dot(ctx.rt.vec(q, i));
      for (int i = 0; i < 4; ++i) s.g[ctx.vertices[i]] += wq * g * ctx.p1.value(q, i);
    }
  }
  // The curl E + (B - beta)/k part goes through the commuting interpolants,
  // so D M_B^-1 l = 0 holds discretely (testing it directly would not).
  const auto& C = disc.complex().C;
  std::vector<double> z = C.apply(interpolate_vector(disc.mesh(), 1, mc.E));
  const std::vector<double> bi = mc.B_potential ? flux_of_curl(disc.complex(), disc.mesh(), mc.B_potential)
                                                : interpolate_vector(disc.mesh(), 2, mc.B);
  for (int f = 0; f < L.n_B; ++f) z[f] += (bi[f] - old.B[f]) / prm.k;
  const std::vector<double> mz = assemble_operator(OperatorKind::mass_B, disc).multiply(z);
  for (int f = 0; f < L.n_B; ++f) s.l[f] += prm.S / prm.Rm * mz[f];
  return s;
}

ManufacturedErrors manufactured_errors(const Discretization& disc, const State& s, const ManufacturedCase& mc) {
  ManufacturedErrors e;
  for (int t = 0; t < disc.num_tets(); ++t) {
    const ElementContext ctx = make_element_context(disc, t, 6);
    for (int q = 0; q < ctx.num_points(); ++q) {
      const Vec3& x = ctx.points[q];
      const double w = ctx.weight[q];
      e.u_l2 += w * (velocity_at(ctx, s.u, q) - mc.u(x)).squaredNorm();
      e.u_h1 += w * (velocity_gradient_at(ctx, s.u, q) - mc.grad_u(x)).squaredNorm();
      e.E_l2 += w * (edge_field_at(ctx, s.E, q) - mc.E(x)).squaredNorm();
      e.B_l2 += w * (face_field_at(ctx, s.B, q) - mc.B(x)).squaredNorm();
      const double dp = pressure_at(ctx, s.p, q) - mc.p(x);
      e.p_l2 += w * dp * dp;
    }
  }
  e.u_l2 = std::sqrt(e.u_l2);
  e.u_h1 = std::sqrt(e.u_h1);
  e.E_l2 = std::sqrt(e.E_l2);
  e.B_l2 = std::sqrt(e.B_l2);
  e.p_l2 = std::sqrt(e.p_l2);
  e.divb_max = divb_monitor(disc, s.B).max_abs;
  e.h = disc.mesh().mesh_size();
  return e;
}

bool check_source_compliance(const Discretization& disc, std::span<const double> b_old, std::span<const double> b,
                             std::vector<Warning>* warnings) {
  std::vector<double> diff(b.begin(), b.end());
  for (std::size_t i = 0; i < diff.size(); ++i) diff[i] -= b_old[i];
  const double change = linalg::norm_inf(disc.complex().D.apply(diff));
  const double scale = std::max(linalg::norm_inf(b), linalg::norm_inf(b_old));
  const double threshold = 1e-10 * 4.0 * scale;
  const bool ok = change <= threshold;
  if (!ok && warnings != nullptr) {
    std::ostringstream os;
    os << "magnetic source violates the divergence-free representation: discrete divergence changed by "
       << change << " in one step (threshold " << threshold << ")";
    warnings->push_back({Warning::Kind::noncompliant_source, os.str(), change, threshold});
  }
  return ok;
}

ManufacturedErrors manufactured_solve(const Discretization& disc, const Params& params, const ManufacturedCase& mc,
                                      std::vector<Warning>* warnings) {
  MhdSolver solver(disc, params);
  const State old = manufactured_old_state(disc, mc);
  const SourceData src = manufactured_sources(disc, params, mc, old);
  StepResult r = solver.step_linearized(Scheme::picard, old, src);
  if (warnings != nullptr) {
    warnings->insert(warnings->end(), r.warnings.begin(), r.warnings.end());
  }
  check_source_compliance(disc, old.B, r.state.B, warnings);
  ManufacturedErrors e = manufactured_errors(disc, r.state, mc);
  e.k = params.k;
  return e;
}

ConvergenceTable manufactured_convergence(const std::string& case_name, std::span<const int> mesh_sizes,
                                          const Box& box, const Params& params,
                                          std::span<const double> k_schedule) {
  if (mesh_sizes.size() < 2) throw std::invalid_argument("convergence study needs at least two meshes");
  if (!k_schedule.empty() && k_schedule.size() != mesh_sizes.size()) {
    throw std::invalid_argument("time-step schedule length differs from the number of meshes");
  }
  ConvergenceTable table;
  table.case_name = case_name;
  for (std::size_t i = 0; i < mesh_sizes.size(); ++i) {
    Params prm = params;
    if (!k_schedule.empty()) prm.k = k_schedule[i];
    const ManufacturedCase mc = manufactured_case(case_name, box);
    const Discretization disc(generate_structured_cube(mesh_sizes[i], box));
    ManufacturedErrors e = manufactured_solve(disc, prm, mc, &table.warnings);
    e.n = mesh_sizes[i];
    table.rows.push_back(e);
  }
  const auto order = [](double e0, double e1, double h0, double h1) {
    if (e0 <= 0 || e1 <= 0) return 0.0;
    return std::log(e0 / e1) / std::log(h0 / h1);
  };
  for (std::size_t i = 0; i + 1 < table.rows.size(); ++i) {
    const auto& a = table.rows[i];
    const auto& b = table.rows[i + 1];
    table.orders.push_back({order(a.u_l2, b.u_l2, a.h, b.h), order(a.u_h1, b.u_h1, a.h, b.h),
                            order(a.E_l2, b.E_l2, a.h, b.h), order(a.B_l2, b.B_l2, a.h, b.h),
                            order(a.p_l2, b.p_l2, a.h, b.h)});
  }
  return table;
}

double discrete_patch_error(const Discretization& disc, const Params& params, std::uint32_t seed) {
  const DofLayout& L = disc.layout();
  const auto& cplx = disc.complex();
  std::mt19937 gen(seed);
  std::uniform_real_distribution<double> dist(-1.0, 1.0);
  const auto interior_edges = [&]() {
    std::vector<double> e(L.n_E);
    for (int i = 0; i < L.n_E; ++i) e[i] = disc.edge_mask()[i] ? 0.0 : dist(gen);
    return e;
  };

  State old = zero_state(L);
  for (auto& v : old.u) v = dist(gen);
  old.B = cplx.C.apply(interior_edges());

  State exact = zero_state(L);
  for (int i = 0; i < L.n_u; ++i) exact.u[i] = disc.velocity_mask()[i] ? 0.0 : dist(gen);
  exact.E = interior_edges();
  exact.B = cplx.C.apply(interior_edges());
  for (auto& v : exact.p) v = dist(gen);
  double mean = 0.0;
  double vol = 0.0;
  const MhdSolver solver(disc, params);
  const auto& pint = solver.operators().p_integrals;
  for (int i = 0; i < L.n_p; ++i) {
    mean += pint[i] * exact.p[i];
    vol += pint[i];
  }
  for (auto& v : exact.p) v -= mean / vol;

  AssemblyOptions raw;
  raw.apply_bcs = false;
  const BlockSystem sys = solver.assembler().assemble(Scheme::picard, old, old, params, {}, raw);
  std::vector<double> ax = sys.matrix.multiply(pack(L, exact));
  for (std::size_t i = 0; i < ax.size(); ++i) ax[i] -= sys.rhs[i];
  SourceData src;
  src.f.assign(ax.begin() + L.off_u, ax.begin() + L.off_u + L.n_u);
  src.r.assign(ax.begin() + L.off_E, ax.begin() + L.off_E + L.n_E);
  src.l.assign(ax.begin() + L.off_B, ax.begin() + L.off_B + L.n_B);
  src.g.assign(ax.begin() + L.off_p, ax.begin() + L.off_p + L.n_p);
  for (auto& v : src.g) v = -v;

  const StepResult r = solver.step_linearized(Scheme::picard, old, src);
  const std::vector<double> xs = pack(L, r.state);
  const std::vector<double> xe = pack(L, exact);
  double err = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) err = std::max(err, std::abs(xs[i] - xe[i]));
  return err;
}

}  // namespace mhd
