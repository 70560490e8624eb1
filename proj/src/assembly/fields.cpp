#include "mhd/assembly/fields.hpp"

#include <algorithm>
#include <stdexcept>

#include "mhd/state.hpp"

namespace mhd {

State zero_state(const DofLayout& layout) {
  State s;
  s.u.assign(layout.n_u, 0.0);
  s.E.assign(layout.n_E, 0.0);
  s.B.assign(layout.n_B, 0.0);
  s.p.assign(layout.n_p, 0.0);
  return s;
}

void check_state(const DofLayout& layout, const State& s) {
  if (s.u.size() != static_cast<std::size_t>(layout.n_u) || s.E.size() != static_cast<std::size_t>(layout.n_E) ||
      s.B.size() != static_cast<std::size_t>(layout.n_B) || s.p.size() != static_cast<std::size_t>(layout.n_p)) {
    throw std::invalid_argument("State: coefficient vector sizes do not match the discretization");
  }
}

std::vector<double> pack(const DofLayout& layout, const State& s) {
  check_state(layout, s);
  std::vector<double> x(layout.total);
  std::copy(s.u.begin(), s.u.end(), x.begin() + layout.off_u);
  std::copy(s.E.begin(), s.E.end(), x.begin() + layout.off_E);
  std::copy(s.B.begin(), s.B.end(), x.begin() + layout.off_B);
  std::copy(s.p.begin(), s.p.end(), x.begin() + layout.off_p);
  x[layout.off_lambda] = s.lambda;
  return x;
}

State unpack(const DofLayout& layout, std::span<const double> x) {
  if (x.size() != static_cast<std::size_t>(layout.total)) throw std::invalid_argument("unpack: size mismatch");
  State s;
  s.u.assign(x.begin() + layout.off_u, x.begin() + layout.off_E);
  s.E.assign(x.begin() + layout.off_E, x.begin() + layout.off_B);
  s.B.assign(x.begin() + layout.off_B, x.begin() + layout.off_p);
  s.p.assign(x.begin() + layout.off_p, x.begin() + layout.off_lambda);
  s.lambda = x[layout.off_lambda];
  return s;
}

Vec3 velocity_at(const ElementContext& ctx, std::span<const double> u, int q) {
  Vec3 v = Vec3::Zero();
  for (int i = 0; i < 10; ++i) {
    const double phi = ctx.p2.value(q, i);
    const int n = ctx.p2_nodes[i];
    v += phi * Vec3(u[3 * n], u[3 * n + 1], u[3 * n + 2]);
  }
  return v;
}

Mat3 velocity_gradient_at(const ElementContext& ctx, std::span<const double> u, int q) {
  Mat3 g = Mat3::Zero();
  for (int i = 0; i < 10; ++i) {
    const Vec3 dphi = ctx.p2.dvec(q, i);
    const int n = ctx.p2_nodes[i];
    for (int c = 0; c < 3; ++c) g.row(c) += u[3 * n + c] * dphi.transpose();
  }
  return g;
}

Vec3 edge_field_at(const ElementContext& ctx, std::span<const double> e, int q) {
  Vec3 v = Vec3::Zero();
  for (int i = 0; i < 6; ++i) v += e[ctx.edges[i]] * ctx.nd.vec(q, i);
  return v;
}

Vec3 edge_curl_at(const ElementContext& ctx, std::span<const double> e, int q) {
  Vec3 v = Vec3::Zero();
  for (int i = 0; i < 6; ++i) v += e[ctx.edges[i]] * ctx.nd.dvec(q, i);
  return v;
}

Vec3 face_field_at(const ElementContext& ctx, std::span<const double> b, int q) {
  Vec3 v = Vec3::Zero();
  for (int m = 0; m < 4; ++m) v += b[ctx.faces[m]] * ctx.rt.vec(q, m);
  return v;
}

double face_div_at(const ElementContext& ctx, std::span<const double> b, int q) {
  double d = 0.0;
  for (int m = 0; m < 4; ++m) d += b[ctx.faces[m]] * ctx.rt.deriv(q, m);
  return d;
}

double pressure_at(const ElementContext& ctx, std::span<const double> p, int q) {
  double v = 0.0;
  for (int i = 0; i < 4; ++i) v += p[ctx.vertices[i]] * ctx.p1.value(q, i);
  return v;
}

ElementContext make_point_context(const Discretization& disc, int t, std::span<const Vec3> ref_points) {
  const fem::TetGeometry& g = disc.geometry(t);
  ElementContext ctx;
  ctx.tet = t;
  ctx.points.reserve(ref_points.size());
  for (const auto& xi : ref_points) ctx.points.push_back(g.map(xi));
  ctx.p1 = fem::push_forward(fem::eval_basis(fem::ElementKind::P1, ref_points), g);
  ctx.p2 = fem::push_forward(fem::eval_basis(fem::ElementKind::P2, ref_points), g);
  ctx.nd = fem::push_forward(fem::eval_basis(fem::ElementKind::ND0, ref_points), g);
  ctx.rt = fem::push_forward(fem::eval_basis(fem::ElementKind::RT0, ref_points), g);
  ctx.p2_nodes = disc.p2_nodes(t);
  ctx.edges = disc.mesh().tet_edges[t];
  ctx.faces = disc.mesh().tet_faces[t];
  ctx.vertices = disc.mesh().tets[t];
  return ctx;
}

double face_field_max_norm(const Discretization& disc, std::span<const double> b) {
  static const std::array<Vec3, 5> pts{Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0, 1, 0), Vec3(0, 0, 1),
                                       Vec3(0.25, 0.25, 0.25)};
  double m = 0.0;
  for (int t = 0; t < disc.num_tets(); ++t) {
    const ElementContext ctx = make_point_context(disc, t, pts);
    for (int q = 0; q < 5; ++q) m = std::max(m, face_field_at(ctx, b, q).norm());
  }
  return m;
}

}  // namespace mhd
