#include "mhd/assembly/discretization.hpp"

#include <cmath>
#include <stdexcept>

namespace mhd {

Discretization::Discretization(TetMesh mesh) : mesh_(std::move(mesh)) {
  complex_ = build_complex(mesh_);
  geometry_ = fem::compute_geometry(mesh_);
  for (double v : mesh_.tet_volumes) volume_ += v;

  DofLayout& l = layout_;
  l.n_u = 3 * num_p2_nodes();
  l.n_E = mesh_.num_edges();
  l.n_B = mesh_.num_faces();
  l.n_p = mesh_.num_vertices();
  l.off_u = 0;
  l.off_E = l.n_u;
  l.off_B = l.off_E + l.n_E;
  l.off_p = l.off_B + l.n_B;
  l.off_lambda = l.off_p + l.n_p;
  l.total = l.off_lambda + 1;

  velocity_mask_.assign(l.n_u, 0);
  for (int v = 0; v < mesh_.num_vertices(); ++v) {
    if (!mesh_.boundary_vertex[v]) continue;
    for (int c = 0; c < 3; ++c) velocity_mask_[3 * v + c] = 1;
  }
  for (int e = 0; e < mesh_.num_edges(); ++e) {
    if (!mesh_.boundary_edge[e]) continue;
    const int node = mesh_.num_vertices() + e;
    for (int c = 0; c < 3; ++c) velocity_mask_[3 * node + c] = 1;
  }

  system_mask_.assign(l.total, 0);
  for (int i = 0; i < l.n_u; ++i) system_mask_[l.off_u + i] = velocity_mask_[i];
  for (int i = 0; i < l.n_E; ++i) system_mask_[l.off_E + i] = complex_.boundary_edge[i];
  for (int i = 0; i < l.n_B; ++i) system_mask_[l.off_B + i] = complex_.boundary_face[i];

  for (int d : {1, 2, 4, 6}) {
    auto tab = std::make_unique<ReferenceTables>();
    tab->rule = &fem::tet_quadrature(d);
    tab->p1 = fem::eval_basis(fem::ElementKind::P1, tab->rule->points);
    tab->p2 = fem::eval_basis(fem::ElementKind::P2, tab->rule->points);
    tab->nd = fem::eval_basis(fem::ElementKind::ND0, tab->rule->points);
    tab->rt = fem::eval_basis(fem::ElementKind::RT0, tab->rule->points);
    tables_[d] = std::move(tab);
  }
}

std::array<int, 10> Discretization::p2_nodes(int t) const {
  std::array<int, 10> n{};
  for (int i = 0; i < 4; ++i) n[i] = mesh_.tets[t][i];
  for (int e = 0; e < 6; ++e) n[4 + e] = mesh_.num_vertices() + mesh_.tet_edges[t][e];
  return n;
}

Vec3 Discretization::p2_node_position(int node) const {
  if (node < mesh_.num_vertices()) return mesh_.vertices[node];
  const auto& e = mesh_.edges[node - mesh_.num_vertices()];
  return 0.5 * (mesh_.vertices[e[0]] + mesh_.vertices[e[1]]);
}

const ReferenceTables& Discretization::tables(int degree) const {
  if (degree < 0 || degree > 6 || !tables_[degree]) {
    throw std::invalid_argument("Discretization::tables: degree must be 1, 2, 4 or 6");
  }
  return *tables_[degree];
}

ElementContext make_element_context(const Discretization& disc, int t, int degree) {
  const ReferenceTables& ref = disc.tables(degree);
  const fem::TetGeometry& g = disc.geometry(t);
  ElementContext ctx;
  ctx.tet = t;
  ctx.rule = ref.rule;
  const int nq = ref.rule->size();
  ctx.weight.resize(nq);
  ctx.points.resize(nq);
  const double adet = std::abs(g.det);
  for (int q = 0; q < nq; ++q) {
    ctx.weight[q] = ref.rule->weights[q] * adet;
    ctx.points[q] = g.map(ref.rule->points[q]);
  }
  ctx.p1 = fem::push_forward(ref.p1, g);
  ctx.p2 = fem::push_forward(ref.p2, g);
  ctx.nd = fem::push_forward(ref.nd, g);
  ctx.rt = fem::push_forward(ref.rt, g);
  ctx.p2_nodes = disc.p2_nodes(t);
  ctx.edges = disc.mesh().tet_edges[t];
  ctx.faces = disc.mesh().tet_faces[t];
  ctx.vertices = disc.mesh().tets[t];
  return ctx;
}

}  // namespace mhd
