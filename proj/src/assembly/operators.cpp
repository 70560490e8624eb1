#include "mhd/assembly/operators.hpp"

#include <stdexcept>

namespace mhd {

namespace {

using linalg::SparseMatrix;
using linalg::Triplet;

// Scalar P2 element matrix expanded to the three velocity components.
template <class Integrand>
SparseMatrix assemble_vector_p2(const Discretization& disc, Integrand&& integrand) {
  std::vector<Triplet> trip;
  const int n = disc.layout().n_u;
  trip.reserve(static_cast<std::size_t>(disc.num_tets()) * 300);
  for (int t = 0; t < disc.num_tets(); ++t) {
    const ElementContext ctx = make_element_context(disc, t, 4);
    double local[10][10] = {};
    for (int q = 0; q < ctx.num_points(); ++q) {
      for (int i = 0; i < 10; ++i) {
        for (int j = 0; j < 10; ++j) local[i][j] += ctx.weight[q] * integrand(ctx, q, i, j);
      }
    }
    for (int i = 0; i < 10; ++i) {
      for (int j = 0; j < 10; ++j) {
        for (int c = 0; c < 3; ++c) {
          trip.push_back({3 * ctx.p2_nodes[i] + c, 3 * ctx.p2_nodes[j] + c, local[i][j]});
        }
      }
    }
  }
  return SparseMatrix::from_triplets(n, n, trip);
}

SparseMatrix assemble_mass_E(const Discretization& disc) {
  std::vector<Triplet> trip;
  for (int t = 0; t < disc.num_tets(); ++t) {
    const ElementContext ctx = make_element_context(disc, t, 4);
    for (int i = 0; i < 6; ++i) {
      for (int j = 0; j < 6; ++j) {
        double s = 0.0;
        for (int q = 0; q < ctx.num_points(); ++q) s += ctx.weight[q] * ctx.nd.vec(q, i).dot(ctx.nd.vec(q, j));
        trip.push_back({ctx.edges[i], ctx.edges[j], s});
      }
    }
  }
  const int n = disc.layout().n_E;
  return SparseMatrix::from_triplets(n, n, trip);
}

SparseMatrix assemble_mass_B(const Discretization& disc) {
  std::vector<Triplet> trip;
  for (int t = 0; t < disc.num_tets(); ++t) {
    const ElementContext ctx = make_element_context(disc, t, 4);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        double s = 0.0;
        for (int q = 0; q < ctx.num_points(); ++q) s += ctx.weight[q] * ctx.rt.vec(q, i).dot(ctx.rt.vec(q, j));
        trip.push_back({ctx.faces[i], ctx.faces[j], s});
      }
    }
  }
  const int n = disc.layout().n_B;
  return SparseMatrix::from_triplets(n, n, trip);
}

SparseMatrix assemble_mass_p(const Discretization& disc) {
  std::vector<Triplet> trip;
  for (int t = 0; t < disc.num_tets(); ++t) {
    const ElementContext ctx = make_element_context(disc, t, 4);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 4; ++j) {
        double s = 0.0;
        for (int q = 0; q < ctx.num_points(); ++q) s += ctx.weight[q] * ctx.p1.value(q, i) * ctx.p1.value(q, j);
        trip.push_back({ctx.vertices[i], ctx.vertices[j], s});
      }
    }
  }
  const int n = disc.layout().n_p;
  return SparseMatrix::from_triplets(n, n, trip);
}

SparseMatrix assemble_div_up(const Discretization& disc) {
  std::vector<Triplet> trip;
  for (int t = 0; t < disc.num_tets(); ++t) {
    const ElementContext ctx = make_element_context(disc, t, 4);
    for (int i = 0; i < 4; ++i) {
      for (int j = 0; j < 10; ++j) {
        for (int c = 0; c < 3; ++c) {
          double s = 0.0;
          for (int q = 0; q < ctx.num_points(); ++q) s += ctx.weight[q] * ctx.p1.value(q, i) * ctx.p2.deriv(q, j, c);
          trip.push_back({ctx.vertices[i], 3 * ctx.p2_nodes[j] + c, s});
        }
      }
    }
  }
  return SparseMatrix::from_triplets(disc.layout().n_p, disc.layout().n_u, trip);
}

SparseMatrix assemble_divdiv(const Discretization& disc) {
  const SparseMatrix D = disc.complex().D.to_sparse();
  std::vector<double> inv_vol(disc.num_tets());
  for (int t = 0; t < disc.num_tets(); ++t) inv_vol[t] = 1.0 / disc.mesh().tet_volumes[t];
  return linalg::weighted_gram(D, inv_vol);
}

}  // namespace

const char* operator_name(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::mass_u: return "mass_u";
    case OperatorKind::stiffness_u: return "stiffness_u";
    case OperatorKind::mass_E: return "mass_E";
    case OperatorKind::mass_B: return "mass_B";
    case OperatorKind::mass_p: return "mass_p";
    case OperatorKind::curl_coupling: return "curl_coupling";
    case OperatorKind::divdiv_B: return "divdiv_B";
    case OperatorKind::div_up: return "div_up";
  }
  return "unknown";
}

SparseMatrix assemble_operator(OperatorKind kind, const Discretization& disc) {
  switch (kind) {
    case OperatorKind::mass_u:
      return assemble_vector_p2(disc, [](const ElementContext& c, int q, int i, int j) {
        return c.p2.value(q, i) * c.p2.value(q, j);
      });
    case OperatorKind::stiffness_u:
      return assemble_vector_p2(disc, [](const ElementContext& c, int q, int i, int j) {
        return c.p2.dvec(q, i).dot(c.p2.dvec(q, j));
      });
    case OperatorKind::mass_E: return assemble_mass_E(disc);
    case OperatorKind::mass_B: return assemble_mass_B(disc);
    case OperatorKind::mass_p: return assemble_mass_p(disc);
    case OperatorKind::curl_coupling:
      return linalg::multiply(assemble_mass_B(disc), disc.complex().C.to_sparse());
    case OperatorKind::divdiv_B: return assemble_divdiv(disc);
    case OperatorKind::div_up: return assemble_div_up(disc);
  }
  throw std::invalid_argument("assemble_operator: unknown operator kind");
}

std::vector<double> pressure_basis_integrals(const Discretization& disc) {
  std::vector<double> w(disc.layout().n_p, 0.0);
  for (int t = 0; t < disc.num_tets(); ++t) {
    for (int v : disc.mesh().tets[t]) w[v] += 0.25 * disc.mesh().tet_volumes[t];
  }
  return w;
}

OperatorSet assemble_operators(const Discretization& disc) {
  OperatorSet ops;
  ops.mass_u = assemble_operator(OperatorKind::mass_u, disc);
  ops.stiffness_u = assemble_operator(OperatorKind::stiffness_u, disc);
  ops.mass_E = assemble_operator(OperatorKind::mass_E, disc);
  ops.mass_B = assemble_operator(OperatorKind::mass_B, disc);
  ops.mass_p = assemble_operator(OperatorKind::mass_p, disc);
  ops.curl = disc.complex().C.to_sparse();
  ops.curl_coupling = linalg::multiply(ops.mass_B, ops.curl);
  ops.divdiv_B = assemble_operator(OperatorKind::divdiv_B, disc);
  ops.div_up = assemble_operator(OperatorKind::div_up, disc);
  ops.p_integrals = pressure_basis_integrals(disc);
  return ops;
}

}  // namespace mhd
