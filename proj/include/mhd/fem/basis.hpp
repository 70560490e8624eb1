#pragma once

#include <span>
#include <vector>

#include "mhd/fem/geometry.hpp"

namespace mhd::fem {

/// Lowest-order element families.
///
/// Local numbering: P1 and DG0 follow the tet vertices; P2 has the 4 vertex
/// functions lambda(2 lambda - 1) followed by 4 lambda_a lambda_b on the local
/// edges in kLocalEdges order; P2vec uses index 3 * node + component; ND0 basis
/// i belongs to local edge i; RT0 basis m belongs to local face m (the face
/// opposite vertex m).
enum class ElementKind { P1, P2, P2vec, ND0, RT0, DG0 };

const char* element_name(ElementKind kind);
int num_basis(ElementKind kind);
/// 1 for scalar families, 3 for vector families.
int value_dim(ElementKind kind);
/// Per-basis derivative size: gradient (3) for P1/P2, full gradient (9,
/// row-major d u_c / d x_j) for P2vec, curl (3) for ND0, divergence (1) for
/// RT0, none for DG0.
int deriv_dim(ElementKind kind);

/// Basis values and derivatives at a set of points, flat storage indexed
/// [(point * num_basis + basis) * dim + component].
struct BasisTable {
  ElementKind kind = ElementKind::P1;
  int num_points = 0;
  int num_basis = 0;
  int value_dim = 0;
  int deriv_dim = 0;
  std::vector<double> values;
  std::vector<double> derivs;

  double value(int q, int i, int c = 0) const { return values[(q * num_basis + i) * value_dim + c]; }
  double deriv(int q, int i, int c = 0) const { return derivs[(q * num_basis + i) * deriv_dim + c]; }
  Vec3 vec(int q, int i) const {
    const double* p = &values[(q * num_basis + i) * 3];
    return {p[0], p[1], p[2]};
  }
  Vec3 dvec(int q, int i) const {
    const double* p = &derivs[(q * num_basis + i) * deriv_dim];
    return {p[0], p[1], p[2]};
  }
};

/// Evaluates the reference basis at reference points (reference coordinates,
/// not barycentric).
BasisTable eval_basis(ElementKind kind, std::span<const Vec3> ref_points);

/// Maps a reference table to the physical tetrahedron: scalar values are
/// unchanged with gradients J^{-T} g; ND0 uses J^{-T} v and curls J c / det J;
/// RT0 uses J v / det J and divergences d / det J (signed det).
BasisTable push_forward(const BasisTable& ref, const TetGeometry& geom);

}  // namespace mhd::fem
