#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "mhd/linalg/sparse.hpp"
#include "mhd/mesh.hpp"

namespace mhd {

/// Integer sparse matrix in CSR form used for the coboundary maps.
struct IncidenceMatrix {
  int rows = 0;
  int cols = 0;
  std::vector<int> row_ptr{0};
  std::vector<int> col;
  std::vector<int> val;

  int nnz() const { return static_cast<int>(val.size()); }
  int at(int i, int j) const;
  std::vector<double> apply(std::span<const double> x) const;
  std::vector<double> apply_transpose(std::span<const double> y) const;
  linalg::SparseMatrix to_sparse() const;
};

/// Exact integer product A * B with zero entries dropped.
IncidenceMatrix product(const IncidenceMatrix& a, const IncidenceMatrix& b);

/// Rank by Gaussian elimination with full pivoting on a dense copy.
int matrix_rank(const IncidenceMatrix& a);

/// Lowest-order discrete de Rham complex: P1 -> ND0 -> RT0 -> DG0.
///
/// DOFs are vertex values, edge circulations int_e v . (x_b - x_a) ds, face
/// fluxes int_f v . ((x_b - x_a) x (x_c - x_a)) over the reference triangle,
/// and cell integrals. With these functionals grad, curl and div act on
/// coefficients as the incidence matrices G, C, D.
struct DeRhamComplex {
  int num_vertices = 0;
  int num_edges = 0;
  int num_faces = 0;
  int num_tets = 0;
  IncidenceMatrix G;  // edges x vertices
  IncidenceMatrix C;  // faces x edges
  IncidenceMatrix D;  // tets x faces, rows scaled by the tet orientation
  std::vector<std::uint8_t> boundary_vertex;
  std::vector<std::uint8_t> boundary_edge;
  std::vector<std::uint8_t> boundary_face;
};

DeRhamComplex build_complex(const TetMesh& mesh);

/// Cellwise divergence (D b)_T / |T| of the RT0 field with fluxes b.
std::vector<double> discrete_div(const DeRhamComplex& complex, const TetMesh& mesh, std::span<const double> b);

using ScalarField = std::function<double(const Vec3&)>;
using VectorField = std::function<Vec3(const Vec3&)>;

/// Canonical interpolation of scalar forms: degree 0 gives vertex values,
/// degree 3 gives cell averages. Other degrees throw.
std::vector<double> interpolate_scalar(const TetMesh& mesh, int form_degree, const ScalarField& f);

/// Canonical interpolation of vector forms: degree 1 gives edge circulations,
/// degree 2 gives face fluxes. Other degrees throw.
std::vector<double> interpolate_vector(const TetMesh& mesh, int form_degree, const VectorField& f);

/// Face fluxes of curl A computed as C * (edge circulations of A). Exactly
/// divergence free for any potential A.
std::vector<double> flux_of_curl(const DeRhamComplex& complex, const TetMesh& mesh, const VectorField& potential);

struct ComplexCheck {
  std::string name;
  bool passed = false;
  double value = 0.0;  // measured quantity (defect, or rank)
  double expected = 0.0;
};

/// Exactness (C G = 0, D C = 0), ranks of G, C, D against the Betti numbers
/// of a contractible mesh, and the commuting properties of the interpolants
/// for fixed polynomial fields of degree <= 2 (tolerance 1e-12 relative).
std::vector<ComplexCheck> check_complex(const TetMesh& mesh);

}  // namespace mhd
