#pragma once

#include <vector>

#include "mhd/assembly/discretization.hpp"
#include "mhd/linalg/sparse.hpp"

namespace mhd {

enum class OperatorKind {
  mass_u,         // (u, v) on vector P2
  stiffness_u,    // (grad u, grad v) on vector P2
  mass_E,         // (E, F) on ND0
  mass_B,         // (B, C) on RT0
  mass_p,         // (p, q) on P1
  curl_coupling,  // (curl E, C) = M_B * C, faces x edges
  divdiv_B,       // (div B, div C) = D^T diag(1/|T|) D
  div_up,         // (div v, q), pressure rows x velocity columns
};

const char* operator_name(OperatorKind kind);

/// Assembles one of the parameter-free operators (degree-4 quadrature, exact
/// for every integrand here). No boundary conditions are applied.
linalg::SparseMatrix assemble_operator(OperatorKind kind, const Discretization& disc);

/// Integrals of the P1 basis functions, used by the mean-pressure constraint.
std::vector<double> pressure_basis_integrals(const Discretization& disc);

/// All parameter-free operators of a discretization.
struct OperatorSet {
  linalg::SparseMatrix mass_u;
  linalg::SparseMatrix stiffness_u;
  linalg::SparseMatrix mass_E;
  linalg::SparseMatrix mass_B;
  linalg::SparseMatrix mass_p;
  linalg::SparseMatrix curl_coupling;
  linalg::SparseMatrix divdiv_B;
  linalg::SparseMatrix div_up;
  linalg::SparseMatrix curl;  // C as a real matrix
  std::vector<double> p_integrals;
};

OperatorSet assemble_operators(const Discretization& disc);

}  // namespace mhd
