#pragma once

#include "mhd/assembly/block_system.hpp"
#include "mhd/assembly/operators.hpp"
#include "mhd/linalg/block_preconditioner.hpp"

namespace mhd {

/// SPD diagonal blocks of the weighted-norm preconditioner (Riesz map of the
/// weighted product space), with essential BCs eliminated:
///   P_u = k^-1 M_u + A / Re + k^-1 div^T diag(lumped M_p)^-1 div
///   P_E = S (M_E + k/Rm C^T M_B C)
///   P_B = S/Rm (k^-1 M_B + divdiv)
///   P_p = diag(k M_p, |Omega| / k) over (p, lambda)
struct PreconditionerBlocks {
  linalg::SparseMatrix u;
  linalg::SparseMatrix E;
  linalg::SparseMatrix B;
  linalg::SparseMatrix p;
};

PreconditionerBlocks preconditioner_blocks(const Discretization& disc, const OperatorSet& ops, const Params& params);

/// Factorizes the blocks above. Throws linalg::SingularMatrixError if one is
/// not SPD.
linalg::BlockDiagonalPreconditioner build_block_preconditioner(const Discretization& disc, const OperatorSet& ops,
                                                               const Params& params);

}  // namespace mhd
