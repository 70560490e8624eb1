#include "mhd/assembly/preconditioner.hpp"

namespace mhd {

PreconditionerBlocks preconditioner_blocks(const Discretization& disc, const OperatorSet& ops, const Params& params) {
  params.validate();
  const double k = params.k;
  PreconditionerBlocks P;

  std::vector<double> inv_lumped(ops.p_integrals.size());
  for (std::size_t i = 0; i < inv_lumped.size(); ++i) inv_lumped[i] = 1.0 / ops.p_integrals[i];
  linalg::SparseMatrix pu = linalg::add(ops.mass_u, ops.stiffness_u, 1.0 / k, 1.0 / params.Re);
  pu = linalg::add(pu, linalg::weighted_gram(ops.div_up, inv_lumped), 1.0, 1.0 / k);
  P.u = linalg::eliminate_dofs(pu, disc.velocity_mask());

  const linalg::SparseMatrix ctmc = linalg::multiply(ops.curl.transpose(), ops.curl_coupling);
  P.E = linalg::eliminate_dofs(linalg::add(ops.mass_E, ctmc, params.S, params.S * k / params.Rm), disc.edge_mask());

  const double sRm = params.S / params.Rm;
  P.B = linalg::eliminate_dofs(linalg::add(ops.mass_B, ops.divdiv_B, sRm / k, sRm), disc.face_mask());

  const int np = disc.layout().n_p;
  std::vector<linalg::Triplet> trip;
  ops.mass_p.append_triplets(trip, 0, 0, k);
  trip.push_back({np, np, disc.domain_volume() / k});
  P.p = linalg::SparseMatrix::from_triplets(np + 1, np + 1, trip);
  return P;
}

linalg::BlockDiagonalPreconditioner build_block_preconditioner(const Discretization& disc, const OperatorSet& ops,
                                                               const Params& params) {
  const PreconditionerBlocks P = preconditioner_blocks(disc, ops, params);
  linalg::BlockDiagonalPreconditioner M;
  M.add_block(P.u);
  M.add_block(P.E);
  M.add_block(P.B);
  M.add_block(P.p);
  return M;
}

}  // namespace mhd
