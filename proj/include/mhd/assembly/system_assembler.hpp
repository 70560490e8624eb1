#pragma once

#include <span>
#include <vector>

#include "mhd/assembly/block_system.hpp"
#include "mhd/assembly/operators.hpp"
#include "mhd/state.hpp"

namespace mhd {

enum class Scheme { picard, symmetric, newton };

const char* scheme_name(Scheme scheme);

/// Velocity convection operators built from a frozen velocity w:
///   skew         1/2 [(w.grad u, v) - (w.grad v, u)]
///   newton       (w.grad u, v) + (u.grad w, v)
///   newton_skew  derivative of the skew form at w:
///                1/2 [(w.grad u, v) + (u.grad w, v) - (w.grad v, u) - (u.grad v, w)]
///   advective    (w.grad u, v)
enum class ConvectionForm { skew, newton, newton_skew, advective };

struct AssemblyOptions {
  bool apply_bcs = true;
  /// Convection used by the Newton scheme: `newton` (plain form) or
  /// `newton_skew` (linearization of the skew-symmetric form).
  ConvectionForm newton_convection = ConvectionForm::newton;
};

/// Lorentz coupling at a frozen field beta (without the factor S):
/// uu = (u x beta, v x beta), Eu = (u x beta, F). The (E, v x beta) block is
/// Eu^T and (E, F) is the edge mass matrix.
struct LorentzBlocks {
  linalg::SparseMatrix uu;
  linalg::SparseMatrix Eu;
};

/// Extra blocks of the Newton linearization of the Lorentz force and Ohm's
/// law at (u-, E-, B-), without the factor S:
///   uB = -[(E- x C) + ((u- x B-) x C) + ((u- x C) x B-), v]
///   EB = (u- x C, F)
/// together with the data terms
///   rhs_u = -(E- x B-, v) - 2((u- x B-) x B-, v),  rhs_E = (u- x B-, F).
struct NewtonMagneticBlocks {
  linalg::SparseMatrix uB;
  linalg::SparseMatrix EB;
  std::vector<double> rhs_u;
  std::vector<double> rhs_E;
};

/// Assembles the linearized block systems. Nonlinear and coupling terms use
/// degree-6 quadrature.
///
/// Row order is (momentum, Ohm, Faraday, continuity, mean pressure):
///   momentum  k^-1 M u + conv + A u / Re + S (u x B-, v x B-) + S (E, v x B-) - (p, div v)
///               = f + k^-1 M u_old
///   Ohm       S (u x B-, F) + S (E, F) - S/Rm (B, curl F) = r
///   Faraday   S/Rm [(curl E, C) + k^-1 (B, C) + (div B, div C)] = S/Rm k^-1 (B_old, C) + l
///   pressure  -(div u, q) + lambda (1, q) = -g
///   mean      (p, 1) = 0
/// The Faraday grad-div term is present when Params::grad_div is set. The
/// symmetric scheme moves convection to the right-hand side and negates the
/// Faraday row; Newton adds the blocks of NewtonMagneticBlocks.
class SystemAssembler {
 public:
  SystemAssembler(const Discretization& disc, const OperatorSet& ops);

  const Discretization& discretization() const { return disc_; }
  const OperatorSet& operators() const { return ops_; }

  linalg::SparseMatrix convection(std::span<const double> w, ConvectionForm form) const;
  LorentzBlocks lorentz(std::span<const double> beta) const;
  NewtonMagneticBlocks newton_magnetic(std::span<const double> u_minus, std::span<const double> E_minus,
                                       std::span<const double> B_minus) const;

  /// `iterate` is the linearization point, `old` the previous time level.
  /// Warnings (divergence of the frozen field, step-size bound) are appended
  /// to `warnings` when non-null.
  BlockSystem assemble(Scheme scheme, const State& iterate, const State& old, const Params& params,
                       const SourceData& sources, const AssemblyOptions& options = {},
                       std::vector<Warning>* warnings = nullptr) const;

  BlockSystem picard(const State& minus, const Params& params, const SourceData& sources,
                     const AssemblyOptions& options = {}, std::vector<Warning>* warnings = nullptr) const {
    return assemble(Scheme::picard, minus, minus, params, sources, options, warnings);
  }
  BlockSystem symmetric_picard(const State& minus, const Params& params, const SourceData& sources,
                               const AssemblyOptions& options = {}, std::vector<Warning>* warnings = nullptr) const {
    return assemble(Scheme::symmetric, minus, minus, params, sources, options, warnings);
  }
  BlockSystem newton(const State& minus, const Params& params, const SourceData& sources,
                     const AssemblyOptions& options = {}, std::vector<Warning>* warnings = nullptr) const {
    return assemble(Scheme::newton, minus, minus, params, sources, options, warnings);
  }

  /// Step-size threshold 1 / (8 S |B-|^2_inf); infinity when B- = 0.
  double step_size_threshold(std::span<const double> B_minus, const Params& params) const;

 private:
  const Discretization& disc_;
  const OperatorSet& ops_;
};

}  // namespace mhd
