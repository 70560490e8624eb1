#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "mhd/assembly/discretization.hpp"
#include "mhd/linalg/sparse.hpp"

namespace mhd {

/// Physical and discretization parameters of one step.
struct Params {
  double Re = 1.0;
  double Rm = 1.0;
  double S = 1.0;
  double k = 0.01;
  bool grad_div = true;

  /// Throws std::invalid_argument unless all numbers are positive and finite.
  void validate() const;
};

/// Source functionals, already tested against the basis functions of each
/// space. An empty vector means zero.
struct SourceData {
  std::vector<double> f;  // velocity
  std::vector<double> r;  // edge space
  std::vector<double> l;  // face space
  std::vector<double> g;  // pressure

  /// Throws std::invalid_argument when a non-empty block has the wrong size.
  void check(const DofLayout& layout) const;
};

struct Warning {
  enum class Kind { step_size_bound, divergence_violation, noncompliant_source, h3_condition };
  Kind kind;
  std::string message;
  double value = 0.0;
  double threshold = 0.0;
};

const char* warning_kind_name(Warning::Kind kind);

/// One linearized step: monolithic operator over [u | E | B | p | lambda],
/// right-hand side, essential-BC mask and symmetry flag.
struct BlockSystem {
  DofLayout layout;
  linalg::SparseMatrix matrix;
  std::vector<double> rhs;
  std::vector<std::uint8_t> mask;
  bool symmetric = false;
  bool bcs_applied = false;
};

/// Symmetric elimination of the masked DOFs: zero row and column, unit
/// diagonal, zero right-hand side. Homogeneous data only.
void apply_essential_bcs(BlockSystem& system, std::span<const std::uint8_t> mask);

/// Extracts rows [r0, r0 + nr) and columns [c0, c0 + nc).
linalg::SparseMatrix extract_block(const linalg::SparseMatrix& a, int r0, int nr, int c0, int nc);

}  // namespace mhd
