#pragma once

#include <span>
#include <vector>

#include "mhd/linalg/direct.hpp"

namespace mhd::linalg {

/// Block-diagonal SPD preconditioner: each diagonal block is Cholesky
/// factorized and applied independently. Blocks must tile the index range.
class BlockDiagonalPreconditioner {
 public:
  BlockDiagonalPreconditioner() = default;

  /// Appends the next diagonal block. Throws SingularMatrixError when the
  /// block is not SPD.
  void add_block(const SparseMatrix& block);

  int size() const { return size_; }
  int num_blocks() const { return static_cast<int>(blocks_.size()); }
  int block_offset(int b) const { return offsets_[b]; }
  int block_size(int b) const { return blocks_[b].size(); }

  /// z = P^{-1} r.
  void apply(std::span<const double> r, std::span<double> z) const;

 private:
  std::vector<SparseCholesky> blocks_;
  std::vector<int> offsets_;
  int size_ = 0;
};

}  // namespace mhd::linalg
