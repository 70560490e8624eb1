#include "mhd/linalg/block_preconditioner.hpp"

#include <stdexcept>

namespace mhd::linalg {

void BlockDiagonalPreconditioner::add_block(const SparseMatrix& block) {
  blocks_.emplace_back(block);
  offsets_.push_back(size_);
  size_ += block.rows();
}

void BlockDiagonalPreconditioner::apply(std::span<const double> r, std::span<double> z) const {
  if (r.size() != static_cast<std::size_t>(size_) || z.size() != r.size()) {
    throw std::invalid_argument("BlockDiagonalPreconditioner::apply: size mismatch");
  }
  for (std::size_t b = 0; b < blocks_.size(); ++b) {
    const auto n = static_cast<std::size_t>(blocks_[b].size());
    blocks_[b].solve(r.subspan(offsets_[b], n), z.subspan(offsets_[b], n));
  }
}

}  // namespace mhd::linalg
