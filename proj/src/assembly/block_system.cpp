#include "mhd/assembly/block_system.hpp"

#include <cmath>
#include <stdexcept>

namespace mhd {

void Params::validate() const {
  auto positive = [](double v) { return std::isfinite(v) && v > 0.0; };
  if (!positive(Re) || !positive(Rm) || !positive(S)) {
    throw std::invalid_argument("Params: Re, Rm and S must be positive");
  }
  if (!positive(k)) throw std::invalid_argument("Params: time step k must be positive");
}

void SourceData::check(const DofLayout& layout) const {
  auto ok = [](const std::vector<double>& v, int n) { return v.empty() || v.size() == static_cast<std::size_t>(n); };
  if (!ok(f, layout.n_u) || !ok(r, layout.n_E) || !ok(l, layout.n_B) || !ok(g, layout.n_p)) {
    throw std::invalid_argument("SourceData: block size does not match the discretization");
  }
}

const char* warning_kind_name(Warning::Kind kind) {
  switch (kind) {
    case Warning::Kind::step_size_bound: return "step_size_bound";
    case Warning::Kind::divergence_violation: return "divergence_violation";
    case Warning::Kind::noncompliant_source: return "noncompliant_source";
    case Warning::Kind::h3_condition: return "h3_condition";
  }
  return "unknown";
}

void apply_essential_bcs(BlockSystem& system, std::span<const std::uint8_t> mask) {
  if (mask.size() != system.rhs.size()) throw std::invalid_argument("apply_essential_bcs: mask size mismatch");
  system.matrix = linalg::eliminate_dofs(system.matrix, mask, 1.0);
  for (std::size_t i = 0; i < mask.size(); ++i) {
    if (mask[i]) system.rhs[i] = 0.0;
  }
  system.mask.assign(mask.begin(), mask.end());
  system.bcs_applied = true;
}

linalg::SparseMatrix extract_block(const linalg::SparseMatrix& a, int r0, int nr, int c0, int nc) {
  if (r0 < 0 || c0 < 0 || r0 + nr > a.rows() || c0 + nc > a.cols()) {
    throw std::invalid_argument("extract_block: range out of bounds");
  }
  std::vector<int> row_ptr(nr + 1, 0);
  std::vector<int> col;
  std::vector<double> val;
  for (int i = 0; i < nr; ++i) {
    for (int p = a.row_ptr()[r0 + i]; p < a.row_ptr()[r0 + i + 1]; ++p) {
      const int j = a.col_idx()[p];
      if (j >= c0 && j < c0 + nc) {
        col.push_back(j - c0);
        val.push_back(a.values()[p]);
      }
    }
    row_ptr[i + 1] = static_cast<int>(col.size());
  }
  return linalg::SparseMatrix(nr, nc, std::move(row_ptr), std::move(col), std::move(val));
}

}  // namespace mhd
