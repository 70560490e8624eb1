#include "mhd/linalg/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

#include "mhd/linalg/kernels.hpp"

namespace mhd::linalg {

SparseMatrix::SparseMatrix(int rows, int cols) : rows_(rows), cols_(cols), row_ptr_(rows + 1, 0) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("SparseMatrix: negative shape");
}

SparseMatrix::SparseMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx,
                           std::vector<double> values)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)),
      values_(std::move(values)) {
  if (rows < 0 || cols < 0) throw std::invalid_argument("SparseMatrix: negative shape");
  if (row_ptr_.size() != static_cast<std::size_t>(rows) + 1 || row_ptr_.front() != 0 ||
      row_ptr_.back() != static_cast<int>(col_idx_.size()) || col_idx_.size() != values_.size()) {
    throw std::invalid_argument("SparseMatrix: inconsistent CSR arrays");
  }
  for (int i = 0; i < rows; ++i) {
    if (row_ptr_[i] > row_ptr_[i + 1]) throw std::invalid_argument("SparseMatrix: row_ptr not monotone");
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      if (col_idx_[p] < 0 || col_idx_[p] >= cols) throw std::invalid_argument("SparseMatrix: column out of range");
      if (p > row_ptr_[i] && col_idx_[p] <= col_idx_[p - 1]) {
        throw std::invalid_argument("SparseMatrix: columns not sorted/unique");
      }
    }
  }
}

SparseMatrix SparseMatrix::from_triplets(int rows, int cols, std::span<const Triplet> triplets) {
  std::vector<int> count(rows + 1, 0);
  for (const auto& t : triplets) {
    if (t.row < 0 || t.row >= rows || t.col < 0 || t.col >= cols) {
      throw std::invalid_argument("from_triplets: index out of range");
    }
    ++count[t.row + 1];
  }
  std::partial_sum(count.begin(), count.end(), count.begin());
  std::vector<int> cols_tmp(triplets.size());
  std::vector<double> vals_tmp(triplets.size());
  std::vector<int> next(count.begin(), count.end() - 1);
  for (const auto& t : triplets) {
    const int p = next[t.row]++;
    cols_tmp[p] = t.col;
    vals_tmp[p] = t.value;
  }

  std::vector<int> row_ptr(rows + 1, 0);
  std::vector<int> col_idx;
  std::vector<double> values;
  col_idx.reserve(triplets.size());
  values.reserve(triplets.size());
  std::vector<int> order;
  for (int i = 0; i < rows; ++i) {
    const int b = count[i];
    const int e = count[i + 1];
    order.resize(e - b);
    std::iota(order.begin(), order.end(), b);
    // Stable so duplicates are summed in insertion order.
    std::stable_sort(order.begin(), order.end(), [&](int x, int y) { return cols_tmp[x] < cols_tmp[y]; });
    for (std::size_t q = 0; q < order.size(); ++q) {
      const int p = order[q];
      if (q > 0 && cols_tmp[p] == col_idx.back()) {
        values.back() += vals_tmp[p];
      } else {
        col_idx.push_back(cols_tmp[p]);
        values.push_back(vals_tmp[p]);
      }
    }
    row_ptr[i + 1] = static_cast<int>(col_idx.size());
  }
  return SparseMatrix(rows, cols, std::move(row_ptr), std::move(col_idx), std::move(values));
}

SparseMatrix SparseMatrix::identity(int n) {
  std::vector<double> ones(n, 1.0);
  return diagonal(ones);
}

SparseMatrix SparseMatrix::diagonal(std::span<const double> diag) {
  const int n = static_cast<int>(diag.size());
  std::vector<int> row_ptr(n + 1);
  std::vector<int> col(n);
  std::iota(row_ptr.begin(), row_ptr.end(), 0);
  std::iota(col.begin(), col.end(), 0);
  return SparseMatrix(n, n, std::move(row_ptr), std::move(col), std::vector<double>(diag.begin(), diag.end()));
}

double SparseMatrix::at(int i, int j) const {
  const auto b = col_idx_.begin() + row_ptr_[i];
  const auto e = col_idx_.begin() + row_ptr_[i + 1];
  const auto it = std::lower_bound(b, e, j);
  if (it == e || *it != j) return 0.0;
  return values_[it - col_idx_.begin()];
}

void SparseMatrix::multiply(std::span<const double> x, std::span<double> y) const {
  if (x.size() != static_cast<std::size_t>(cols_) || y.size() != static_cast<std::size_t>(rows_)) {
    throw std::invalid_argument("SparseMatrix::multiply: dimension mismatch");
  }
  simd::CsrView view{rows_, row_ptr_.data(), col_idx_.data(), values_.data()};
  simd::csr_spmv(view, x.data(), y.data());
}

std::vector<double> SparseMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(rows_);
  multiply(x, y);
  return y;
}

std::vector<double> SparseMatrix::multiply_transpose(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(rows_)) {
    throw std::invalid_argument("SparseMatrix::multiply_transpose: dimension mismatch");
  }
  std::vector<double> y(cols_, 0.0);
  for (int i = 0; i < rows_; ++i) {
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) y[col_idx_[p]] += values_[p] * x[i];
  }
  return y;
}

SparseMatrix SparseMatrix::transpose() const {
  std::vector<int> row_ptr(cols_ + 1, 0);
  for (int c : col_idx_) ++row_ptr[c + 1];
  std::partial_sum(row_ptr.begin(), row_ptr.end(), row_ptr.begin());
  std::vector<int> next(row_ptr.begin(), row_ptr.end() - 1);
  std::vector<int> col(values_.size());
  std::vector<double> val(values_.size());
  for (int i = 0; i < rows_; ++i) {
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      const int q = next[col_idx_[p]]++;
      col[q] = i;
      val[q] = values_[p];
    }
  }
  return SparseMatrix(cols_, rows_, std::move(row_ptr), std::move(col), std::move(val));
}

SparseMatrix SparseMatrix::scaled(double alpha) const {
  SparseMatrix out = *this;
  for (double& v : out.values_) v *= alpha;
  return out;
}

void SparseMatrix::append_triplets(std::vector<Triplet>& out, int row_offset, int col_offset, double scale) const {
  for (int i = 0; i < rows_; ++i) {
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
      out.push_back({i + row_offset, col_idx_[p] + col_offset, scale * values_[p]});
    }
  }
}

double SparseMatrix::max_abs() const {
  double m = 0.0;
  for (double v : values_) m = std::max(m, std::abs(v));
  return m;
}

double SparseMatrix::norm_inf() const {
  double m = 0.0;
  for (int i = 0; i < rows_; ++i) {
    double s = 0.0;
    for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) s += std::abs(values_[p]);
    m = std::max(m, s);
  }
  return m;
}

double SparseMatrix::norm_one() const {
  std::vector<double> colsum(cols_, 0.0);
  for (std::size_t p = 0; p < values_.size(); ++p) colsum[col_idx_[p]] += std::abs(values_[p]);
  return colsum.empty() ? 0.0 : *std::max_element(colsum.begin(), colsum.end());
}

SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha, double beta) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("add: shape mismatch");
  std::vector<Triplet> t;
  t.reserve(a.nnz() + b.nnz());
  a.append_triplets(t, 0, 0, alpha);
  b.append_triplets(t, 0, 0, beta);
  return SparseMatrix::from_triplets(a.rows(), a.cols(), t);
}

SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.cols() != b.rows()) throw std::invalid_argument("multiply: inner dimension mismatch");
  std::vector<int> row_ptr(a.rows() + 1, 0);
  std::vector<int> col;
  std::vector<double> val;
  std::vector<double> acc(b.cols(), 0.0);
  std::vector<int> marker(b.cols(), -1);
  std::vector<int> pattern;
  const auto& arp = a.row_ptr();
  const auto& aci = a.col_idx();
  const auto& av = a.values();
  const auto& brp = b.row_ptr();
  const auto& bci = b.col_idx();
  const auto& bv = b.values();
  for (int i = 0; i < a.rows(); ++i) {
    pattern.clear();
    for (int p = arp[i]; p < arp[i + 1]; ++p) {
      const int k = aci[p];
      for (int q = brp[k]; q < brp[k + 1]; ++q) {
        const int j = bci[q];
        if (marker[j] != i) {
          marker[j] = i;
          acc[j] = 0.0;
          pattern.push_back(j);
        }
        acc[j] += av[p] * bv[q];
      }
    }
    std::sort(pattern.begin(), pattern.end());
    for (int j : pattern) {
      col.push_back(j);
      val.push_back(acc[j]);
    }
    row_ptr[i + 1] = static_cast<int>(col.size());
  }
  return SparseMatrix(a.rows(), b.cols(), std::move(row_ptr), std::move(col), std::move(val));
}

SparseMatrix weighted_gram(const SparseMatrix& a, std::span<const double> d) {
  if (d.size() != static_cast<std::size_t>(a.rows())) throw std::invalid_argument("weighted_gram: size mismatch");
  SparseMatrix da = a;
  auto& vals = da.values();
  for (int i = 0; i < a.rows(); ++i) {
    for (int p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) vals[p] *= d[i];
  }
  return multiply(a.transpose(), da);
}

double max_abs_difference(const SparseMatrix& a, const SparseMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) throw std::invalid_argument("max_abs_difference: shape mismatch");
  return add(a, b, 1.0, -1.0).max_abs();
}

bool is_symmetric(const SparseMatrix& a, double rel_tol) {
  if (a.rows() != a.cols()) return false;
  const double scale = a.max_abs();
  return max_abs_difference(a, a.transpose()) <= rel_tol * scale;
}

SparseMatrix eliminate_dofs(const SparseMatrix& a, std::span<const unsigned char> mask, double diag) {
  if (a.rows() != a.cols() || mask.size() != static_cast<std::size_t>(a.rows())) {
    throw std::invalid_argument("eliminate_dofs: shape mismatch");
  }
  std::vector<int> row_ptr(a.rows() + 1, 0);
  std::vector<int> col;
  std::vector<double> val;
  col.reserve(a.nnz());
  val.reserve(a.nnz());
  for (int i = 0; i < a.rows(); ++i) {
    if (mask[i]) {
      col.push_back(i);
      val.push_back(diag);
    } else {
      for (int p = a.row_ptr()[i]; p < a.row_ptr()[i + 1]; ++p) {
        const int j = a.col_idx()[p];
        if (mask[j]) continue;
        col.push_back(j);
        val.push_back(a.values()[p]);
      }
    }
    row_ptr[i + 1] = static_cast<int>(col.size());
  }
  return SparseMatrix(a.rows(), a.cols(), std::move(row_ptr), std::move(col), std::move(val));
}

double norm2(std::span<const double> x) { return std::sqrt(simd::dot(x, x)); }

double norm_inf(std::span<const double> x) {
  double m = 0.0;
  for (double v : x) m = std::max(m, std::abs(v));
  return m;
}

}  // namespace mhd::linalg
