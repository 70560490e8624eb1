#pragma once

#include <span>
#include <vector>

namespace mhd::linalg {

struct Triplet {
  int row;
  int col;
  double value;
};

/// Compressed sparse row matrix. Column indices are sorted and unique within
/// each row; explicit zeros may be stored.
class SparseMatrix {
 public:
  SparseMatrix() = default;
  SparseMatrix(int rows, int cols);
  /// Takes ownership of raw CSR arrays; validates shape, ordering and uniqueness.
  SparseMatrix(int rows, int cols, std::vector<int> row_ptr, std::vector<int> col_idx,
               std::vector<double> values);

  /// Sums duplicate entries. Entries are accumulated in input order, so the
  /// result is deterministic for a deterministic triplet stream.
  static SparseMatrix from_triplets(int rows, int cols, std::span<const Triplet> triplets);
  static SparseMatrix identity(int n);
  static SparseMatrix diagonal(std::span<const double> diag);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  int nnz() const { return static_cast<int>(values_.size()); }

  const std::vector<int>& row_ptr() const { return row_ptr_; }
  const std::vector<int>& col_idx() const { return col_idx_; }
  const std::vector<double>& values() const { return values_; }
  std::vector<double>& values() { return values_; }

  /// Entry (i, j), zero when not stored.
  double at(int i, int j) const;

  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;
  /// y = A^T x
  std::vector<double> multiply_transpose(std::span<const double> x) const;

  SparseMatrix transpose() const;
  SparseMatrix scaled(double alpha) const;
  void append_triplets(std::vector<Triplet>& out, int row_offset = 0, int col_offset = 0,
                       double scale = 1.0) const;

  double max_abs() const;
  /// Max row sum of |a_ij|.
  double norm_inf() const;
  /// Max column sum of |a_ij|.
  double norm_one() const;

 private:
  int rows_ = 0;
  int cols_ = 0;
  std::vector<int> row_ptr_{0};
  std::vector<int> col_idx_;
  std::vector<double> values_;
};

/// alpha * A + beta * B.
SparseMatrix add(const SparseMatrix& a, const SparseMatrix& b, double alpha = 1.0, double beta = 1.0);
/// A * B.
SparseMatrix multiply(const SparseMatrix& a, const SparseMatrix& b);
/// A^T diag(d) A.
SparseMatrix weighted_gram(const SparseMatrix& a, std::span<const double> d);

/// max |A - A^T| <= rel_tol * max |A|.
bool is_symmetric(const SparseMatrix& a, double rel_tol);
/// max_ij |A_ij - B_ij|.
double max_abs_difference(const SparseMatrix& a, const SparseMatrix& b);

/// Zeroes the rows and columns of flagged DOFs and places `diag` on their
/// diagonal.
SparseMatrix eliminate_dofs(const SparseMatrix& a, std::span<const unsigned char> mask, double diag = 1.0);

double norm2(std::span<const double> x);
double norm_inf(std::span<const double> x);

}  // namespace mhd::linalg
