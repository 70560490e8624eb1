#include "mhd/linalg/kernels.hpp"

namespace mhd::simd::scalar {

double dot(const double* x, const double* y, std::size_t n) {
  double s = 0.0;
  for (std::size_t i = 0; i < n; ++i) s += x[i] * y[i];
  return s;
}

void axpy(double alpha, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void csr_spmv(const CsrView& a, const double* x, double* y) {
  for (int i = 0; i < a.rows; ++i) {
    double s = 0.0;
    for (int p = a.row_ptr[i]; p < a.row_ptr[i + 1]; ++p) s += a.val[p] * x[a.col[p]];
    y[i] = s;
  }
}

}  // namespace mhd::simd::scalar
