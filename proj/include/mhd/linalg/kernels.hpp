#pragma once

// Vector kernels used by the Krylov solver and sparse mat-vec. Each kernel has
// a scalar reference implementation and, on x86-64, an AVX2/FMA variant. The
// variant is chosen once at startup from CPUID and can be overridden for
// testing (or with MHD_SIMD=scalar in the environment).

#include <cstddef>
#include <span>

namespace mhd::simd {

enum class Isa { scalar, avx2 };

const char* isa_name(Isa isa);

/// Best instruction set supported by both the build and the running CPU.
Isa detected_isa();

/// Instruction set currently used by the dispatching kernels below.
Isa active_isa();

/// Forces the dispatch target. Requesting avx2 on a machine without it throws.
void set_active_isa(Isa isa);

bool isa_available(Isa isa);

struct CsrView {
  int rows = 0;
  const int* row_ptr = nullptr;
  const int* col = nullptr;
  const double* val = nullptr;
};

double dot(std::span<const double> x, std::span<const double> y);
void axpy(double alpha, std::span<const double> x, std::span<double> y);
/// y = A x
void csr_spmv(const CsrView& a, const double* x, double* y);

namespace scalar {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void csr_spmv(const CsrView& a, const double* x, double* y);
}  // namespace scalar

#if defined(MHD_HAVE_AVX2_KERNELS)
namespace avx2 {
double dot(const double* x, const double* y, std::size_t n);
void axpy(double alpha, const double* x, double* y, std::size_t n);
void csr_spmv(const CsrView& a, const double* x, double* y);
}  // namespace avx2
#endif

}  // namespace mhd::simd
