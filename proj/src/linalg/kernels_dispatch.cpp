#include <atomic>
#include <cstdlib>
#include <cstring>
#include <stdexcept>

#include "mhd/linalg/kernels.hpp"

namespace mhd::simd {

namespace {

bool cpu_has_avx2() {
#if defined(MHD_HAVE_AVX2_KERNELS) && (defined(__GNUC__) || defined(__clang__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

Isa initial_isa() {
  const char* env = std::getenv("MHD_SIMD");
  if (env != nullptr && std::strcmp(env, "scalar") == 0) return Isa::scalar;
  return detected_isa();
}

std::atomic<Isa>& current() {
  static std::atomic<Isa> isa{initial_isa()};
  return isa;
}

}  // namespace

const char* isa_name(Isa isa) {
  switch (isa) {
    case Isa::scalar: return "scalar";
    case Isa::avx2: return "avx2";
  }
  return "unknown";
}

Isa detected_isa() {
  static const bool avx2 = cpu_has_avx2();
  return avx2 ? Isa::avx2 : Isa::scalar;
}

bool isa_available(Isa isa) { return isa == Isa::scalar || detected_isa() == Isa::avx2; }

Isa active_isa() { return current().load(std::memory_order_relaxed); }

void set_active_isa(Isa isa) {
  if (!isa_available(isa)) throw std::runtime_error("set_active_isa: instruction set not available");
  current().store(isa, std::memory_order_relaxed);
}

double dot(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("dot: size mismatch");
#if defined(MHD_HAVE_AVX2_KERNELS)
  if (active_isa() == Isa::avx2) return avx2::dot(x.data(), y.data(), x.size());
#endif
  return scalar::dot(x.data(), y.data(), x.size());
}

void axpy(double alpha, std::span<const double> x, std::span<double> y) {
  if (x.size() != y.size()) throw std::invalid_argument("axpy: size mismatch");
#if defined(MHD_HAVE_AVX2_KERNELS)
  if (active_isa() == Isa::avx2) return avx2::axpy(alpha, x.data(), y.data(), x.size());
#endif
  scalar::axpy(alpha, x.data(), y.data(), x.size());
}

void csr_spmv(const CsrView& a, const double* x, double* y) {
#if defined(MHD_HAVE_AVX2_KERNELS)
  if (active_isa() == Isa::avx2) return avx2::csr_spmv(a, x, y);
#endif
  scalar::csr_spmv(a, x, y);
}

}  // namespace mhd::simd
