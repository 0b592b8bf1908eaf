#include "fvlab/kernels.hpp"

#include <atomic>
#include <stdexcept>

namespace fvlab::kernels {

namespace {

bool cpu_has_avx2() {
#if defined(FVLAB_HAVE_AVX2) && defined(__GNUC__)
  return __builtin_cpu_supports("avx2") && __builtin_cpu_supports("fma");
#else
  return false;
#endif
}

std::atomic<const detail::Ops*> g_ops{nullptr};

const detail::Ops* pick(Backend b) {
  switch (b) {
    case Backend::scalar:
      return &detail::scalar_ops;
    case Backend::avx2:
#ifdef FVLAB_HAVE_AVX2
      if (cpu_has_avx2()) return &detail::avx2_ops;
#endif
      throw std::runtime_error("AVX2 backend not available on this build/CPU");
    case Backend::auto_detect:
    default:
#ifdef FVLAB_HAVE_AVX2
      if (cpu_has_avx2()) return &detail::avx2_ops;
#endif
      return &detail::scalar_ops;
  }
}

const detail::Ops& ops() {
  const detail::Ops* p = g_ops.load(std::memory_order_acquire);
  if (!p) {
    p = pick(Backend::auto_detect);
    g_ops.store(p, std::memory_order_release);
  }
  return *p;
}

}  // namespace

void set_backend(Backend b) { g_ops.store(pick(b), std::memory_order_release); }

std::string active_backend() {
#ifdef FVLAB_HAVE_AVX2
  if (&ops() == &detail::avx2_ops) return "avx2";
#endif
  return "scalar";
}

bool avx2_available() { return cpu_has_avx2(); }

double dot(const double* x, const double* y, std::size_t n) { return ops().dot(x, y, n); }

void axpy(double a, const double* x, double* y, std::size_t n) { ops().axpy(a, x, y, n); }

void xpby(const double* x, double b, double* y, std::size_t n) { ops().xpby(x, b, y, n); }

void hadamard(const double* x, const double* y, double* out, std::size_t n) {
  ops().hadamard(x, y, out, n);
}

void csr_spmv(std::size_t n_rows, const std::size_t* row_ptr, const std::int32_t* col_idx,
              const double* values, const double* x, double* y) {
  ops().csr_spmv(n_rows, row_ptr, col_idx, values, x, y);
}

}  // namespace fvlab::kernels
