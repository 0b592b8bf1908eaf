#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

namespace fvlab::kernels {

// Vector kernels used by the solver's inner loops. Each has a scalar
// reference implementation and (when compiled in and supported by the CPU)
// an AVX2/FMA variant selected at runtime. Reductions use a fixed blocked
// accumulation order, so results are bit-identical across runs of the same
// binary on the same machine.

enum class Backend { auto_detect, scalar, avx2 };

/// Selects the backend. auto_detect (the default) picks the best supported
/// one. Requesting avx2 on a CPU without it throws std::runtime_error.
void set_backend(Backend b);

/// Name of the backend currently in use ("scalar" or "avx2").
std::string active_backend();

/// True when the AVX2 variant was compiled in and the CPU supports it.
bool avx2_available();

double dot(const double* x, const double* y, std::size_t n);

/// y += a*x
void axpy(double a, const double* x, double* y, std::size_t n);

/// y = x + b*y
void xpby(const double* x, double b, double* y, std::size_t n);

/// out[i] = x[i]*y[i]
void hadamard(const double* x, const double* y, double* out, std::size_t n);

/// CSR matrix-vector product: y = A x.
void csr_spmv(std::size_t n_rows, const std::size_t* row_ptr, const std::int32_t* col_idx,
              const double* values, const double* x, double* y);

namespace detail {

struct Ops {
  double (*dot)(const double*, const double*, std::size_t);
  void (*axpy)(double, const double*, double*, std::size_t);
  void (*xpby)(const double*, double, double*, std::size_t);
  void (*hadamard)(const double*, const double*, double*, std::size_t);
  void (*csr_spmv)(std::size_t, const std::size_t*, const std::int32_t*, const double*,
                   const double*, double*);
};

extern const Ops scalar_ops;
#ifdef FVLAB_HAVE_AVX2
extern const Ops avx2_ops;
#endif

}  // namespace detail

}  // namespace fvlab::kernels
