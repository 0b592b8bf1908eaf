#include "fvlab/kernels.hpp"

namespace fvlab::kernels::detail {

namespace {

// Four accumulators in a fixed interleaved order. Matches the lane layout of
// the AVX2 variant closely (not bit-exactly, equivalence is tested to a
// relative tolerance).
double dot_scalar(const double* x, const double* y, std::size_t n) {
  double acc0 = 0.0, acc1 = 0.0, acc2 = 0.0, acc3 = 0.0;
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    acc0 += x[i] * y[i];
    acc1 += x[i + 1] * y[i + 1];
    acc2 += x[i + 2] * y[i + 2];
    acc3 += x[i + 3] * y[i + 3];
  }
  double acc = (acc0 + acc1) + (acc2 + acc3);
  for (; i < n; ++i) acc += x[i] * y[i];
  return acc;
}

void axpy_scalar(double a, const double* x, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] += a * x[i];
}

void xpby_scalar(const double* x, double b, double* y, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) y[i] = x[i] + b * y[i];
}

void hadamard_scalar(const double* x, const double* y, double* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) out[i] = x[i] * y[i];
}

void csr_spmv_scalar(std::size_t n_rows, const std::size_t* row_ptr, const std::int32_t* col_idx,
                     const double* values, const double* x, double* y) {
  for (std::size_t r = 0; r < n_rows; ++r) {
    double acc = 0.0;
    for (std::size_t k = row_ptr[r]; k < row_ptr[r + 1]; ++k) {
      acc += values[k] * x[col_idx[k]];
    }
    y[r] = acc;
  }
}

}  // namespace

const Ops scalar_ops = {dot_scalar, axpy_scalar, xpby_scalar, hadamard_scalar, csr_spmv_scalar};

}  // namespace fvlab::kernels::detail
