#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>
#include <vector>

#include "fvlab/kernels.hpp"
#include "fvlab/sparse.hpp"

using namespace fvlab;

namespace {

std::vector<double> random_vec(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  std::vector<double> v(n);
  for (double& x : v) x = normal(rng);
  return v;
}

SparseOperator random_csr(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  SparseBuilder b(n, n);
  for (std::size_t r = 0; r < n; ++r) {
    std::vector<std::pair<std::int32_t, double>> entries;
    const std::size_t count = 1 + rng() % 7;
    for (std::size_t k = 0; k < count; ++k) {
      entries.emplace_back(static_cast<std::int32_t>(rng() % n), normal(rng));
    }
    b.add_row(entries);
  }
  return b.finish();
}

struct BackendGuard {
  ~BackendGuard() { kernels::set_backend(kernels::Backend::auto_detect); }
};

}  // namespace

TEST_CASE("backend selection") {
  BackendGuard guard;
  kernels::set_backend(kernels::Backend::scalar);
  CHECK(kernels::active_backend() == "scalar");
  if (kernels::avx2_available()) {
    kernels::set_backend(kernels::Backend::avx2);
    CHECK(kernels::active_backend() == "avx2");
  } else {
    CHECK_THROWS_AS(kernels::set_backend(kernels::Backend::avx2), std::runtime_error);
  }
  kernels::set_backend(kernels::Backend::auto_detect);
  CHECK((kernels::active_backend() == "scalar" || kernels::active_backend() == "avx2"));
}

TEST_CASE("kernel determinism within a backend") {
  BackendGuard guard;
  kernels::set_backend(kernels::Backend::scalar);
  const std::vector<double> x = random_vec(1003, 1);
  const std::vector<double> y = random_vec(1003, 2);
  const double a = kernels::dot(x.data(), y.data(), x.size());
  const double b = kernels::dot(x.data(), y.data(), x.size());
  CHECK(a == b);  // bit-identical
}

TEST_CASE("scalar and avx2 backends agree") {
  if (!kernels::avx2_available()) {
    MESSAGE("AVX2 not available on this machine; skipping equivalence checks");
    return;
  }
  BackendGuard guard;
  // Sizes chosen to exercise the vector body and every remainder length.
  for (std::size_t n : {1ul, 2ul, 3ul, 4ul, 5ul, 7ul, 8ul, 64ul, 101ul, 1000ul, 4097ul}) {
    const std::vector<double> x = random_vec(n, 100 + n);
    const std::vector<double> y = random_vec(n, 200 + n);

    kernels::set_backend(kernels::Backend::scalar);
    const double dot_s = kernels::dot(x.data(), y.data(), n);
    std::vector<double> axpy_s = y;
    kernels::axpy(1.7, x.data(), axpy_s.data(), n);
    std::vector<double> xpby_s = y;
    kernels::xpby(x.data(), -0.3, xpby_s.data(), n);
    std::vector<double> had_s(n);
    kernels::hadamard(x.data(), y.data(), had_s.data(), n);

    kernels::set_backend(kernels::Backend::avx2);
    const double dot_v = kernels::dot(x.data(), y.data(), n);
    std::vector<double> axpy_v = y;
    kernels::axpy(1.7, x.data(), axpy_v.data(), n);
    std::vector<double> xpby_v = y;
    kernels::xpby(x.data(), -0.3, xpby_v.data(), n);
    std::vector<double> had_v(n);
    kernels::hadamard(x.data(), y.data(), had_v.data(), n);

    CHECK(std::abs(dot_s - dot_v) <=
          1e-12 * std::max(1.0, std::abs(dot_s)) * std::sqrt(static_cast<double>(n)));
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(axpy_s[i] == doctest::Approx(axpy_v[i]).epsilon(1e-14));
      CHECK(xpby_s[i] == doctest::Approx(xpby_v[i]).epsilon(1e-14));
      CHECK(had_s[i] == had_v[i]);  // elementwise products are exact
    }
  }
}

TEST_CASE("spmv backends agree") {
  if (!kernels::avx2_available()) return;
  BackendGuard guard;
  for (std::size_t n : {1ul, 5ul, 32ul, 257ul}) {
    const SparseOperator a = random_csr(n, 300 + n);
    const std::vector<double> x = random_vec(n, 400 + n);

    kernels::set_backend(kernels::Backend::scalar);
    const std::vector<double> ys = a.apply(x);
    kernels::set_backend(kernels::Backend::avx2);
    const std::vector<double> yv = a.apply(x);

    double scale = 0.0;
    for (double v : ys) scale = std::max(scale, std::abs(v));
    for (std::size_t i = 0; i < n; ++i) {
      CHECK(std::abs(ys[i] - yv[i]) <= 1e-13 * std::max(1.0, scale));
    }
  }
}
