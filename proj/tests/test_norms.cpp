#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>

#include "fvlab/errors.hpp"
#include "fvlab/norms.hpp"
#include "fvlab/stencil.hpp"

using namespace fvlab;

namespace {

TensorMesh single_dof_mesh3() {
  return TensorMesh({axis_uniform(2), axis_uniform(2), axis_uniform(2)});
}

MeshFunction spike3(const TensorMesh& m) {
  MeshFunction v(m);
  v.at(std::vector<int>{1, 1, 1}) = 1.0;
  return v;
}

MeshFunction random_interior(const TensorMesh& m, std::uint64_t seed) {
  MeshFunction v(m);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  for_each_interior(m, [&](std::span<const int> idx) { v.at(idx) = normal(rng); });
  return v;
}

}  // namespace

TEST_CASE("pairwise_sum matches sequential summation") {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> terms(1037);
  for (double& t : terms) t = u(rng);
  const double ref = std::accumulate(terms.begin(), terms.end(), 0.0);
  CHECK(pairwise_sum(terms) == doctest::Approx(ref).epsilon(1e-13));
  CHECK(pairwise_sum(terms) == pairwise_sum(terms));  // deterministic
  CHECK(pairwise_sum(std::vector<double>{}) == 0.0);
  CHECK(pairwise_sum(std::vector<double>{5.0}) == 5.0);
}

TEST_CASE("inner product") {
  const TensorMesh m = single_dof_mesh3();
  SUBCASE("zero") {
    const MeshFunction z(m);
    CHECK(inner(z, z) == 0.0);
  }
  SUBCASE("single interior node with unit value") {
    const MeshFunction v = spike3(m);
    CHECK(inner(v, v) == doctest::Approx(0.125).epsilon(1e-15));
    CHECK(l2_norm(v) == doctest::Approx(std::sqrt(0.125)).epsilon(1e-15));
  }
  SUBCASE("bilinearity") {
    const TensorMesh mm({axis_random(4, 0.3, 1), axis_random(5, 0.3, 2)});
    const MeshFunction v1 = random_interior(mm, 10);
    const MeshFunction v2 = random_interior(mm, 11);
    const MeshFunction w = random_interior(mm, 12);
    const double a = 1.7, b = -0.4;
    MeshFunction combo(mm);
    for (std::size_t i = 0; i < combo.size(); ++i) combo[i] = a * v1[i] + b * v2[i];
    CHECK(inner(combo, w) ==
          doctest::Approx(a * inner(v1, w) + b * inner(v2, w)).epsilon(1e-13));
  }
  SUBCASE("mesh mismatch") {
    const TensorMesh other({axis_uniform(2), axis_uniform(2), axis_uniform(2)});
    CHECK_THROWS_AS(inner(MeshFunction(m), MeshFunction(other)), std::invalid_argument);
  }
}

TEST_CASE("one-sided inner product") {
  SUBCASE("zero function") {
    const TensorMesh m = single_dof_mesh3();
    CHECK(onesided_norm_sq(MeshFunction(m), 0) == 0.0);
  }
  SUBCASE("backward difference of the spike") {
    const TensorMesh m = single_dof_mesh3();
    const MeshFunction d = backward_diff(spike3(m), 0);
    // Two nonzero terms (+2 and -2), each weighted h*hbar*hbar = 1/8.
    CHECK(onesided_norm_sq(d, 0) == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("weight audit for v == 1") {
    const TensorMesh m({axis_random(5, 0.3, 31), axis_random(4, 0.3, 32),
                        axis_random(6, 0.3, 33)});
    MeshFunction ones(m);
    for (std::size_t i = 0; i < ones.size(); ++i) ones[i] = 1.0;
    for (int axis = 0; axis < 3; ++axis) {
      double expected = 1.0;  // sum of steps along `axis`
      for (int a = 0; a < 3; ++a) {
        if (a == axis) continue;
        const Axis& ax = m.axis(a);
        expected *= 1.0 - (ax.step(1) + ax.step(ax.segments())) / 2.0;
      }
      CHECK(onesided_norm_sq(ones, axis) == doctest::Approx(expected).epsilon(1e-13));
    }
  }
}

TEST_CASE("h1 seminorm and norms report") {
  const TensorMesh m = single_dof_mesh3();
  SUBCASE("single-spike hand values") {
    const MeshFunction v = spike3(m);
    const double semi = h1_seminorm(v);
    CHECK(semi * semi == doctest::Approx(3.0).epsilon(1e-14));
    const NormReport r = norms(v);
    CHECK(r.l2 * r.l2 == doctest::Approx(0.125).epsilon(1e-14));
    CHECK(r.max == 1.0);
    CHECK(r.h1 * r.h1 == doctest::Approx(r.l2 * r.l2 + r.h1_semi * r.h1_semi).epsilon(1e-12));
    // ||v||^2 <= (1/3) |v|_{1,h}^2
    CHECK(r.l2 * r.l2 <= (1.0 / 3.0) * semi * semi + 1e-12);
  }
  SUBCASE("zero function") {
    const NormReport r = norms(MeshFunction(m));
    CHECK(r.l2 == 0.0);
    CHECK(r.h1_semi == 0.0);
    CHECK(r.h1 == 0.0);
    CHECK(r.max == 0.0);
  }
  SUBCASE("homogeneity") {
    const TensorMesh mm({axis_random(5, 0.3, 41), axis_random(5, 0.3, 42)});
    const MeshFunction v = random_interior(mm, 43);
    MeshFunction v2(mm);
    for (std::size_t i = 0; i < v.size(); ++i) v2[i] = 2.0 * v[i];
    const NormReport a = norms(v);
    const NormReport b = norms(v2);
    CHECK(b.l2 == doctest::Approx(2 * a.l2).epsilon(1e-13));
    CHECK(b.h1_semi == doctest::Approx(2 * a.h1_semi).epsilon(1e-13));
    CHECK(b.h1 == doctest::Approx(2 * a.h1).epsilon(1e-13));
    CHECK(b.max == doctest::Approx(2 * a.max).epsilon(1e-13));
  }
}

TEST_CASE("h1 gram matrix") {
  SUBCASE("single DOF value 3.125") {
    const TensorMesh m = single_dof_mesh3();
    const SparseOperator g = h1_gram(m);
    REQUIRE(g.rows == 1);
    CHECK(g.value_at(0, 0) == doctest::Approx(3.125).epsilon(1e-14));
    CHECK(symmetry_defect(g) == 0.0);
  }
  SUBCASE("quadratic form matches the norm on random functions") {
    const TensorMesh m({axis_random(5, 0.3, 51), axis_random(4, 0.3, 52),
                        axis_random(4, 0.3, 53)});
    const SparseOperator g = h1_gram(m);
    CHECK(symmetry_defect(g) == 0.0);
    for (std::uint64_t seed : {60ull, 61ull, 62ull}) {
      const MeshFunction v = random_interior(m, seed);
      const std::vector<double> x = gather_interior(v);
      const std::vector<double> gx = g.apply(x);
      double quad = 0.0;
      for (std::size_t i = 0; i < x.size(); ++i) quad += x[i] * gx[i];
      const NormReport r = norms(v);
      CHECK(quad == doctest::Approx(r.h1 * r.h1).epsilon(1e-12));
    }
  }
}

TEST_CASE("dual norm") {
  SUBCASE("zero is zero") {
    const TensorMesh m = single_dof_mesh3();
    CHECK(hminus1_dense(MeshFunction(m)) == 0.0);
  }
  SUBCASE("single DOF closed form") {
    const TensorMesh m = single_dof_mesh3();
    CHECK(hminus1_dense(spike3(m)) ==
          doctest::Approx(0.125 / std::sqrt(3.125)).epsilon(1e-14));
  }
  SUBCASE("variational characterization with maximizer") {
    const TensorMesh m({axis_random(4, 0.3, 71), axis_random(4, 0.3, 72),
                        axis_random(4, 0.3, 73)});
    const MeshFunction v = random_interior(m, 74);
    std::vector<double> wstar;
    const double dual = hminus1_dense(v, kDefaultHminus1Cap, &wstar);
    CHECK(dual > 0.0);
    // No test function beats the supremum.
    for (std::uint64_t seed : {80ull, 81ull, 82ull, 83ull, 84ull}) {
      const MeshFunction w = random_interior(m, seed);
      const double ratio = inner(v, w) / norms(w).h1;
      CHECK(ratio <= dual + 1e-10);
    }
    // The returned maximizer attains it.
    const MeshFunction ws = scatter_interior(m, wstar);
    const double attained = inner(v, ws) / norms(ws).h1;
    CHECK(attained == doctest::Approx(dual).epsilon(1e-8));
  }
  SUBCASE("capacity cap") {
    const TensorMesh big({axis_uniform(70), axis_uniform(70)});  // 69^2 = 4761 DOFs
    CHECK_THROWS_AS(hminus1_dense(MeshFunction(big)), CapacityError);
    const TensorMesh small({axis_uniform(10), axis_uniform(10)});  // 81 DOFs
    CHECK_THROWS_AS(hminus1_dense(MeshFunction(small), 50), CapacityError);
    CHECK_NOTHROW(hminus1_dense(MeshFunction(small)));
  }
}

TEST_CASE("discrete Poincare inequality on random functions") {
  std::mt19937_64 rng(90);
  for (int trial = 0; trial < 20; ++trial) {
    const TensorMesh m({axis_random(3 + static_cast<int>(rng() % 4), 0.3, rng()),
                        axis_random(3 + static_cast<int>(rng() % 4), 0.3, rng()),
                        axis_random(3 + static_cast<int>(rng() % 4), 0.3, rng())});
    const MeshFunction v = random_interior(m, rng());
    const double l2 = l2_norm(v);
    const double semi = h1_seminorm(v);
    CHECK(l2 * l2 <= (1.0 / 3.0) * semi * semi + 1e-12);
  }
}
