#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>

#include "fvlab/mesh.hpp"
#include "fvlab/sparse.hpp"
#include "fvlab/stencil.hpp"

using namespace fvlab;

namespace {

TensorMesh uniform3(int M) { return TensorMesh({axis_uniform(M), axis_uniform(M), axis_uniform(M)}); }

MeshFunction constant_fn(const TensorMesh& m, double c) {
  MeshFunction v(m);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = c;
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

TEST_CASE("backward_diff") {
  SUBCASE("constant gives zeros") {
    const TensorMesh m({axis_random(4, 0.3, 1), axis_random(5, 0.3, 2)});
    const MeshFunction d = backward_diff(constant_fn(m, 3.5), 0);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(d[i] == 0.0);
  }
  SUBCASE("linear exactness on uniform M=4") {
    const TensorMesh m({axis_uniform(4), axis_uniform(4)});
    MeshFunction v(m);
    for_each_index(std::vector<int>{0, 0}, std::vector<int>{4, 4},
                   [&](std::span<const int> idx) { v.at(idx) = m.axis(0).coord(idx[0]); });
    const MeshFunction d = backward_diff(v, 0);
    for (int i = 1; i <= 4; ++i) {
      for (int j = 1; j <= 3; ++j) {
        CHECK(d.at(std::vector<int>{i, j}) == doctest::Approx(1.0).epsilon(1e-14));
      }
    }
  }
  SUBCASE("hand case on (0,0.25,0.75,1)") {
    const TensorMesh m({axis_from_coords({0.0, 0.25, 0.75, 1.0}), axis_uniform(2)});
    MeshFunction v(m);
    v.at(std::vector<int>{1, 1}) = 1.0;  // spike at axis-0 index 1 on the interior line
    const MeshFunction d = backward_diff(v, 0);
    CHECK(d.at(std::vector<int>{1, 1}) == doctest::Approx(4.0).epsilon(1e-14));
    CHECK(d.at(std::vector<int>{2, 1}) == doctest::Approx(-2.0).epsilon(1e-14));
    CHECK(d.at(std::vector<int>{3, 1}) == 0.0);
  }
}

TEST_CASE("forward_diff") {
  SUBCASE("constant gives zeros") {
    const TensorMesh m({axis_random(4, 0.3, 3), axis_random(4, 0.3, 4)});
    const MeshFunction d = forward_diff(constant_fn(m, -2.0), 1);
    for (std::size_t i = 0; i < d.size(); ++i) CHECK(d[i] == 0.0);
  }
  SUBCASE("linear exactness on uniform M=4") {
    const TensorMesh m({axis_uniform(4), axis_uniform(4)});
    MeshFunction v(m);
    for_each_index(std::vector<int>{0, 0}, std::vector<int>{4, 4},
                   [&](std::span<const int> idx) { v.at(idx) = m.axis(0).coord(idx[0]); });
    const MeshFunction d = forward_diff(v, 0);
    for (int i = 1; i <= 3; ++i) {
      for (int j = 1; j <= 3; ++j) {
        CHECK(d.at(std::vector<int>{i, j}) == doctest::Approx(1.0).epsilon(1e-14));
      }
    }
  }
  SUBCASE("hand case: half-step denominator") {
    const TensorMesh m({axis_from_coords({0.0, 0.25, 0.75, 1.0}), axis_uniform(2)});
    MeshFunction v(m);
    v.at(std::vector<int>{1, 1}) = 1.0;
    const MeshFunction d = forward_diff(v, 0);
    // (v_2 - v_1)/hbar_1 = (0 - 1)/0.375 = -8/3
    CHECK(d.at(std::vector<int>{1, 1}) == doctest::Approx(-8.0 / 3.0).epsilon(1e-14));
  }
}

TEST_CASE("mu_transverse") {
  SUBCASE("constant preservation, random meshes") {
    const TensorMesh m({axis_random(4, 0.4, 5), axis_random(5, 0.4, 6), axis_random(3, 0.4, 7)});
    const double c = 2.25;
    for (int axis = 0; axis < 3; ++axis) {
      const MeshFunction mv = mu_transverse(constant_fn(m, c), axis);
      std::vector<int> lo{0, 0, 0}, hi{m.axis(0).segments(), m.axis(1).segments(),
                                       m.axis(2).segments()};
      for (int a = 0; a < 3; ++a) {
        if (a == axis) continue;
        lo[static_cast<std::size_t>(a)] = 1;
        hi[static_cast<std::size_t>(a)] -= 1;
      }
      for_each_index(lo, hi, [&](std::span<const int> idx) {
        CHECK(std::abs(mv.at(idx) - c) <= 1e-14 * std::abs(c));
      });
    }
  }
  SUBCASE("uniform delta weights: 12/16 center, 1/16 corner") {
    const TensorMesh m = uniform3(4);
    MeshFunction v(m);
    v.at(std::vector<int>{2, 2, 2}) = 1.0;
    const MeshFunction mv = mu_transverse(v, 0);  // averages over axes 1 and 2
    CHECK(mv.at(std::vector<int>{2, 2, 2}) == doctest::Approx(0.75).epsilon(1e-15));
    CHECK(mv.at(std::vector<int>{2, 1, 1}) == doctest::Approx(1.0 / 16).epsilon(1e-15));
    CHECK(mv.at(std::vector<int>{2, 3, 3}) == doctest::Approx(1.0 / 16).epsilon(1e-15));
    CHECK(mv.at(std::vector<int>{2, 1, 3}) == doctest::Approx(1.0 / 16).epsilon(1e-15));
    CHECK(mv.at(std::vector<int>{2, 3, 1}) == doctest::Approx(1.0 / 16).epsilon(1e-15));
    // No pure one-axis neighbors in the transverse average.
    CHECK(mv.at(std::vector<int>{2, 1, 2}) == 0.0);
    CHECK(mv.at(std::vector<int>{2, 2, 1}) == 0.0);
  }
}

TEST_CASE("apply_Lh") {
  SUBCASE("constants are annihilated") {
    const TensorMesh m({axis_random(4, 0.3, 8), axis_random(4, 0.3, 9), axis_random(5, 0.3, 10)});
    const double c = 7.0;
    const std::vector<double> lv = apply_Lh(constant_fn(m, c));
    double hmin = 1.0;
    for (int a = 0; a < 3; ++a) hmin = std::min(hmin, m.axis(a).min_step());
    for (double x : lv) CHECK(std::abs(x) <= 1e-12 * std::abs(c) / (hmin * hmin));
  }
  SUBCASE("uniform 3D h=1/4 delta: center value 72") {
    const TensorMesh m = uniform3(4);
    MeshFunction v(m);
    v.at(std::vector<int>{2, 2, 2}) = 1.0;
    const std::vector<double> lv = apply_Lh(v);
    CHECK(lv[m.interior_index(std::vector<int>{2, 2, 2})] ==
          doctest::Approx(72.0).epsilon(1e-14));
  }
}

TEST_CASE("assemble_Lh") {
  SUBCASE("uniform 3D h=1/4 diagonal entries") {
    const TensorMesh m = uniform3(4);
    const SparseOperator a = assemble_Lh(m, /*volume_scaled=*/false);
    const std::size_t r = m.interior_index(std::vector<int>{2, 2, 2});
    CHECK(a.value_at(r, r) == doctest::Approx(72.0).epsilon(1e-14));
    const SparseOperator as = assemble_Lh(m, /*volume_scaled=*/true);
    CHECK(as.value_at(r, r) == doctest::Approx(1.125).epsilon(1e-14));
    CHECK(as.volume_scaled);
  }
  SUBCASE("stencil footprint and sorted unique columns") {
    const TensorMesh m({axis_random(5, 0.3, 21), axis_random(4, 0.3, 22), axis_random(4, 0.3, 23)});
    const SparseOperator a = assemble_Lh(m, true);
    for (std::size_t r = 0; r < a.rows; ++r) {
      const std::size_t nnz_row = a.row_ptr[r + 1] - a.row_ptr[r];
      CHECK(nnz_row <= 27);  // 3^d
      for (std::size_t k = a.row_ptr[r] + 1; k < a.row_ptr[r + 1]; ++k) {
        CHECK(a.col_idx[k - 1] < a.col_idx[k]);
      }
    }
  }
  SUBCASE("matrix-free and assembled agree on random meshes") {
    std::mt19937_64 rng(99);
    for (int trial = 0; trial < 10; ++trial) {
      const TensorMesh m({axis_random(3 + static_cast<int>(rng() % 3), 0.3, rng()),
                          axis_random(3 + static_cast<int>(rng() % 3), 0.3, rng()),
                          axis_random(3 + static_cast<int>(rng() % 3), 0.3, rng())});
      const MeshFunction v = random_interior(m, rng());
      const std::vector<double> free = apply_Lh(v);
      const SparseOperator a = assemble_Lh(m, false);
      const std::vector<double> mat = a.apply(gather_interior(v));
      double scale = 0.0;
      for (double x : free) scale = std::max(scale, std::abs(x));
      for (std::size_t i = 0; i < free.size(); ++i) {
        CHECK(std::abs(free[i] - mat[i]) <= 1e-13 * scale);
      }
    }
  }
  SUBCASE("2D works as well") {
    const TensorMesh m({axis_uniform(6), axis_uniform(6)});
    const MeshFunction v = random_interior(m, 1234);
    const std::vector<double> free = apply_Lh(v);
    const std::vector<double> mat = assemble_Lh(m, false).apply(gather_interior(v));
    for (std::size_t i = 0; i < free.size(); ++i) {
      CHECK(free[i] == doctest::Approx(mat[i]).epsilon(1e-12));
    }
  }
  SUBCASE("uniform volume-scaled operator is symmetric") {
    const TensorMesh m = uniform3(5);
    CHECK(symmetry_defect(assemble_Lh(m, true)) <= 1e-15);
  }
}

TEST_CASE("sparse utilities") {
  SUBCASE("symmetry defect hand case") {
    SparseBuilder b(2, 2);
    std::vector<std::pair<std::int32_t, double>> row0{{0, 1.0}, {1, 2.0}};
    std::vector<std::pair<std::int32_t, double>> row1{{1, 1.0}};
    b.add_row(row0);
    b.add_row(row1);
    const SparseOperator a = b.finish();
    CHECK(symmetry_defect(a) == doctest::Approx(1.0).epsilon(1e-15));
  }
  SUBCASE("duplicate entries within a row are merged") {
    SparseBuilder b(2, 2);
    std::vector<std::pair<std::int32_t, double>> row0{{1, 2.0}, {0, 1.0}, {1, 3.0}};
    std::vector<std::pair<std::int32_t, double>> row1{{0, 4.0}};
    b.add_row(row0);
    b.add_row(row1);
    const SparseOperator a = b.finish();
    CHECK(a.nnz() == 3);
    CHECK(a.value_at(0, 1) == 5.0);
    CHECK(a.value_at(1, 0) == 4.0);  // not merged into the previous row
  }
  SUBCASE("MatrixMarket dump") {
    const TensorMesh m({axis_uniform(2), axis_uniform(2)});
    const SparseOperator a = assemble_Lh(m, true);
    const std::string path = "lh_dump.mtx";
    write_matrix_market(a, path);
    std::ifstream in(path);
    std::string header;
    std::getline(in, header);
    CHECK(header == "%%MatrixMarket matrix coordinate real general");
    std::size_t rows, cols, nnz;
    in >> rows >> cols >> nnz;
    CHECK(rows == a.rows);
    CHECK(nnz == a.nnz());
    std::remove(path.c_str());
  }
}
