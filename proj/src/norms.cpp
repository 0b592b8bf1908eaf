#include "fvlab/norms.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

#include "fvlab/errors.hpp"
#include "fvlab/stencil.hpp"

namespace fvlab {

namespace {

void check_same_mesh(const MeshFunction& v, const MeshFunction& w) {
  if (!v.same_mesh(w)) throw std::invalid_argument("mesh functions live on different meshes");
}

double pairwise(const double* x, std::size_t n) {
  if (n <= 16) {
    double s = 0.0;
    for (std::size_t i = 0; i < n; ++i) s += x[i];
    return s;
  }
  const std::size_t half = n / 2;
  return pairwise(x, half) + pairwise(x + half, n - half);
}

// In-place dense Cholesky (lower), then two triangular solves.
void cholesky_solve(std::vector<double>& a, std::size_t n, std::vector<double>& b) {
  for (std::size_t j = 0; j < n; ++j) {
    double d = a[j * n + j];
    for (std::size_t k = 0; k < j; ++k) d -= a[j * n + k] * a[j * n + k];
    if (!(d > 0.0)) throw std::runtime_error("cholesky: matrix not positive definite");
    const double ljj = std::sqrt(d);
    a[j * n + j] = ljj;
    for (std::size_t i = j + 1; i < n; ++i) {
      double s = a[i * n + j];
      for (std::size_t k = 0; k < j; ++k) s -= a[i * n + k] * a[j * n + k];
      a[i * n + j] = s / ljj;
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    double s = b[i];
    for (std::size_t k = 0; k < i; ++k) s -= a[i * n + k] * b[k];
    b[i] = s / a[i * n + i];
  }
  for (std::size_t ii = n; ii-- > 0;) {
    double s = b[ii];
    for (std::size_t k = ii + 1; k < n; ++k) s -= a[k * n + ii] * b[k];
    b[ii] = s / a[ii * n + ii];
  }
}

}  // namespace

double pairwise_sum(std::span<const double> terms) { return pairwise(terms.data(), terms.size()); }

double inner(const MeshFunction& v, const MeshFunction& w) {
  check_same_mesh(v, w);
  const TensorMesh& mesh = v.mesh();
  std::vector<double> terms;
  terms.reserve(mesh.interior_count());
  for_each_interior(mesh, [&](std::span<const int> idx) {
    const std::size_t n = mesh.node_index(idx);
    terms.push_back(mesh.cell_volume(idx) * v[n] * w[n]);
  });
  return pairwise_sum(terms);
}

double l2_norm(const MeshFunction& v) { return std::sqrt(inner(v, v)); }

double onesided_inner(const MeshFunction& v, const MeshFunction& w, int axis) {
  check_same_mesh(v, w);
  const TensorMesh& mesh = v.mesh();
  const int d = mesh.dim();
  if (axis < 0 || axis >= d) throw std::invalid_argument("axis out of range");

  std::vector<int> lo(static_cast<std::size_t>(d), 1);
  std::vector<int> hi(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) hi[static_cast<std::size_t>(a)] = mesh.axis(a).segments() - 1;
  hi[static_cast<std::size_t>(axis)] = mesh.axis(axis).segments();

  std::vector<double> terms;
  for_each_index(lo, hi, [&](std::span<const int> idx) {
    double weight = 1.0;
    for (int a = 0; a < d; ++a) {
      const int i = idx[static_cast<std::size_t>(a)];
      weight *= (a == axis) ? mesh.axis(a).step(i) : mesh.axis(a).half_step(i);
    }
    const std::size_t n = mesh.node_index(idx);
    terms.push_back(weight * v[n] * w[n]);
  });
  return pairwise_sum(terms);
}

double onesided_norm_sq(const MeshFunction& v, int axis) { return onesided_inner(v, v, axis); }

double h1_seminorm(const MeshFunction& v) {
  const TensorMesh& mesh = v.mesh();
  double sq = 0.0;
  for (int a = 0; a < mesh.dim(); ++a) {
    sq += onesided_norm_sq(backward_diff(v, a), a);
  }
  return std::sqrt(sq);
}

NormReport norms(const MeshFunction& v) {
  NormReport r;
  r.l2 = l2_norm(v);
  r.h1_semi = h1_seminorm(v);
  r.h1 = std::sqrt(r.l2 * r.l2 + r.h1_semi * r.h1_semi);
  double m = 0.0;
  for (double x : v.values()) m = std::max(m, std::abs(x));
  r.max = m;
  return r;
}

SparseOperator h1_gram(const TensorMesh& mesh) {
  const int d = mesh.dim();
  SparseBuilder builder(mesh.interior_count(), mesh.interior_count());
  std::vector<std::pair<std::int32_t, double>> row;
  std::vector<int> col(static_cast<std::size_t>(d));

  for_each_interior(mesh, [&](std::span<const int> idx) {
    row.clear();
    double diag = mesh.cell_volume(idx);  // L2 mass term
    for (int a = 0; a < d; ++a) {
      const Axis& ax = mesh.axis(a);
      const int i = idx[static_cast<std::size_t>(a)];
      // Transverse weight of the one-sided sums at this node.
      double wt = 1.0;
      for (int b = 0; b < d; ++b) {
        if (b != a) wt *= mesh.axis(b).half_step(idx[static_cast<std::size_t>(b)]);
      }
      // Edge (i-1, i): weight h_i, difference (v_i - v_{i-1})/h_i.
      diag += wt / ax.step(i);
      if (i > 1) {
        std::copy(idx.begin(), idx.end(), col.begin());
        col[static_cast<std::size_t>(a)] = i - 1;
        row.emplace_back(static_cast<std::int32_t>(mesh.interior_index(col)), -wt / ax.step(i));
      }
      // Edge (i, i+1): weight h_{i+1}.
      diag += wt / ax.step(i + 1);
      if (i < ax.segments() - 1) {
        std::copy(idx.begin(), idx.end(), col.begin());
        col[static_cast<std::size_t>(a)] = i + 1;
        row.emplace_back(static_cast<std::int32_t>(mesh.interior_index(col)), -wt / ax.step(i + 1));
      }
    }
    row.emplace_back(static_cast<std::int32_t>(mesh.interior_index(idx)), diag);
    builder.add_row(row);
  });
  return builder.finish(false);
}

double hminus1_dense_interior(const TensorMesh& mesh, std::span<const double> interior,
                              std::size_t dof_cap, std::vector<double>* maximizer) {
  const std::size_t n = mesh.interior_count();
  if (interior.size() != n) throw std::invalid_argument("hminus1_dense: size mismatch");
  if (n > dof_cap) {
    throw CapacityError("hminus1_dense: " + std::to_string(n) + " DOFs exceeds cap of " +
                        std::to_string(dof_cap));
  }
  const SparseOperator g = h1_gram(mesh);
  std::vector<double> dense(n * n, 0.0);
  for (std::size_t r = 0; r < n; ++r) {
    for (std::size_t k = g.row_ptr[r]; k < g.row_ptr[r + 1]; ++k) {
      dense[r * n + static_cast<std::size_t>(g.col_idx[k])] = g.values[k];
    }
  }
  std::vector<double> m(n);
  for_each_interior(mesh, [&](std::span<const int> idx) {
    const std::size_t r = mesh.interior_index(idx);
    m[r] = mesh.cell_volume(idx) * interior[r];
  });
  std::vector<double> y = m;
  cholesky_solve(dense, n, y);
  std::vector<double> terms(n);
  for (std::size_t i = 0; i < n; ++i) terms[i] = m[i] * y[i];
  if (maximizer) *maximizer = y;
  return std::sqrt(pairwise_sum(terms));
}

double hminus1_dense(const MeshFunction& v, std::size_t dof_cap, std::vector<double>* maximizer) {
  return hminus1_dense_interior(v.mesh(), gather_interior(v), dof_cap, maximizer);
}

}  // namespace fvlab
