#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fvlab/mesh.hpp"
#include "fvlab/sparse.hpp"

namespace fvlab {

struct NormReport {
  double l2 = 0.0;
  double h1_semi = 0.0;
  double h1 = 0.0;  // sqrt(l2^2 + h1_semi^2)
  double max = 0.0;
};

/// Deterministic fixed-order pairwise summation.
double pairwise_sum(std::span<const double> terms);

/// Discrete L2 inner product: sum over interior nodes weighted by the
/// product of half-steps. Throws std::invalid_argument on mesh mismatch.
double inner(const MeshFunction& v, const MeshFunction& w);

double l2_norm(const MeshFunction& v);

/// One-sided inner product (v,w]_axis: full index range 1..M along `axis`
/// with weight h, interior ranges with weight hbar transversely.
double onesided_inner(const MeshFunction& v, const MeshFunction& w, int axis);

double onesided_norm_sq(const MeshFunction& v, int axis);

/// |v|_{1,h}: root of the sum over axes of the one-sided norms of the
/// backward differences.
double h1_seminorm(const MeshFunction& v);

/// All four norms; max is over every mesh point, boundary included.
NormReport norms(const MeshFunction& v);

/// SPD Gram matrix G over interior DOFs with x^T G x = ||v||_{1,h}^2 for the
/// mesh function v that carries x at interior nodes and zero on the boundary.
SparseOperator h1_gram(const TensorMesh& mesh);

inline constexpr std::size_t kDefaultHminus1Cap = 4096;

/// Discrete H^{-1} norm sup_w (v,w)/||w||_{1,h}, evaluated densely as
/// sqrt(m^T G^{-1} m) with m the mass-weighted interior values of v.
/// Small-mesh diagnostic: throws CapacityError above dof_cap interior DOFs.
/// If `maximizer` is non-null it receives the attaining w* = G^{-1} m
/// (interior ordering).
double hminus1_dense(const MeshFunction& v, std::size_t dof_cap = kDefaultHminus1Cap,
                     std::vector<double>* maximizer = nullptr);

/// Same, for data already given over interior nodes.
double hminus1_dense_interior(const TensorMesh& mesh, std::span<const double> interior,
                              std::size_t dof_cap = kDefaultHminus1Cap,
                              std::vector<double>* maximizer = nullptr);

}  // namespace fvlab
