#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "fvlab/axis.hpp"

namespace fvlab {

/// Axis-aligned box, used for finite volume cells.
struct Box {
  std::vector<double> lo;
  std::vector<double> hi;
  double volume = 0.0;
};

/// Tensor product of d >= 2 one-dimensional partitions of [0,1].
///
/// Nodes are indexed row-major with axis 0 slowest. Boundary nodes are part
/// of the index space; interior nodes have every per-axis index in 1..M-1.
/// Immutable after construction.
class TensorMesh {
 public:
  explicit TensorMesh(std::vector<Axis> axes);

  int dim() const noexcept { return static_cast<int>(axes_.size()); }
  const Axis& axis(int a) const { return axes_.at(static_cast<std::size_t>(a)); }

  std::size_t node_count() const noexcept { return node_count_; }
  std::size_t interior_count() const noexcept { return interior_count_; }

  /// Flat node index, row-major, axis 0 slowest. idx[a] in 0..M_a.
  std::size_t node_index(std::span<const int> idx) const;
  /// Flat index into the interior-node ordering. idx[a] in 1..M_a-1.
  std::size_t interior_index(std::span<const int> idx) const;

  bool is_interior(std::span<const int> idx) const;

  /// Finite volume cell around an interior node: per-axis bounds
  /// (x_i - h_i/2, x_i + h_{i+1}/2), volume = product of half-steps.
  /// Throws std::invalid_argument for a boundary node.
  Box cell_of(std::span<const int> idx) const;

  /// Product of half-steps at an interior node (the cell volume).
  double cell_volume(std::span<const int> idx) const;

  /// max step / min step over all axes.
  double quasi_uniformity_ratio() const noexcept { return quasi_uniformity_ratio_; }

  /// Largest step over all axes (the mesh parameter h).
  double max_step() const noexcept { return max_step_; }

 private:
  std::vector<Axis> axes_;
  std::vector<std::size_t> node_strides_;
  std::vector<std::size_t> interior_strides_;
  std::size_t node_count_ = 0;
  std::size_t interior_count_ = 0;
  double quasi_uniformity_ratio_ = 1.0;
  double max_step_ = 0.0;
};

/// Real values on every node of a mesh (boundary included), row-major.
class MeshFunction {
 public:
  explicit MeshFunction(const TensorMesh& mesh)
      : mesh_(&mesh), values_(mesh.node_count(), 0.0) {}
  MeshFunction(const TensorMesh& mesh, std::vector<double> values);

  const TensorMesh& mesh() const noexcept { return *mesh_; }

  double& operator[](std::size_t flat) { return values_[flat]; }
  double operator[](std::size_t flat) const { return values_[flat]; }

  double& at(std::span<const int> idx) { return values_[mesh_->node_index(idx)]; }
  double at(std::span<const int> idx) const { return values_[mesh_->node_index(idx)]; }

  std::span<double> values() noexcept { return values_; }
  std::span<const double> values() const noexcept { return values_; }
  std::size_t size() const noexcept { return values_.size(); }

  bool same_mesh(const MeshFunction& other) const noexcept { return mesh_ == other.mesh_; }

 private:
  const TensorMesh* mesh_;
  std::vector<double> values_;
};

/// Gather interior node values into the interior ordering.
std::vector<double> gather_interior(const MeshFunction& v);

/// Scatter interior values into a MeshFunction with exact zeros on the boundary.
MeshFunction scatter_interior(const TensorMesh& mesh, std::span<const double> interior);

/// Visit every multi-index with idx[a] in [lo[a], hi[a]] (inclusive),
/// row-major with axis 0 slowest.
template <typename F>
void for_each_index(std::span<const int> lo, std::span<const int> hi, F&& f) {
  const int d = static_cast<int>(lo.size());
  std::vector<int> idx(lo.begin(), lo.end());
  for (int a = 0; a < d; ++a) {
    if (lo[a] > hi[a]) return;
  }
  while (true) {
    f(std::span<const int>(idx));
    int a = d - 1;
    while (a >= 0) {
      if (++idx[static_cast<std::size_t>(a)] <= hi[a]) break;
      idx[static_cast<std::size_t>(a)] = lo[a];
      --a;
    }
    if (a < 0) break;
  }
}

/// Visit every interior node of the mesh.
template <typename F>
void for_each_interior(const TensorMesh& mesh, F&& f) {
  const int d = mesh.dim();
  std::vector<int> lo(static_cast<std::size_t>(d), 1);
  std::vector<int> hi(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) hi[static_cast<std::size_t>(a)] = mesh.axis(a).segments() - 1;
  for_each_index(lo, hi, std::forward<F>(f));
}

}  // namespace fvlab
