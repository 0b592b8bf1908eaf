#include "fvlab/mesh.hpp"

#include <algorithm>
#include <stdexcept>

#include "fvlab/errors.hpp"

namespace fvlab {

TensorMesh::TensorMesh(std::vector<Axis> axes) : axes_(std::move(axes)) {
  if (axes_.size() < 2) {
    throw MeshError("TensorMesh needs dimension >= 2");
  }
  const int d = dim();
  node_strides_.assign(static_cast<std::size_t>(d), 1);
  interior_strides_.assign(static_cast<std::size_t>(d), 1);
  node_count_ = 1;
  interior_count_ = 1;
  for (int a = d - 1; a >= 0; --a) {
    node_strides_[static_cast<std::size_t>(a)] = node_count_;
    interior_strides_[static_cast<std::size_t>(a)] = interior_count_;
    const int M = axes_[static_cast<std::size_t>(a)].segments();
    node_count_ *= static_cast<std::size_t>(M + 1);
    interior_count_ *= static_cast<std::size_t>(M - 1);
  }
  double min_step = axes_[0].min_step();
  max_step_ = axes_[0].max_step();
  for (const Axis& ax : axes_) {
    min_step = std::min(min_step, ax.min_step());
    max_step_ = std::max(max_step_, ax.max_step());
  }
  quasi_uniformity_ratio_ = max_step_ / min_step;
}

std::size_t TensorMesh::node_index(std::span<const int> idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim(); ++a) {
    flat += static_cast<std::size_t>(idx[static_cast<std::size_t>(a)]) *
            node_strides_[static_cast<std::size_t>(a)];
  }
  return flat;
}

std::size_t TensorMesh::interior_index(std::span<const int> idx) const {
  std::size_t flat = 0;
  for (int a = 0; a < dim(); ++a) {
    flat += static_cast<std::size_t>(idx[static_cast<std::size_t>(a)] - 1) *
            interior_strides_[static_cast<std::size_t>(a)];
  }
  return flat;
}

bool TensorMesh::is_interior(std::span<const int> idx) const {
  for (int a = 0; a < dim(); ++a) {
    const int i = idx[static_cast<std::size_t>(a)];
    if (i < 1 || i > axes_[static_cast<std::size_t>(a)].segments() - 1) return false;
  }
  return true;
}

Box TensorMesh::cell_of(std::span<const int> idx) const {
  if (!is_interior(idx)) {
    throw std::invalid_argument("cell_of: node must be interior");
  }
  Box box;
  box.lo.resize(static_cast<std::size_t>(dim()));
  box.hi.resize(static_cast<std::size_t>(dim()));
  box.volume = 1.0;
  for (int a = 0; a < dim(); ++a) {
    const Axis& ax = axes_[static_cast<std::size_t>(a)];
    const int i = idx[static_cast<std::size_t>(a)];
    box.lo[static_cast<std::size_t>(a)] = ax.coord(i) - 0.5 * ax.step(i);
    box.hi[static_cast<std::size_t>(a)] = ax.coord(i) + 0.5 * ax.step(i + 1);
    box.volume *= ax.half_step(i);
  }
  return box;
}

double TensorMesh::cell_volume(std::span<const int> idx) const {
  double vol = 1.0;
  for (int a = 0; a < dim(); ++a) {
    vol *= axes_[static_cast<std::size_t>(a)].half_step(idx[static_cast<std::size_t>(a)]);
  }
  return vol;
}

MeshFunction::MeshFunction(const TensorMesh& mesh, std::vector<double> values)
    : mesh_(&mesh), values_(std::move(values)) {
  if (values_.size() != mesh.node_count()) {
    throw std::invalid_argument("MeshFunction: value count must equal node count");
  }
}

std::vector<double> gather_interior(const MeshFunction& v) {
  const TensorMesh& mesh = v.mesh();
  std::vector<double> out(mesh.interior_count());
  for_each_interior(mesh, [&](std::span<const int> idx) {
    out[mesh.interior_index(idx)] = v[mesh.node_index(idx)];
  });
  return out;
}

MeshFunction scatter_interior(const TensorMesh& mesh, std::span<const double> interior) {
  if (interior.size() != mesh.interior_count()) {
    throw std::invalid_argument("scatter_interior: size mismatch");
  }
  MeshFunction out(mesh);
  for_each_interior(mesh, [&](std::span<const int> idx) {
    out[mesh.node_index(idx)] = interior[mesh.interior_index(idx)];
  });
  return out;
}

}  // namespace fvlab
