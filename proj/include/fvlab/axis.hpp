#pragma once

#include <cstdint>
#include <vector>

namespace fvlab {

/// One-dimensional partition of [0,1].
///
/// Stores the node coordinates together with the steps h_i = x_i - x_{i-1}
/// (i = 1..M) and the half-steps hbar_i = (h_i + h_{i+1})/2, which are defined
/// only at interior indices i = 1..M-1.
class Axis {
 public:
  /// Validates and finalizes a coordinate list. Throws MeshError unless the
  /// coordinates are strictly increasing with first 0 and last 1 and there is
  /// at least one interior node.
  explicit Axis(std::vector<double> coords);

  int segments() const noexcept { return static_cast<int>(coords_.size()) - 1; }  // M
  const std::vector<double>& coords() const noexcept { return coords_; }

  double coord(int i) const { return coords_.at(static_cast<std::size_t>(i)); }

  /// h_i for i in 1..M.
  double step(int i) const { return steps_.at(static_cast<std::size_t>(i - 1)); }
  /// hbar_i for i in 1..M-1. Out-of-range indices are a hard error: the
  /// half-step has no meaning at the boundary.
  double half_step(int i) const { return half_steps_.at(static_cast<std::size_t>(i - 1)); }

  const std::vector<double>& steps() const noexcept { return steps_; }
  const std::vector<double>& half_steps() const noexcept { return half_steps_; }

  double min_step() const noexcept { return min_step_; }
  double max_step() const noexcept { return max_step_; }

 private:
  std::vector<double> coords_;
  std::vector<double> steps_;       // steps_[i-1] = h_i
  std::vector<double> half_steps_;  // half_steps_[i-1] = hbar_i
  double min_step_ = 0.0;
  double max_step_ = 0.0;
};

/// Uniform partition with M equal segments. Throws std::invalid_argument for M < 2.
Axis axis_uniform(int M);

/// Perturbed-uniform partition: coords[i] = i/M + delta_i with delta_i drawn
/// uniformly from [-max_perturbation/M, +max_perturbation/M] at interior
/// indices and zero at the endpoints. Deterministic for a fixed seed. All
/// steps stay within [(1-2p)/M, (1+2p)/M].
Axis axis_random(int M, double max_perturbation, std::uint64_t seed);

/// Validating constructor from an explicit coordinate list.
Axis axis_from_coords(std::vector<double> coords);

}  // namespace fvlab
