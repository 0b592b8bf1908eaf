#include "fvlab/axis.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

#include "fvlab/errors.hpp"

namespace fvlab {

Axis::Axis(std::vector<double> coords) : coords_(std::move(coords)) {
  if (coords_.size() < 3) {
    throw MeshError("axis needs at least 3 coordinates (one interior node)");
  }
  if (coords_.front() != 0.0) {
    throw MeshError("axis must start at 0");
  }
  if (coords_.back() != 1.0) {
    throw MeshError("axis must end at 1");
  }
  const int M = segments();
  steps_.resize(static_cast<std::size_t>(M));
  for (int i = 1; i <= M; ++i) {
    const double h = coords_[static_cast<std::size_t>(i)] - coords_[static_cast<std::size_t>(i - 1)];
    if (!(h > 0.0)) {
      throw MeshError("axis coordinates must be strictly increasing");
    }
    steps_[static_cast<std::size_t>(i - 1)] = h;
  }
  half_steps_.resize(static_cast<std::size_t>(M - 1));
  for (int i = 1; i < M; ++i) {
    half_steps_[static_cast<std::size_t>(i - 1)] =
        0.5 * (steps_[static_cast<std::size_t>(i - 1)] + steps_[static_cast<std::size_t>(i)]);
  }
  min_step_ = *std::min_element(steps_.begin(), steps_.end());
  max_step_ = *std::max_element(steps_.begin(), steps_.end());
}

Axis axis_uniform(int M) {
  if (M < 2) {
    throw std::invalid_argument("axis_uniform: M must be >= 2");
  }
  std::vector<double> coords(static_cast<std::size_t>(M) + 1);
  for (int i = 0; i <= M; ++i) {
    coords[static_cast<std::size_t>(i)] = static_cast<double>(i) / M;
  }
  coords.front() = 0.0;
  coords.back() = 1.0;
  return Axis(std::move(coords));
}

Axis axis_random(int M, double max_perturbation, std::uint64_t seed) {
  if (M < 2) {
    throw std::invalid_argument("axis_random: M must be >= 2");
  }
  if (!(max_perturbation >= 0.0 && max_perturbation < 0.5)) {
    throw std::invalid_argument("axis_random: max_perturbation must be in [0, 0.5)");
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> delta(-max_perturbation / M, max_perturbation / M);
  std::vector<double> coords(static_cast<std::size_t>(M) + 1);
  coords.front() = 0.0;
  coords.back() = 1.0;
  for (int i = 1; i < M; ++i) {
    coords[static_cast<std::size_t>(i)] = static_cast<double>(i) / M + delta(rng);
  }
  return Axis(std::move(coords));
}

Axis axis_from_coords(std::vector<double> coords) { return Axis(std::move(coords)); }

}  // namespace fvlab
