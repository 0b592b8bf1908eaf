#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "fvlab/mesh.hpp"
#include "fvlab/quadrature.hpp"

namespace fvlab {

using PointFn = std::function<double(std::span<const double>)>;

/// Exact solution u of the Dirichlet problem together with its analytic
/// right-hand side f = -laplacian(u).
struct ManufacturedSolution {
  std::string name;
  int dim = 0;
  nlohmann::json params;
  PointFn u;
  PointFn f;
  double expected_h1h_order = 2.0;
  /// Radius (around the cube center) of a compact support ball, when one
  /// exists. Drives quadrature subdivision near the support boundary.
  std::optional<double> support_radius;
  /// Radii of spheres (around the center) where u has limited smoothness or
  /// extreme derivatives; sampling-based oracles keep away from these.
  std::vector<double> kink_radii;
};

/// Builds one of the built-in solutions:
///   sine_product   u = prod sin(pi x_i)
///   gaussian_cube  u = exp(-c * sum cot(pi x_i)^2), param c (default 1)
///   mollifier      u = exp(-1/(1-4 r^2)) inside r < 1/2, else 0
///   hicks_henne    u = sin(2 pi (1/4 - r^2))^3 inside r^2 <= 1/4, else 0
///   difference     u = G1(x) - 3 G2(2x - 0.5), params g1/g2 name the parts
/// where r = |x - center|. Throws std::invalid_argument for unknown names or
/// out-of-domain parameters.
ManufacturedSolution builtin_solution(const std::string& name, int dim,
                                      const nlohmann::json& params = nlohmann::json::object());

/// Reads {"name": ..., "params": {...}} from a JSON file.
ManufacturedSolution solution_from_json_file(const std::string& path, int dim);

/// Known built-in names.
std::vector<std::string> builtin_solution_names();

/// Compares f against the negative central-difference Laplacian of u
/// (Richardson-extrapolated, steps h_fd and h_fd/2) at n_points random points
/// inside the smooth region; returns the max defect |f_fd - f| / max(1,|f|).
double derivative_check(const ManufacturedSolution& sol, int n_points, double h_fd,
                        std::uint64_t seed = 20240901);

/// Per-cell averages (1/|cell|) * integral of f over the finite volume cell,
/// by tensor Gauss-Legendre; values at interior nodes, zero on the boundary.
MeshFunction rhs_cell_average(const TensorMesh& mesh, const PointFn& f, const QuadratureRule& rule);

/// Same, but cells that straddle one of the solution's kink spheres are
/// subdivided 2x per axis before applying the rule.
MeshFunction rhs_cell_average(const TensorMesh& mesh, const ManufacturedSolution& sol,
                              const QuadratureRule& rule);

/// Right-hand side in the doubled convention of the underlying flux-balance
/// derivation: exactly 2x the cell average.
MeshFunction doubled_cell_average(const TensorMesh& mesh, const ManufacturedSolution& sol,
                                  const QuadratureRule& rule);

/// Restriction of a point function to the mesh nodes (all nodes).
MeshFunction restrict_to_mesh(const TensorMesh& mesh, const PointFn& fn);

}  // namespace fvlab
