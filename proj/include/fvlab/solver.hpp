#pragma once

#include <span>
#include <string>
#include <utility>
#include <vector>

#include "fvlab/mesh.hpp"
#include "fvlab/problem.hpp"
#include "fvlab/sparse.hpp"

namespace fvlab {

enum class KrylovMethod { auto_select, cg, bicgstab };
enum class Preconditioner { none, jacobi };

struct SolveOptions {
  double rel_tolerance = 1e-10;
  /// 0 means automatic: 20 * d * ceil(n^{1/d}) when the dimension is known,
  /// otherwise 10 * n.
  std::size_t max_iterations = 0;
  KrylovMethod method = KrylovMethod::auto_select;
  Preconditioner precond = Preconditioner::jacobi;
  /// auto_select uses CG when the measured symmetry defect is below this.
  double symmetry_tolerance = 1e-12;
  /// Dimension hint for the automatic iteration cap (set by solve_poisson).
  int dim_hint = 0;
};

struct SolveReport {
  std::size_t iterations = 0;
  double residual = 0.0;  // true relative residual, recomputed at the end
  double symmetry_defect = 0.0;
  std::string method;
  bool converged = false;
};

/// Thrown on non-convergence; carries the report so callers can inspect it.
class SolveError : public std::runtime_error {
 public:
  SolveError(const std::string& what, SolveReport report)
      : std::runtime_error(what), report_(std::move(report)) {}
  const SolveReport& report() const noexcept { return report_; }

 private:
  SolveReport report_;
};

/// Solves A v = b. The final relative residual ||Av-b||/||b|| is always
/// recomputed from A and b, never trusted from solver recurrences.
std::pair<std::vector<double>, SolveReport> solve(const SparseOperator& a,
                                                  std::span<const double> b,
                                                  const SolveOptions& opts = {});

/// End to end: assemble the volume-scaled operator, build the quadrature
/// right-hand side, solve, and scatter into a MeshFunction with exact zeros
/// on the boundary.
std::pair<MeshFunction, SolveReport> solve_poisson(const TensorMesh& mesh,
                                                   const ManufacturedSolution& sol,
                                                   const SolveOptions& opts = {},
                                                   int quad_order = 4);

}  // namespace fvlab
