#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fvlab/problem.hpp"
#include "fvlab/solver.hpp"

namespace fvlab {

struct MeshFamily {
  enum class Kind { uniform, random };
  Kind kind = Kind::uniform;
  double perturb = 0.3;       // only for random
  std::uint64_t seed = 0;     // only for random
  std::string label() const { return kind == Kind::uniform ? "uniform" : "random"; }
};

struct StudyConfig {
  int dim = 3;
  ManufacturedSolution solution;
  MeshFamily family;
  std::vector<int> levels;  // strictly increasing M values, at least 2 (one for quick looks)
  int quad_order = 4;
  SolveOptions solve_options;
  int threads = 0;  // 0 = all cores
};

struct StudyRow {
  int M = 0;
  double h = 0.0;  // max step over axes
  double l2 = 0.0;
  double l2_rel = 0.0;
  double h1semi = 0.0;
  double h1h = 0.0;
  double max = 0.0;
  // Observed orders between this level and the previous one; NaN on row 1.
  double ord_l2, ord_h1h, ord_max;
  std::size_t iters = 0;
};

struct StudyResult {
  std::vector<StudyRow> rows;
  bool completed = true;
  std::string error;  // set when a level failed and the study was cut short
};

/// Builds the mesh for one study level (uniform, or perturbed with a seed
/// derived deterministically from family.seed, the level, and the axis).
TensorMesh build_study_mesh(int dim, int M, const MeshFamily& family, int level_index);

StudyResult run_study(const StudyConfig& config);

/// Observed order from consecutive levels: log(e0/e1)/log(h0/h1).
double observed_order(double e_coarse, double e_fine, double h_coarse, double h_fine);

/// Least-squares slope of log e against log h over all levels.
double fit_order(const std::vector<double>& h, const std::vector<double>& e);

/// CSV: header dim,family,seed,M,h,l2,l2_rel,h1semi,h1h,max,ord_l2,ord_h1h,
/// ord_max,iters; 17 significant digits; missing orders emitted as nan.
std::string csv_string(const StudyConfig& config, const std::vector<StudyRow>& rows);
void emit_csv(const StudyConfig& config, const std::vector<StudyRow>& rows,
              const std::string& path);

/// Log-log error plot with order-1.5 and order-2 reference slopes anchored at
/// the last data point. Static SVG, no scripting.
void emit_svg(const std::vector<StudyRow>& rows, const std::string& path);

struct InequalityResult {
  std::string name;
  int trials = 0;
  double worst_ratio = 0.0;
  double bound = 0.0;
  bool is_lower_bound = false;  // true: ratios must stay >= bound
  double slack = 0.0;           // relative slack applied to the bound
  bool pass = false;
};

struct VerifyReport {
  int dim = 0;
  std::vector<InequalityResult> results;
  bool all_pass() const;
};

/// Randomized verification of the coercivity and stability inequalities on
/// quasi-uniform random meshes with standard-normal mesh functions:
///   transverse-average coercivity  (mu v, v]_g >= c_d ||v|]_g^2,
///       c_d = (3*2^{d-2}-1)/2^d  (5/8 in 3D)
///   discrete Poincare              ||v||^2 <= (1/d) |v|_{1,h}^2
///   operator stability             ||v||_{1,h} <= C_d ||L^h v||_{-1,h},
///       C_d = 2^d (1+d) / (d (3*2^{d-2}-1))  (32/15 in 3D)
///   solution stability             ||u^h||_{1,h} <= (C_d/2) ||T f||_{-1,h}
VerifyReport verify_suite(int dim, int trials, int m_min, int m_max, std::uint64_t seed,
                          int threads = 0);

/// Sharp constants of the inequalities above, exposed for tests.
double coercivity_constant(int dim);          // (3*2^{d-2}-1)/2^d
double operator_stability_constant(int dim);  // 2^d(1+d)/(d(3*2^{d-2}-1))

}  // namespace fvlab
