// Command-line front end: solve one problem, run a refinement study, run the
// randomized inequality verification suite, or generate mesh files.
//
// Exit codes: 0 success, 1 usage/input error, 2 numerical failure.

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "fvlab/errors.hpp"
#include "fvlab/mesh_io.hpp"
#include "fvlab/norms.hpp"
#include "fvlab/problem.hpp"
#include "fvlab/solver.hpp"
#include "fvlab/study.hpp"

namespace {

using namespace fvlab;

std::string g17(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

int resolve_threads(int flag_value) {
  if (flag_value > 0) return flag_value;
  if (const char* env = std::getenv("FVLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) return n;
  }
  return 0;  // library default: all cores
}

struct MeshFlags {
  std::string family = "uniform";
  double perturb = 0.3;
  std::uint64_t seed = 0;
};

MeshFamily to_family(const MeshFlags& f) {
  MeshFamily fam;
  if (f.family == "uniform") {
    fam.kind = MeshFamily::Kind::uniform;
  } else if (f.family == "random") {
    fam.kind = MeshFamily::Kind::random;
  } else {
    throw CLI::ValidationError("--mesh must be uniform or random");
  }
  fam.perturb = f.perturb;
  fam.seed = f.seed;
  return fam;
}

ManufacturedSolution load_solution(const std::string& name, const std::string& params_path,
                                   int dim) {
  if (params_path.empty()) return builtin_solution(name, dim);
  std::ifstream in(params_path);
  if (!in) throw std::invalid_argument("cannot open params file: " + params_path);
  nlohmann::json j = nlohmann::json::parse(in);
  if (j.contains("name")) {
    const std::string n = j.at("name").get<std::string>();
    return builtin_solution(n, dim, j.value("params", nlohmann::json::object()));
  }
  return builtin_solution(name, dim, j);
}

void dump_solution_csv(const std::string& path, const MeshFunction& uh,
                       const ManufacturedSolution& sol) {
  const TensorMesh& mesh = uh.mesh();
  const int d = mesh.dim();
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open " + path);
  out << "i,j,k,x,y,z,u_h,u_exact,abs_err\n";
  std::vector<int> lo(static_cast<std::size_t>(d), 0);
  std::vector<int> hi(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) hi[static_cast<std::size_t>(a)] = mesh.axis(a).segments();
  std::vector<double> x(static_cast<std::size_t>(d));
  for_each_index(lo, hi, [&](std::span<const int> idx) {
    for (int a = 0; a < d; ++a) {
      x[static_cast<std::size_t>(a)] = mesh.axis(a).coord(idx[static_cast<std::size_t>(a)]);
    }
    const double vh = uh[mesh.node_index(idx)];
    const double ve = sol.u(x);
    for (int a = 0; a < 3; ++a) out << (a < d ? idx[static_cast<std::size_t>(a)] : 0) << ',';
    for (int a = 0; a < 3; ++a) out << g17(a < d ? x[static_cast<std::size_t>(a)] : 0.0) << ',';
    out << g17(vh) << ',' << g17(ve) << ',' << g17(std::abs(vh - ve)) << '\n';
  });
  if (!out) throw std::runtime_error("write failed for " + path);
}

int run_solve(int dim, int M, const std::string& mesh_file, const MeshFlags& mf,
              const std::string& solution, const std::string& params, int quad_order,
              double tol, const std::string& dump_path) {
  TensorMesh mesh = mesh_file.empty()
                        ? build_study_mesh(dim, M, to_family(mf), 0)
                        : read_mesh_file(mesh_file);
  const int d = mesh.dim();
  const ManufacturedSolution sol = load_solution(solution, params, d);

  SolveOptions opts;
  opts.rel_tolerance = tol;
  auto [uh, report] = solve_poisson(mesh, sol, opts, quad_order);

  const MeshFunction exact = restrict_to_mesh(mesh, sol.u);
  MeshFunction err(mesh);
  for (std::size_t i = 0; i < err.size(); ++i) err[i] = exact[i] - uh[i];
  const NormReport en = norms(err);
  const double exact_l2 = l2_norm(exact);

  if (!dump_path.empty()) dump_solution_csv(dump_path, uh, sol);

  std::cout << "RESULT dim=" << d << " h=" << g17(mesh.max_step()) << " l2=" << g17(en.l2)
            << " l2_rel=" << g17(exact_l2 > 0 ? en.l2 / exact_l2 : 0.0)
            << " h1semi=" << g17(en.h1_semi) << " h1h=" << g17(en.h1) << " max=" << g17(en.max)
            << " iters=" << report.iterations << " residual=" << g17(report.residual)
            << " method=" << report.method << '\n';
  return 0;
}

int run_study_cmd(int dim, const std::vector<int>& levels, const MeshFlags& mf,
                  const std::string& solution, const std::string& params, int quad_order,
                  double tol, const std::string& out, const std::string& svg, int threads) {
  StudyConfig config;
  config.dim = dim;
  config.solution = load_solution(solution, params, dim);
  config.family = to_family(mf);
  config.levels = levels;
  config.quad_order = quad_order;
  config.solve_options.rel_tolerance = tol;
  config.threads = resolve_threads(threads);

  const StudyResult result = run_study(config);
  if (!out.empty() && !result.rows.empty()) emit_csv(config, result.rows, out);
  if (!svg.empty() && !result.rows.empty()) emit_svg(result.rows, svg);

  if (!result.completed) {
    std::cerr << "error: study aborted: " << result.error << '\n';
    std::cout << "RESULT completed=0 rows=" << result.rows.size() << '\n';
    return 2;
  }
  const StudyRow& last = result.rows.back();
  std::cout << "RESULT completed=1 rows=" << result.rows.size() << " M=" << last.M
            << " h=" << g17(last.h) << " l2=" << g17(last.l2) << " h1h=" << g17(last.h1h)
            << " max=" << g17(last.max) << " ord_l2=" << g17(last.ord_l2)
            << " ord_h1h=" << g17(last.ord_h1h) << " ord_max=" << g17(last.ord_max) << '\n';
  return 0;
}

int run_verify(int dim, int trials, int m_min, int m_max, std::uint64_t seed, bool strict,
               int threads) {
  const VerifyReport report = verify_suite(dim, trials, m_min, m_max, seed,
                                           resolve_threads(threads));
  std::ostringstream extra;
  for (const InequalityResult& r : report.results) {
    std::cout << (r.pass ? "PASS " : "FAIL ") << r.name << ": worst ratio "
              << g17(r.worst_ratio) << (r.is_lower_bound ? " >= " : " <= ") << g17(r.bound)
              << " (trials " << r.trials << ")\n";
    extra << ' ' << r.name << '=' << g17(r.worst_ratio);
  }
  const bool pass = report.all_pass();
  std::cout << "RESULT dim=" << dim << " trials=" << trials << " pass=" << (pass ? 1 : 0)
            << extra.str() << '\n';
  if (!pass && strict) {
    std::cerr << "error: verification suite failed\n";
    return 2;
  }
  return 0;
}

int run_mesh_gen(int dim, int M, const MeshFlags& mf, const std::string& out) {
  const TensorMesh mesh = build_study_mesh(dim, M, to_family(mf), 0);
  write_mesh_file(mesh, out);
  std::cout << "RESULT dim=" << dim << " M=" << M << " family=" << mf.family << " out=" << out
            << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Finite volume Poisson solver on tensor-product meshes"};
  app.require_subcommand(1);

  int dim = 3;
  int M = 8;
  std::vector<int> levels;
  std::string mesh_file, solution = "sine_product", params, out, svg, dump;
  MeshFlags mf;
  int quad_order = 4;
  double tol = 1e-10;
  int threads = 0;
  int trials = 200, m_min = 3, m_max = 8;
  std::uint64_t seed = 0;
  bool strict = false;

  const auto add_mesh_flags = [&](CLI::App* cmd) {
    cmd->add_option("--mesh", mf.family, "Mesh family: uniform|random")
        ->check(CLI::IsMember({"uniform", "random"}));
    cmd->add_option("--perturb", mf.perturb, "Random-mesh perturbation in [0, 0.5)");
    cmd->add_option("--seed", mf.seed, "Random-mesh seed");
  };
  const auto add_problem_flags = [&](CLI::App* cmd) {
    cmd->add_option("--solution", solution, "Built-in solution name");
    cmd->add_option("--params", params, "JSON file with solution parameters");
    cmd->add_option("--quad-order", quad_order, "Gauss-Legendre points per axis");
    cmd->add_option("--tol", tol, "Solver relative tolerance");
  };

  CLI::App* solve_cmd = app.add_subcommand("solve", "Solve one problem and report error norms");
  solve_cmd->add_option("--dim", dim, "Space dimension (>= 2)");
  solve_cmd->add_option("--M", M, "Segments per axis");
  solve_cmd->add_option("--mesh-file", mesh_file, "Read the mesh from a file instead");
  add_mesh_flags(solve_cmd);
  add_problem_flags(solve_cmd);
  solve_cmd->add_option("--dump-solution", dump, "Write node values as CSV");

  CLI::App* study_cmd = app.add_subcommand("study", "Run a mesh refinement study");
  study_cmd->add_option("--dim", dim, "Space dimension (>= 2)");
  study_cmd->add_option("--levels", levels, "Comma-separated M values, strictly increasing")
      ->required()
      ->delimiter(',');
  add_mesh_flags(study_cmd);
  add_problem_flags(study_cmd);
  study_cmd->add_option("--out", out, "CSV output path");
  study_cmd->add_option("--svg", svg, "Log-log SVG plot path");
  study_cmd->add_option("--threads", threads, "Worker thread cap (0 = all cores)");

  CLI::App* verify_cmd =
      app.add_subcommand("verify", "Randomized verification of the stability inequalities");
  verify_cmd->add_option("--dim", dim, "Space dimension (>= 2)");
  verify_cmd->add_option("--trials", trials, "Random trials per inequality");
  verify_cmd->add_option("--m-min", m_min, "Smallest per-axis segment count");
  verify_cmd->add_option("--m-max", m_max, "Largest per-axis segment count");
  verify_cmd->add_option("--seed", seed, "Base seed");
  verify_cmd->add_flag("--strict", strict, "Exit 2 when any inequality fails");
  verify_cmd->add_option("--threads", threads, "Worker thread cap (0 = all cores)");

  CLI::App* gen_cmd = app.add_subcommand("mesh-gen", "Generate a mesh file");
  gen_cmd->add_option("--dim", dim, "Space dimension (>= 2)");
  gen_cmd->add_option("--M", M, "Segments per axis")->required();
  add_mesh_flags(gen_cmd);
  gen_cmd->add_option("--out", out, "Output path")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve_cmd->parsed()) {
      return run_solve(dim, M, mesh_file, mf, solution, params, quad_order, tol, dump);
    }
    if (study_cmd->parsed()) {
      return run_study_cmd(dim, levels, mf, solution, params, quad_order, tol, out, svg,
                           threads);
    }
    if (verify_cmd->parsed()) {
      return run_verify(dim, trials, m_min, m_max, seed, strict, threads);
    }
    if (gen_cmd->parsed()) {
      return run_mesh_gen(dim, M, mf, out);
    }
    std::cerr << "error: no subcommand\n";
    return 1;
  } catch (const SolveError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const MeshError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  }
}
