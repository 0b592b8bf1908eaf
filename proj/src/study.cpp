#include "fvlab/study.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "fvlab/norms.hpp"
#include "fvlab/stencil.hpp"

namespace fvlab {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::uint64_t mix64(std::uint64_t x) {
  x += 0x9E3779B97F4A7C15ull;
  x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
  x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
  return x ^ (x >> 31);
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t a, std::uint64_t b) {
  return mix64(base ^ mix64(a ^ mix64(b)));
}

std::string format_g17(double x) {
  if (std::isnan(x)) return "nan";
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", x);
  return buf;
}

/// Runs fn(i) for i in [0, n) on up to `threads` worker threads, contiguous
/// chunks per worker. fn must only touch slot i of shared output.
template <typename F>
void parallel_for(std::size_t n, int threads, F&& fn) {
  if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
  if (threads < 1) threads = 1;
  const std::size_t workers = std::min<std::size_t>(static_cast<std::size_t>(threads), n);
  if (workers <= 1) {
    for (std::size_t i = 0; i < n; ++i) fn(i);
    return;
  }
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      const std::size_t lo = n * w / workers;
      const std::size_t hi = n * (w + 1) / workers;
      for (std::size_t i = lo; i < hi; ++i) fn(i);
    });
  }
  for (auto& t : pool) t.join();
}

TensorMesh random_verify_mesh(int dim, int m_min, int m_max, std::uint64_t seed) {
  std::vector<Axis> axes;
  axes.reserve(static_cast<std::size_t>(dim));
  for (int a = 0; a < dim; ++a) {
    std::mt19937_64 rng(derive_seed(seed, 0x6D65ull, static_cast<std::uint64_t>(a)));
    std::uniform_int_distribution<int> m_dist(m_min, m_max);
    const int m = m_dist(rng);
    axes.push_back(axis_random(m, 0.3, derive_seed(seed, 0x6178ull, static_cast<std::uint64_t>(a))));
  }
  return TensorMesh(std::move(axes));
}

/// Standard-normal values at every node whose indices along `axes_interior`
/// are interior; zero elsewhere. axes_interior == -1 means all axes.
MeshFunction random_mesh_function(const TensorMesh& mesh, std::uint64_t seed,
                                  int free_axis = -1) {
  MeshFunction v(mesh);
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  const int d = mesh.dim();
  std::vector<int> lo(static_cast<std::size_t>(d)), hi(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) {
    const bool free = (a == free_axis);
    lo[static_cast<std::size_t>(a)] = free ? 0 : 1;
    hi[static_cast<std::size_t>(a)] = mesh.axis(a).segments() - (free ? 0 : 1);
  }
  for_each_index(lo, hi, [&](std::span<const int> idx) { v.at(idx) = normal(rng); });
  return v;
}

InequalityResult make_result(std::string name, int trials, double worst, double bound,
                             bool lower, double slack) {
  InequalityResult r;
  r.name = std::move(name);
  r.trials = trials;
  r.worst_ratio = worst;
  r.bound = bound;
  r.is_lower_bound = lower;
  r.slack = slack;
  r.pass = lower ? (worst >= bound * (1.0 - slack)) : (worst <= bound * (1.0 + slack));
  return r;
}

}  // namespace

double coercivity_constant(int dim) {
  if (dim < 2) throw std::invalid_argument("coercivity_constant: dim must be >= 2");
  return (3.0 * std::pow(2.0, dim - 2) - 1.0) / std::pow(2.0, dim);
}

double operator_stability_constant(int dim) {
  if (dim < 2) throw std::invalid_argument("operator_stability_constant: dim must be >= 2");
  return std::pow(2.0, dim) * (1.0 + dim) / (dim * (3.0 * std::pow(2.0, dim - 2) - 1.0));
}

TensorMesh build_study_mesh(int dim, int M, const MeshFamily& family, int level_index) {
  std::vector<Axis> axes;
  axes.reserve(static_cast<std::size_t>(dim));
  for (int a = 0; a < dim; ++a) {
    if (family.kind == MeshFamily::Kind::uniform) {
      axes.push_back(axis_uniform(M));
    } else {
      axes.push_back(axis_random(M, family.perturb,
                                 derive_seed(family.seed, static_cast<std::uint64_t>(level_index),
                                             static_cast<std::uint64_t>(a))));
    }
  }
  return TensorMesh(std::move(axes));
}

double observed_order(double e_coarse, double e_fine, double h_coarse, double h_fine) {
  if (!(e_coarse > 0.0) || !(e_fine > 0.0) || !(h_coarse > 0.0) || !(h_fine > 0.0) ||
      h_coarse == h_fine) {
    return kNaN;
  }
  return std::log(e_coarse / e_fine) / std::log(h_coarse / h_fine);
}

double fit_order(const std::vector<double>& h, const std::vector<double>& e) {
  if (h.size() != e.size() || h.size() < 2) {
    throw std::invalid_argument("fit_order: need matching lists with at least 2 points");
  }
  const std::size_t n = h.size();
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    if (!(h[i] > 0.0) || !(e[i] > 0.0)) return kNaN;
    const double x = std::log(h[i]);
    const double y = std::log(e[i]);
    sx += x;
    sy += y;
    sxx += x * x;
    sxy += x * y;
  }
  const double denom = n * sxx - sx * sx;
  if (denom == 0.0) return kNaN;
  return (n * sxy - sx * sy) / denom;
}

StudyResult run_study(const StudyConfig& config) {
  if (config.levels.empty()) throw std::invalid_argument("run_study: need at least one level");
  for (std::size_t i = 0; i + 1 < config.levels.size(); ++i) {
    if (config.levels[i] >= config.levels[i + 1]) {
      throw std::invalid_argument("run_study: levels must be strictly increasing");
    }
  }
  if (config.solution.dim != config.dim) {
    throw std::invalid_argument("run_study: solution dimension does not match study dimension");
  }

  StudyResult result;
  for (std::size_t level = 0; level < config.levels.size(); ++level) {
    const int M = config.levels[level];
    const TensorMesh mesh =
        build_study_mesh(config.dim, M, config.family, static_cast<int>(level));

    StudyRow row;
    row.M = M;
    row.h = mesh.max_step();
    try {
      auto [uh, report] = solve_poisson(mesh, config.solution, config.solve_options,
                                        config.quad_order);
      const MeshFunction exact = restrict_to_mesh(mesh, config.solution.u);
      MeshFunction err(mesh);
      for (std::size_t i = 0; i < err.size(); ++i) err[i] = exact[i] - uh[i];
      const NormReport en = norms(err);
      row.l2 = en.l2;
      row.h1semi = en.h1_semi;
      row.h1h = en.h1;
      row.max = en.max;
      const double exact_l2 = l2_norm(exact);
      row.l2_rel = exact_l2 > 0.0 ? en.l2 / exact_l2 : 0.0;
      row.iters = report.iterations;
    } catch (const SolveError& e) {
      result.completed = false;
      result.error = e.what();
      break;
    }

    if (result.rows.empty()) {
      row.ord_l2 = row.ord_h1h = row.ord_max = kNaN;
    } else {
      const StudyRow& prev = result.rows.back();
      row.ord_l2 = observed_order(prev.l2, row.l2, prev.h, row.h);
      row.ord_h1h = observed_order(prev.h1h, row.h1h, prev.h, row.h);
      row.ord_max = observed_order(prev.max, row.max, prev.h, row.h);
    }
    result.rows.push_back(row);
  }
  return result;
}

std::string csv_string(const StudyConfig& config, const std::vector<StudyRow>& rows) {
  if (rows.empty()) throw std::invalid_argument("csv_string: need at least one row");
  std::ostringstream out;
  out << "dim,family,seed,M,h,l2,l2_rel,h1semi,h1h,max,ord_l2,ord_h1h,ord_max,iters\n";
  const std::uint64_t seed =
      config.family.kind == MeshFamily::Kind::random ? config.family.seed : 0;
  for (const StudyRow& r : rows) {
    out << config.dim << ',' << config.family.label() << ',' << seed << ',' << r.M << ','
        << format_g17(r.h) << ',' << format_g17(r.l2) << ',' << format_g17(r.l2_rel) << ','
        << format_g17(r.h1semi) << ',' << format_g17(r.h1h) << ',' << format_g17(r.max) << ','
        << format_g17(r.ord_l2) << ',' << format_g17(r.ord_h1h) << ','
        << format_g17(r.ord_max) << ',' << r.iters << '\n';
  }
  return out.str();
}

void emit_csv(const StudyConfig& config, const std::vector<StudyRow>& rows,
              const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_csv: cannot open " + path);
  out << csv_string(config, rows);
  if (!out) throw std::runtime_error("emit_csv: write failed for " + path);
}

void emit_svg(const std::vector<StudyRow>& rows, const std::string& path) {
  if (rows.empty()) throw std::invalid_argument("emit_svg: need at least one row");

  struct Series {
    const char* label;
    const char* color;
    std::vector<std::pair<double, double>> pts;  // (log10 h, log10 e)
  };
  std::vector<Series> series = {{"l2", "#1f77b4", {}},
                                {"h1h", "#d62728", {}},
                                {"max", "#2ca02c", {}}};
  double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
  for (const StudyRow& r : rows) {
    const double errs[3] = {r.l2, r.h1h, r.max};
    for (int s = 0; s < 3; ++s) {
      if (!(r.h > 0.0) || !(errs[s] > 0.0)) continue;
      const double x = std::log10(r.h);
      const double y = std::log10(errs[s]);
      series[static_cast<std::size_t>(s)].pts.emplace_back(x, y);
      xmin = std::min(xmin, x);
      xmax = std::max(xmax, x);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (xmin > xmax) {  // nothing plottable
    xmin = -1;
    xmax = 0;
    ymin = -1;
    ymax = 0;
  }
  if (xmax - xmin < 1e-12) {
    xmin -= 0.5;
    xmax += 0.5;
  }
  // Reference slopes pass through the last h1h point (fall back to any series).
  std::pair<double, double> anchor{xmax, ymax};
  for (int s : {1, 0, 2}) {
    if (!series[static_cast<std::size_t>(s)].pts.empty()) {
      anchor = series[static_cast<std::size_t>(s)].pts.back();
      break;
    }
  }
  for (double slope : {1.5, 2.0}) {
    for (double x : {xmin, xmax}) {
      const double y = anchor.second + slope * (x - anchor.first);
      ymin = std::min(ymin, y);
      ymax = std::max(ymax, y);
    }
  }
  if (ymax - ymin < 1e-12) {
    ymin -= 0.5;
    ymax += 0.5;
  }

  const double width = 640, height = 480, ml = 70, mr = 20, mt = 20, mb = 50;
  const auto px = [&](double x) { return ml + (x - xmin) / (xmax - xmin) * (width - ml - mr); };
  const auto py = [&](double y) {
    return height - mb - (y - ymin) / (ymax - ymin) * (height - mt - mb);
  };

  std::ostringstream svg;
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\""
      << height << "\" viewBox=\"0 0 " << width << ' ' << height << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n"
      << "<line x1=\"" << ml << "\" y1=\"" << height - mb << "\" x2=\"" << width - mr
      << "\" y2=\"" << height - mb << "\" stroke=\"black\"/>\n"
      << "<line x1=\"" << ml << "\" y1=\"" << mt << "\" x2=\"" << ml << "\" y2=\""
      << height - mb << "\" stroke=\"black\"/>\n"
      << "<text x=\"" << (ml + width - mr) / 2 << "\" y=\"" << height - 12
      << "\" text-anchor=\"middle\" font-size=\"14\">log10 h</text>\n"
      << "<text x=\"16\" y=\"" << (mt + height - mb) / 2
      << "\" text-anchor=\"middle\" font-size=\"14\" transform=\"rotate(-90 16 "
      << (mt + height - mb) / 2 << ")\">log10 error</text>\n";

  // Reference slope guides anchored at the last data point.
  const char* guide_colors[2] = {"#999999", "#555555"};
  const double guide_slopes[2] = {1.5, 2.0};
  for (int g = 0; g < 2; ++g) {
    const double y0 = anchor.second + guide_slopes[g] * (xmin - anchor.first);
    const double y1 = anchor.second + guide_slopes[g] * (xmax - anchor.first);
    svg << "<line x1=\"" << px(xmin) << "\" y1=\"" << py(y0) << "\" x2=\"" << px(xmax)
        << "\" y2=\"" << py(y1) << "\" stroke=\"" << guide_colors[g]
        << "\" stroke-dasharray=\"6,4\"/>\n"
        << "<text x=\"" << width - mr - 4 << "\" y=\"" << py(y1) - 4
        << "\" text-anchor=\"end\" font-size=\"12\" fill=\"" << guide_colors[g]
        << "\">slope " << guide_slopes[g] << "</text>\n";
  }

  double legend_y = mt + 16;
  for (const Series& s : series) {
    if (s.pts.empty()) continue;
    svg << "<polyline fill=\"none\" stroke=\"" << s.color << "\" stroke-width=\"2\" points=\"";
    for (const auto& [x, y] : s.pts) svg << px(x) << ',' << py(y) << ' ';
    svg << "\"/>\n";
    for (const auto& [x, y] : s.pts) {
      svg << "<circle cx=\"" << px(x) << "\" cy=\"" << py(y) << "\" r=\"3\" fill=\"" << s.color
          << "\"/>\n";
    }
    svg << "<text x=\"" << ml + 10 << "\" y=\"" << legend_y << "\" font-size=\"13\" fill=\""
        << s.color << "\">" << s.label << "</text>\n";
    legend_y += 18;
  }
  svg << "</svg>\n";

  std::ofstream out(path);
  if (!out) throw std::runtime_error("emit_svg: cannot open " + path);
  out << svg.str();
  if (!out) throw std::runtime_error("emit_svg: write failed for " + path);
}

bool VerifyReport::all_pass() const {
  return std::all_of(results.begin(), results.end(),
                     [](const InequalityResult& r) { return r.pass; });
}

VerifyReport verify_suite(int dim, int trials, int m_min, int m_max, std::uint64_t seed,
                          int threads) {
  if (dim < 2) throw std::invalid_argument("verify_suite: dim must be >= 2");
  if (trials < 1) throw std::invalid_argument("verify_suite: trials must be >= 1");
  if (m_min < 2 || m_max < m_min) throw std::invalid_argument("verify_suite: bad mesh size range");

  VerifyReport report;
  report.dim = dim;
  const double c_coerce = coercivity_constant(dim);
  const double c_stab = operator_stability_constant(dim);

  // Transverse-average coercivity, one check per non-averaged axis. v is
  // standard normal wherever the transverse indices are interior.
  {
    const std::size_t n = static_cast<std::size_t>(trials);
    std::vector<std::vector<double>> ratios(static_cast<std::size_t>(dim));
    for (auto& r : ratios) r.assign(n, kNaN);
    parallel_for(n, threads, [&](std::size_t t) {
      const std::uint64_t s = derive_seed(seed, 1, t);
      const TensorMesh mesh = random_verify_mesh(dim, m_min, m_max, s);
      for (int axis = 0; axis < dim; ++axis) {
        const MeshFunction v = random_mesh_function(mesh, derive_seed(s, 2, axis), axis);
        const double den = onesided_norm_sq(v, axis);
        if (den == 0.0) continue;  // 0/0 guard
        const MeshFunction mv = mu_transverse(v, axis);
        ratios[static_cast<std::size_t>(axis)][t] = onesided_inner(mv, v, axis) / den;
      }
    });
    for (int axis = 0; axis < dim; ++axis) {
      double worst = std::numeric_limits<double>::infinity();
      int used = 0;
      for (double r : ratios[static_cast<std::size_t>(axis)]) {
        if (std::isnan(r)) continue;
        worst = std::min(worst, r);
        ++used;
      }
      report.results.push_back(make_result("coercivity_axis" + std::to_string(axis), used,
                                           worst, c_coerce, /*lower=*/true, 1e-12));
    }
  }

  // Discrete Poincare inequality: ||v||^2 <= (1/d) |v|_{1,h}^2 for v that
  // vanishes on the whole boundary.
  {
    const std::size_t n = static_cast<std::size_t>(trials);
    std::vector<double> ratios(n, kNaN);
    parallel_for(n, threads, [&](std::size_t t) {
      const std::uint64_t s = derive_seed(seed, 3, t);
      const TensorMesh mesh = random_verify_mesh(dim, m_min, m_max, s);
      const MeshFunction v = random_mesh_function(mesh, derive_seed(s, 4, 0));
      const double semi = h1_seminorm(v);
      if (semi == 0.0) return;
      const double l2 = l2_norm(v);
      ratios[t] = (l2 * l2) / (semi * semi);
    });
    double worst = 0.0;
    int used = 0;
    for (double r : ratios) {
      if (std::isnan(r)) continue;
      worst = std::max(worst, r);
      ++used;
    }
    report.results.push_back(make_result("poincare", used, worst, 1.0 / dim,
                                         /*lower=*/false, 1e-12));
  }

  // Operator stability: ||v||_{1,h} <= C_d ||L^h v||_{-1,h}. Dense H^{-1},
  // so the meshes stay small.
  {
    const int cap = std::min(m_max, 6);
    const int lo = std::min(m_min, cap);
    const std::size_t n = static_cast<std::size_t>(std::min(trials, 50));
    std::vector<double> ratios(n, kNaN);
    parallel_for(n, threads, [&](std::size_t t) {
      const std::uint64_t s = derive_seed(seed, 5, t);
      const TensorMesh mesh = random_verify_mesh(dim, lo, cap, s);
      const MeshFunction v = random_mesh_function(mesh, derive_seed(s, 6, 0));
      const std::vector<double> lv = apply_Lh(v);
      const double den = hminus1_dense_interior(mesh, lv);
      if (den == 0.0) return;
      ratios[t] = norms(v).h1 / den;
    });
    double worst = 0.0;
    int used = 0;
    for (double r : ratios) {
      if (std::isnan(r)) continue;
      worst = std::max(worst, r);
      ++used;
    }
    report.results.push_back(
        make_result("operator_stability", used, worst, c_stab, /*lower=*/false, 1e-10));
  }

  // Solution stability: ||u^h||_{1,h} <= (C_d/2) ||T f||_{-1,h} with T the
  // doubled cell average and f from the smooth sine product problem.
  {
    const int cap = std::min(m_max, 5);
    const int lo = std::min(m_min, cap);
    const std::size_t n = static_cast<std::size_t>(std::min(trials, 20));
    const ManufacturedSolution sol = builtin_solution("sine_product", dim);
    const QuadratureRule rule = QuadratureRule::gauss_legendre(4);
    std::vector<double> ratios(n, kNaN);
    parallel_for(n, threads, [&](std::size_t t) {
      const std::uint64_t s = derive_seed(seed, 7, t);
      const TensorMesh mesh = random_verify_mesh(dim, lo, cap, s);
      auto [uh, rep] = solve_poisson(mesh, sol);
      const MeshFunction tf = doubled_cell_average(mesh, sol, rule);
      const double den = hminus1_dense(tf);
      if (den == 0.0) return;
      ratios[t] = norms(uh).h1 / den;
    });
    double worst = 0.0;
    int used = 0;
    for (double r : ratios) {
      if (std::isnan(r)) continue;
      worst = std::max(worst, r);
      ++used;
    }
    report.results.push_back(
        make_result("solution_stability", used, worst, c_stab / 2.0, /*lower=*/false, 1e-8));
  }

  return report;
}

}  // namespace fvlab
