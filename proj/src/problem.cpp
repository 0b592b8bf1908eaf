#include "fvlab/problem.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <numbers>
#include <random>
#include <stdexcept>

#include "fvlab/norms.hpp"

namespace fvlab {

namespace {

constexpr double kPi = std::numbers::pi;

double sq(double x) { return x * x; }

double radius2_centered(std::span<const double> x) {
  double r2 = 0.0;
  for (double xi : x) r2 += sq(xi - 0.5);
  return r2;
}

// 1D factor of the shrunk Gaussian: g = exp(-c cot(pi x)^2), with its second
// derivative. Both vanish (with all derivatives) at x = 0 and x = 1.
struct GaussianFactor {
  double g = 0.0;
  double g2 = 0.0;  // g''
};

GaussianFactor gaussian_factor(double x, double c) {
  const double s = std::sin(kPi * x);
  if (std::abs(s) < 1e-12) return {};
  const double t = std::cos(kPi * x) / s;
  const double phi = -c * t * t;
  if (phi < -700.0) return {};
  const double g = std::exp(phi);
  const double phi1 = 2.0 * kPi * c * t * (1.0 + t * t);
  const double phi2 = -2.0 * kPi * kPi * c * (1.0 + t * t) * (1.0 + 3.0 * t * t);
  return {g, (phi2 + phi1 * phi1) * g};
}

ManufacturedSolution make_sine_product(int dim) {
  ManufacturedSolution sol;
  sol.name = "sine_product";
  sol.dim = dim;
  sol.u = [dim](std::span<const double> x) {
    double u = 1.0;
    for (int i = 0; i < dim; ++i) u *= std::sin(kPi * x[static_cast<std::size_t>(i)]);
    return u;
  };
  sol.f = [dim, u = sol.u](std::span<const double> x) { return dim * kPi * kPi * u(x); };
  return sol;
}

ManufacturedSolution make_gaussian_cube(int dim, double c) {
  if (!(c > 0.0)) throw std::invalid_argument("gaussian_cube: width c must be positive");
  ManufacturedSolution sol;
  sol.name = "gaussian_cube";
  sol.dim = dim;
  sol.params["c"] = c;
  sol.u = [dim, c](std::span<const double> x) {
    double u = 1.0;
    for (int i = 0; i < dim; ++i) {
      const double xi = x[static_cast<std::size_t>(i)];
      if (xi <= 0.0 || xi >= 1.0) return 0.0;
      u *= gaussian_factor(xi, c).g;
      if (u == 0.0) return 0.0;
    }
    return u;
  };
  sol.f = [dim, c](std::span<const double> x) {
    // f = -laplacian of the separable product.
    std::vector<GaussianFactor> fac(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) {
      const double xi = x[static_cast<std::size_t>(i)];
      if (xi <= 0.0 || xi >= 1.0) return 0.0;
      fac[static_cast<std::size_t>(i)] = gaussian_factor(xi, c);
    }
    double lap = 0.0;
    for (int i = 0; i < dim; ++i) {
      double term = fac[static_cast<std::size_t>(i)].g2;
      if (term == 0.0) continue;
      for (int j = 0; j < dim; ++j) {
        if (j != i) term *= fac[static_cast<std::size_t>(j)].g;
      }
      lap += term;
    }
    return -lap;
  };
  return sol;
}

ManufacturedSolution make_mollifier(int dim) {
  ManufacturedSolution sol;
  sol.name = "mollifier";
  sol.dim = dim;
  sol.support_radius = 0.5;
  sol.kink_radii = {0.5};
  sol.u = [](std::span<const double> x) {
    const double s = 1.0 - 4.0 * radius2_centered(x);
    if (s < 2e-3) return 0.0;
    return std::exp(-1.0 / s);
  };
  sol.f = [dim](std::span<const double> x) {
    const double r2 = radius2_centered(x);
    const double s = 1.0 - 4.0 * r2;
    if (s < 2e-3) return 0.0;
    const double u = std::exp(-1.0 / s);
    // laplacian = u * (64 r^2/s^4 - 128 r^2/s^3 - 8d/s^2), via the radial form
    // phi'' + (d-1) phi'/r with phi'/r = -8u/s^2 (no removable singularity).
    const double s2 = s * s;
    const double lap = u * (64.0 * r2 / (s2 * s2) - 128.0 * r2 / (s2 * s) - 8.0 * dim / s2);
    return -lap;
  };
  return sol;
}

ManufacturedSolution make_hicks_henne(int dim) {
  ManufacturedSolution sol;
  sol.name = "hicks_henne";
  sol.dim = dim;
  sol.support_radius = 0.5;
  sol.kink_radii = {0.5};
  sol.u = [](std::span<const double> x) {
    const double rho = radius2_centered(x);
    if (rho > 0.25) return 0.0;
    const double theta = 2.0 * kPi * (0.25 - rho);
    const double s = std::sin(theta);
    return s * s * s;
  };
  sol.f = [dim](std::span<const double> x) {
    const double rho = radius2_centered(x);
    if (rho > 0.25) return 0.0;
    // u = g(rho) with rho = |x-center|^2: laplacian = 2d g' + 4 rho g''.
    const double theta = 2.0 * kPi * (0.25 - rho);
    const double s = std::sin(theta);
    const double co = std::cos(theta);
    const double g1 = -2.0 * kPi * 3.0 * s * s * co;
    const double g2 = 4.0 * kPi * kPi * (6.0 * s * co * co - 3.0 * s * s * s);
    return -(2.0 * dim * g1 + 4.0 * rho * g2);
  };
  return sol;
}

bool in_unit_cube(std::span<const double> y) {
  return std::all_of(y.begin(), y.end(), [](double v) { return v >= 0.0 && v <= 1.0; });
}

ManufacturedSolution make_difference(int dim, const nlohmann::json& params) {
  const std::string g1_name = params.value("g1", std::string("gaussian_cube"));
  const std::string g2_name = params.value("g2", g1_name);
  if (g1_name == "difference" || g2_name == "difference") {
    throw std::invalid_argument("difference: components must not be 'difference'");
  }
  nlohmann::json sub = params;
  sub.erase("g1");
  sub.erase("g2");
  ManufacturedSolution g1 = builtin_solution(g1_name, dim, sub);
  ManufacturedSolution g2 = builtin_solution(g2_name, dim, sub);

  ManufacturedSolution sol;
  sol.name = "difference";
  sol.dim = dim;
  sol.params = params;
  sol.params["g1"] = g1_name;
  sol.params["g2"] = g2_name;
  sol.u = [dim, u1 = g1.u, u2 = g2.u](std::span<const double> x) {
    std::vector<double> y(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) y[static_cast<std::size_t>(i)] = 2.0 * x[static_cast<std::size_t>(i)] - 0.5;
    const double inner = in_unit_cube(y) ? u2(y) : 0.0;
    return u1(x) - 3.0 * inner;
  };
  sol.f = [dim, f1 = g1.f, f2 = g2.f](std::span<const double> x) {
    // -lap[G2(2x-0.5)] = 4 f2(2x-0.5)
    std::vector<double> y(static_cast<std::size_t>(dim));
    for (int i = 0; i < dim; ++i) y[static_cast<std::size_t>(i)] = 2.0 * x[static_cast<std::size_t>(i)] - 0.5;
    const double inner = in_unit_cube(y) ? f2(y) : 0.0;
    return f1(x) - 12.0 * inner;
  };
  sol.kink_radii = g1.kink_radii;
  for (double k : g2.kink_radii) sol.kink_radii.push_back(0.5 * k);
  return sol;
}

}  // namespace

std::vector<std::string> builtin_solution_names() {
  return {"sine_product", "gaussian_cube", "mollifier", "hicks_henne", "difference"};
}

ManufacturedSolution builtin_solution(const std::string& name, int dim,
                                      const nlohmann::json& params) {
  if (dim < 2) throw std::invalid_argument("builtin_solution: dim must be >= 2");
  if (name == "sine_product") return make_sine_product(dim);
  if (name == "gaussian_cube") return make_gaussian_cube(dim, params.value("c", 1.0));
  if (name == "mollifier") return make_mollifier(dim);
  if (name == "hicks_henne") return make_hicks_henne(dim);
  if (name == "difference") return make_difference(dim, params);
  throw std::invalid_argument("unknown solution '" + name + "'");
}

ManufacturedSolution solution_from_json_file(const std::string& path, int dim) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open parameter file '" + path + "'");
  nlohmann::json j = nlohmann::json::parse(in);
  const std::string name = j.at("name").get<std::string>();
  const nlohmann::json params = j.value("params", nlohmann::json::object());
  return builtin_solution(name, dim, params);
}

double derivative_check(const ManufacturedSolution& sol, int n_points, double h_fd,
                        std::uint64_t seed) {
  const int d = sol.dim;
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> coord(0.2, 0.8);

  auto fd_laplacian = [&](std::span<const double> x, double h) {
    std::vector<double> p(x.begin(), x.end());
    const double center = sol.u(p);
    double lap = 0.0;
    for (int i = 0; i < d; ++i) {
      const double xi = p[static_cast<std::size_t>(i)];
      p[static_cast<std::size_t>(i)] = xi + h;
      const double up = sol.u(p);
      p[static_cast<std::size_t>(i)] = xi - h;
      const double um = sol.u(p);
      p[static_cast<std::size_t>(i)] = xi;
      lap += (up - 2.0 * center + um) / (h * h);
    }
    return lap;
  };

  double worst = 0.0;
  int accepted = 0;
  std::vector<double> x(static_cast<std::size_t>(d));
  for (int attempt = 0; attempt < 1000 * n_points && accepted < n_points; ++attempt) {
    for (int i = 0; i < d; ++i) x[static_cast<std::size_t>(i)] = coord(rng);
    const double r = std::sqrt(radius2_centered(x));
    bool ok = true;
    for (double k : sol.kink_radii) {
      if (std::abs(r - k) < 0.08) ok = false;
    }
    if (!ok) continue;
    ++accepted;
    const double lap_h = fd_laplacian(x, h_fd);
    const double lap_h2 = fd_laplacian(x, 0.5 * h_fd);
    const double f_fd = -(4.0 * lap_h2 - lap_h) / 3.0;
    const double f = sol.f(x);
    worst = std::max(worst, std::abs(f_fd - f) / std::max(1.0, std::abs(f)));
  }
  if (accepted < n_points) throw std::runtime_error("derivative_check: sampling region too small");
  return worst;
}

namespace {

// Average of f over an axis-aligned box by the tensor product of the 1D rule.
double box_average(const PointFn& f, const QuadratureRule& rule, std::span<const double> lo,
                   std::span<const double> hi) {
  const int d = static_cast<int>(lo.size());
  const int p = rule.order;
  std::vector<int> digit(static_cast<std::size_t>(d), 0);
  std::vector<double> x(static_cast<std::size_t>(d));
  double acc = 0.0;
  while (true) {
    double w = 1.0;
    for (int a = 0; a < d; ++a) {
      const auto q = static_cast<std::size_t>(digit[static_cast<std::size_t>(a)]);
      const double mid = 0.5 * (lo[static_cast<std::size_t>(a)] + hi[static_cast<std::size_t>(a)]);
      const double len = hi[static_cast<std::size_t>(a)] - lo[static_cast<std::size_t>(a)];
      x[static_cast<std::size_t>(a)] = mid + len * rule.nodes[q];
      w *= rule.weights[q];
    }
    acc += w * f(x);
    int a = d - 1;
    while (a >= 0) {
      if (++digit[static_cast<std::size_t>(a)] < p) break;
      digit[static_cast<std::size_t>(a)] = 0;
      --a;
    }
    if (a < 0) break;
  }
  return acc;
}

// Does the box straddle the sphere of radius k around the cube center?
bool straddles_sphere(std::span<const double> lo, std::span<const double> hi, double k) {
  double dmin2 = 0.0, dmax2 = 0.0;
  for (std::size_t a = 0; a < lo.size(); ++a) {
    const double c = 0.5;
    const double lo_d = lo[a] - c;
    const double hi_d = hi[a] - c;
    const double nearest = std::clamp(c, lo[a], hi[a]) - c;
    dmin2 += nearest * nearest;
    dmax2 += std::max(lo_d * lo_d, hi_d * hi_d);
  }
  return dmin2 < k * k && k * k < dmax2;
}

double cell_average_refined(const PointFn& f, const QuadratureRule& rule,
                            std::span<const double> lo, std::span<const double> hi,
                            std::span<const double> kinks) {
  bool refine = false;
  for (double k : kinks) {
    if (straddles_sphere(lo, hi, k)) refine = true;
  }
  if (!refine) return box_average(f, rule, lo, hi);

  // Split each axis in two; sub-averages combine with equal volume fractions.
  const int d = static_cast<int>(lo.size());
  std::vector<int> half(static_cast<std::size_t>(d), 0);
  std::vector<double> slo(static_cast<std::size_t>(d)), shi(static_cast<std::size_t>(d));
  double acc = 0.0;
  while (true) {
    for (int a = 0; a < d; ++a) {
      const double mid = 0.5 * (lo[static_cast<std::size_t>(a)] + hi[static_cast<std::size_t>(a)]);
      if (half[static_cast<std::size_t>(a)] == 0) {
        slo[static_cast<std::size_t>(a)] = lo[static_cast<std::size_t>(a)];
        shi[static_cast<std::size_t>(a)] = mid;
      } else {
        slo[static_cast<std::size_t>(a)] = mid;
        shi[static_cast<std::size_t>(a)] = hi[static_cast<std::size_t>(a)];
      }
    }
    acc += box_average(f, rule, slo, shi);
    int a = d - 1;
    while (a >= 0) {
      if (++half[static_cast<std::size_t>(a)] < 2) break;
      half[static_cast<std::size_t>(a)] = 0;
      --a;
    }
    if (a < 0) break;
  }
  return acc / static_cast<double>(1 << d);
}

MeshFunction rhs_impl(const TensorMesh& mesh, const PointFn& f, const QuadratureRule& rule,
                      std::span<const double> kinks) {
  if (rule.order < 1) throw std::invalid_argument("rhs_cell_average: invalid quadrature rule");
  MeshFunction out(mesh);
  for_each_interior(mesh, [&](std::span<const int> idx) {
    const Box cell = mesh.cell_of(idx);
    out[mesh.node_index(idx)] = cell_average_refined(f, rule, cell.lo, cell.hi, kinks);
  });
  return out;
}

}  // namespace

MeshFunction rhs_cell_average(const TensorMesh& mesh, const PointFn& f,
                              const QuadratureRule& rule) {
  return rhs_impl(mesh, f, rule, {});
}

MeshFunction rhs_cell_average(const TensorMesh& mesh, const ManufacturedSolution& sol,
                              const QuadratureRule& rule) {
  return rhs_impl(mesh, sol.f, rule, sol.kink_radii);
}

MeshFunction doubled_cell_average(const TensorMesh& mesh, const ManufacturedSolution& sol,
                                  const QuadratureRule& rule) {
  MeshFunction t = rhs_cell_average(mesh, sol, rule);
  for (double& v : t.values()) v *= 2.0;
  return t;
}

MeshFunction restrict_to_mesh(const TensorMesh& mesh, const PointFn& fn) {
  const int d = mesh.dim();
  MeshFunction out(mesh);
  std::vector<int> lo(static_cast<std::size_t>(d), 0);
  std::vector<int> hi(static_cast<std::size_t>(d));
  for (int a = 0; a < d; ++a) hi[static_cast<std::size_t>(a)] = mesh.axis(a).segments();
  std::vector<double> x(static_cast<std::size_t>(d));
  for_each_index(lo, hi, [&](std::span<const int> idx) {
    for (int a = 0; a < d; ++a) {
      x[static_cast<std::size_t>(a)] = mesh.axis(a).coord(idx[static_cast<std::size_t>(a)]);
    }
    out[mesh.node_index(idx)] = fn(x);
  });
  return out;
}

}  // namespace fvlab
