#include "fvlab/solver.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fvlab/kernels.hpp"
#include "fvlab/stencil.hpp"

namespace fvlab {

namespace {

double nrm2(std::span<const double> x) { return std::sqrt(kernels::dot(x.data(), x.data(), x.size())); }

std::vector<double> jacobi_diag(const SparseOperator& a, Preconditioner p) {
  std::vector<double> inv_diag(a.rows, 1.0);
  if (p != Preconditioner::jacobi) return inv_diag;
  for (std::size_t r = 0; r < a.rows; ++r) {
    const double d = a.value_at(r, r);
    if (d == 0.0) throw std::runtime_error("jacobi preconditioner: zero diagonal");
    inv_diag[r] = 1.0 / d;
  }
  return inv_diag;
}

double true_rel_residual(const SparseOperator& a, std::span<const double> b,
                         std::span<const double> x, double bnorm) {
  std::vector<double> r = a.apply(x);
  for (std::size_t i = 0; i < r.size(); ++i) r[i] = b[i] - r[i];
  return nrm2(r) / bnorm;
}

std::size_t auto_max_iterations(std::size_t n, int dim_hint) {
  if (dim_hint > 0) {
    const auto root = static_cast<std::size_t>(
        std::ceil(std::pow(static_cast<double>(n), 1.0 / dim_hint)));
    return std::max<std::size_t>(200, 20 * static_cast<std::size_t>(dim_hint) * root);
  }
  return 10 * n;
}

SolveReport run_cg(const SparseOperator& a, std::span<const double> b, std::vector<double>& x,
                   const std::vector<double>& inv_diag, double tol, std::size_t max_it,
                   double bnorm) {
  const std::size_t n = a.rows;
  std::vector<double> r(b.begin(), b.end());
  std::vector<double> z(n), p(n), ap(n);
  kernels::hadamard(inv_diag.data(), r.data(), z.data(), n);
  p = z;
  double rz = kernels::dot(r.data(), z.data(), n);

  SolveReport rep;
  rep.method = "cg";
  for (std::size_t it = 1; it <= max_it; ++it) {
    a.apply(p, ap);
    const double pap = kernels::dot(p.data(), ap.data(), n);
    if (pap == 0.0) break;
    const double alpha = rz / pap;
    kernels::axpy(alpha, p.data(), x.data(), n);
    kernels::axpy(-alpha, ap.data(), r.data(), n);
    rep.iterations = it;
    if (nrm2(r) / bnorm <= tol) {
      rep.residual = true_rel_residual(a, b, x, bnorm);
      if (rep.residual <= tol) {
        rep.converged = true;
        return rep;
      }
    }
    kernels::hadamard(inv_diag.data(), r.data(), z.data(), n);
    const double rz_new = kernels::dot(r.data(), z.data(), n);
    kernels::xpby(z.data(), rz_new / rz, p.data(), n);
    rz = rz_new;
  }
  rep.residual = true_rel_residual(a, b, x, bnorm);
  rep.converged = rep.residual <= tol;
  return rep;
}

SolveReport run_bicgstab(const SparseOperator& a, std::span<const double> b,
                         std::vector<double>& x, const std::vector<double>& inv_diag, double tol,
                         std::size_t max_it, double bnorm) {
  const std::size_t n = a.rows;
  std::vector<double> r(b.begin(), b.end());
  std::vector<double> r0 = r;
  std::vector<double> p(n, 0.0), v(n, 0.0), s(n), t(n), phat(n), shat(n);
  double rho = 1.0, alpha = 1.0, omega = 1.0;

  SolveReport rep;
  rep.method = "bicgstab";
  for (std::size_t it = 1; it <= max_it; ++it) {
    const double rho_new = kernels::dot(r0.data(), r.data(), n);
    if (rho_new == 0.0) break;
    if (it == 1) {
      p = r;
    } else {
      const double beta = (rho_new / rho) * (alpha / omega);
      // p = r + beta (p - omega v)
      kernels::axpy(-omega, v.data(), p.data(), n);
      kernels::xpby(r.data(), beta, p.data(), n);
    }
    rho = rho_new;
    kernels::hadamard(inv_diag.data(), p.data(), phat.data(), n);
    a.apply(phat, v);
    alpha = rho / kernels::dot(r0.data(), v.data(), n);
    s = r;
    kernels::axpy(-alpha, v.data(), s.data(), n);
    rep.iterations = it;
    if (nrm2(s) / bnorm <= tol) {
      kernels::axpy(alpha, phat.data(), x.data(), n);
      rep.residual = true_rel_residual(a, b, x, bnorm);
      if (rep.residual <= tol) {
        rep.converged = true;
        return rep;
      }
      kernels::axpy(-alpha, phat.data(), x.data(), n);
    }
    kernels::hadamard(inv_diag.data(), s.data(), shat.data(), n);
    a.apply(shat, t);
    const double tt = kernels::dot(t.data(), t.data(), n);
    if (tt == 0.0) break;
    omega = kernels::dot(t.data(), s.data(), n) / tt;
    kernels::axpy(alpha, phat.data(), x.data(), n);
    kernels::axpy(omega, shat.data(), x.data(), n);
    r = s;
    kernels::axpy(-omega, t.data(), r.data(), n);
    if (nrm2(r) / bnorm <= tol) {
      rep.residual = true_rel_residual(a, b, x, bnorm);
      if (rep.residual <= tol) {
        rep.converged = true;
        return rep;
      }
    }
    if (omega == 0.0) break;
  }
  rep.residual = true_rel_residual(a, b, x, bnorm);
  rep.converged = rep.residual <= tol;
  return rep;
}

}  // namespace

std::pair<std::vector<double>, SolveReport> solve(const SparseOperator& a,
                                                  std::span<const double> b,
                                                  const SolveOptions& opts) {
  if (a.rows != a.cols) throw std::invalid_argument("solve: matrix must be square");
  if (b.size() != a.rows) throw std::invalid_argument("solve: rhs size mismatch");
  if (!(opts.rel_tolerance > 0.0)) throw std::invalid_argument("solve: tolerance must be positive");

  const double defect = symmetry_defect(a);
  std::vector<double> x(a.rows, 0.0);

  const double bnorm = nrm2(b);
  if (bnorm == 0.0) {
    SolveReport rep;
    rep.method = "none";
    rep.symmetry_defect = defect;
    rep.converged = true;
    return {std::move(x), rep};
  }

  KrylovMethod method = opts.method;
  if (method == KrylovMethod::auto_select) {
    method = (defect <= opts.symmetry_tolerance) ? KrylovMethod::cg : KrylovMethod::bicgstab;
  }
  const std::size_t max_it =
      opts.max_iterations > 0 ? opts.max_iterations : auto_max_iterations(a.rows, opts.dim_hint);
  const std::vector<double> inv_diag = jacobi_diag(a, opts.precond);

  SolveReport rep = (method == KrylovMethod::cg)
                        ? run_cg(a, b, x, inv_diag, opts.rel_tolerance, max_it, bnorm)
                        : run_bicgstab(a, b, x, inv_diag, opts.rel_tolerance, max_it, bnorm);
  rep.symmetry_defect = defect;
  if (!rep.converged) {
    throw SolveError("solver did not reach tolerance " + std::to_string(opts.rel_tolerance) +
                         " within " + std::to_string(max_it) + " iterations (residual " +
                         std::to_string(rep.residual) + ")",
                     rep);
  }
  return {std::move(x), rep};
}

std::pair<MeshFunction, SolveReport> solve_poisson(const TensorMesh& mesh,
                                                   const ManufacturedSolution& sol,
                                                   const SolveOptions& opts, int quad_order) {
  const SparseOperator a = assemble_Lh(mesh, /*volume_scaled=*/true);
  const QuadratureRule rule = QuadratureRule::gauss_legendre(quad_order);
  const MeshFunction avg = rhs_cell_average(mesh, sol, rule);

  std::vector<double> b(mesh.interior_count());
  for_each_interior(mesh, [&](std::span<const int> idx) {
    b[mesh.interior_index(idx)] = mesh.cell_volume(idx) * avg[mesh.node_index(idx)];
  });

  SolveOptions local = opts;
  if (local.dim_hint == 0) local.dim_hint = mesh.dim();
  auto [x, rep] = solve(a, b, local);
  return {scatter_interior(mesh, x), rep};
}

}  // namespace fvlab
