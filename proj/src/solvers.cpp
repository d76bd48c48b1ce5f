#include "lrsc/solvers.hpp"

#include <cmath>
#include <stdexcept>

#include "lrsc/kernels.hpp"
#include "lrsc/matops.hpp"
#include "lrsc/model.hpp"

namespace lrsc {

double default_lambda(int n, LambdaMode mode) {
  if (n < 1) throw std::invalid_argument("default_lambda: n must be positive");
  double rt = std::sqrt(static_cast<double>(n));
  switch (mode) {
    case LambdaMode::intelligent_theorem: return 1.0 / (2.0 * rt);
    case LambdaMode::blind_theorem: return 1.0 / (4.0 * rt);
    case LambdaMode::simulation: return 1.0 / rt;
  }
  throw std::invalid_argument("default_lambda: unknown mode");
}

double objective_value(const SymMatrix& l, const SymMatrix& s, double lambda) {
  return matops::nuclear_norm(l) + lambda * matops::l1_norm(s);
}

namespace {

void validate_adjacency(const SymMatrix& a) {
  int n = a.order();
  if (n < 1) throw std::invalid_argument("solver: empty matrix");
  for (int i = 0; i < n; ++i) {
    if (a(i, i) != 1.0) throw std::invalid_argument("solver: diagonal must be 1");
    for (int j = i + 1; j < n; ++j) {
      double v = a(i, j);
      if (v != 0.0 && v != 1.0) throw std::invalid_argument("solver: entries must be 0/1");
      if (v != a(j, i)) throw std::invalid_argument("solver: matrix must be symmetric");
    }
  }
}

void validate_config(const SolverConfig& cfg) {
  if (!(cfg.lambda >= 0.0)) throw std::invalid_argument("solver: lambda must be >= 0");
  if (!(cfg.rho > 0.0)) throw std::invalid_argument("solver: rho must be positive");
  if (!(cfg.over_relax > 0.0 && cfg.over_relax < 2.0))
    throw std::invalid_argument("solver: over_relax must lie in (0,2)");
  if (cfg.max_iter < 1) throw std::invalid_argument("solver: max_iter must be >= 1");
  if (!(cfg.tol_primal > 0.0 && cfg.tol_dual > 0.0))
    throw std::invalid_argument("solver: tolerances must be positive");
}

Decomposition run_admm(const SymMatrix& a, Method method, double region_size,
                       const SolverConfig& cfg) {
  validate_adjacency(a);
  validate_config(cfg);
  const int n = a.order();
  const std::size_t nn = a.size();
  if (method == Method::intelligent &&
      (region_size < 0.0 || region_size > static_cast<double>(nn)))
    throw std::invalid_argument("solver: region_size outside [0, n^2]");

  CoordSet non_edges;
  if (method == Method::intelligent) non_edges = adjacency_support(a).complemented();

  double rho = cfg.rho;
  const double alpha = cfg.over_relax, beta = 1.0 - cfg.over_relax;
  const double eps_p = cfg.tol_primal * n, eps_d = cfg.tol_dual * n;
  // Residual balancing runs only over the first fifth of the budget (capped)
  // so the tail of every run evolves under a fixed penalty.
  const int adapt_end = cfg.adapt_rho ? std::min(500, cfg.max_iter / 5) : 0;

  SymMatrix z = a, zold(n), tmp(n), tmp2(n);
  SymMatrix x1(n), x2(n), x3(n), h(n);
  SymMatrix u1(n), u2(n), u3(n);

  Decomposition out;
  double r_norm = 0.0, s_norm = 0.0;
  int iter = 0;

  for (iter = 1; iter <= cfg.max_iter; ++iter) {
    // Nuclear-norm block.
    kernels::sub(z.data(), u1.data(), nn, tmp.data());
    x1 = matops::svt(tmp, 1.0 / rho);

    // l1 data block.
    kernels::sub(z.data(), u2.data(), nn, tmp.data());
    if (method == Method::blind) {
      // prox of lambda||A - X||_1: shrink the residual against A.
      kernels::sub(a.data(), tmp.data(), nn, tmp2.data());
      kernels::soft_threshold(tmp2.data(), nn, cfg.lambda / rho, tmp2.data());
      kernels::sub(a.data(), tmp2.data(), nn, x2.data());
    } else {
      kernels::soft_threshold_masked(tmp.data(), non_edges.data(), nn, cfg.lambda / rho,
                                     x2.data());
    }

    // Feasible-set block.
    kernels::sub(z.data(), u3.data(), nn, tmp.data());
    if (method == Method::blind) {
      kernels::clamp(tmp.data(), nn, 0.0, 1.0, x3.data());
    } else {
      x3 = matops::project_box_sum(tmp, 0.0, 1.0, region_size);
    }

    std::swap(zold, z);

    // Over-relaxed consensus average: z = mean_i(alpha x_i + beta z_old + u_i).
    kernels::axpby(alpha, x1.data(), beta, zold.data(), nn, h.data());
    kernels::add(h.data(), u1.data(), nn, z.data());
    kernels::add(h.data(), u1.data(), nn, tmp.data());  // keep h1+u1 for u update
    kernels::axpby(alpha, x2.data(), beta, zold.data(), nn, h.data());
    kernels::add(z.data(), h.data(), nn, z.data());
    kernels::add(z.data(), u2.data(), nn, z.data());
    kernels::axpby(alpha, x3.data(), beta, zold.data(), nn, h.data());
    kernels::add(z.data(), h.data(), nn, z.data());
    kernels::add(z.data(), u3.data(), nn, z.data());
    kernels::scale(z.data(), nn, 1.0 / 3.0, z.data());

    // Scaled dual updates: u_i += (alpha x_i + beta z_old) - z.
    kernels::sub(tmp.data(), z.data(), nn, tmp.data());  // tmp held h1+u1
    std::swap(u1, tmp);
    kernels::axpby(alpha, x2.data(), beta, zold.data(), nn, h.data());
    kernels::add(u2.data(), h.data(), nn, u2.data());
    kernels::sub(u2.data(), z.data(), nn, u2.data());
    kernels::axpby(alpha, x3.data(), beta, zold.data(), nn, h.data());
    kernels::add(u3.data(), h.data(), nn, u3.data());
    kernels::sub(u3.data(), z.data(), nn, u3.data());

    r_norm = std::sqrt(kernels::diff_sq_sum(x1.data(), z.data(), nn) +
                       kernels::diff_sq_sum(x2.data(), z.data(), nn) +
                       kernels::diff_sq_sum(x3.data(), z.data(), nn));
    s_norm = rho * std::sqrt(3.0 * kernels::diff_sq_sum(z.data(), zold.data(), nn));

    if (iter % 10 == 0) out.history.push_back({iter, r_norm, s_norm});

    if (r_norm <= eps_p && s_norm <= eps_d) {
      out.converged = true;
      break;
    }

    if (iter % 10 == 0 && iter <= adapt_end) {
      if (r_norm > 10.0 * s_norm) {
        rho *= 2.0;
        kernels::scale(u1.data(), nn, 0.5, u1.data());
        kernels::scale(u2.data(), nn, 0.5, u2.data());
        kernels::scale(u3.data(), nn, 0.5, u3.data());
      } else if (s_norm > 10.0 * r_norm) {
        rho *= 0.5;
        kernels::scale(u1.data(), nn, 2.0, u1.data());
        kernels::scale(u2.data(), nn, 2.0, u2.data());
        kernels::scale(u3.data(), nn, 2.0, u3.data());
      }
    }
  }

  out.iterations = std::min(iter, cfg.max_iter);
  if (out.history.empty() || out.history.back().iteration != out.iterations)
    out.history.push_back({out.iterations, r_norm, s_norm});
  out.primal_residual = r_norm;
  out.dual_residual = s_norm;

  // The projection block is exactly feasible, so report it as L and derive
  // S from it: blind S = A - L (the coupling holds with no residue),
  // intelligent S = L on the non-edge coordinates.
  out.l = x3;
  out.s = SymMatrix(n);
  if (method == Method::blind) {
    kernels::sub(a.data(), out.l.data(), nn, out.s.data());
  } else {
    const std::uint8_t* mask = non_edges.data();
    for (std::size_t i = 0; i < nn; ++i) out.s.data()[i] = mask[i] ? out.l.data()[i] : 0.0;
  }
  out.objective = objective_value(out.l, out.s, cfg.lambda);
  return out;
}

}  // namespace

Decomposition solve_blind(const SymMatrix& a, const SolverConfig& cfg) {
  return run_admm(a, Method::blind, 0.0, cfg);
}

Decomposition solve_intelligent(const SymMatrix& a, double region_size,
                                const SolverConfig& cfg) {
  return run_admm(a, Method::intelligent, region_size, cfg);
}

}  // namespace lrsc
