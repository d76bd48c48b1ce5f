#pragma once

// Convex programs for planted dense cluster recovery.
//
// Blind (no side information), over the adjacency matrix A:
//
//     min  ||L||_* + lambda ||S||_1
//     s.t. 1 >= L >= 0,  L + S = A
//
// solved over L alone by eliminating S = A - L, which makes the equality
// hold exactly by construction.
//
// Intelligent (known total region size |R|), in reduced form:
//
//     min  ||L||_* + lambda ||L restricted to A^c||_1
//     s.t. 1 >= L >= 0,  sum(L) >= |R|
//
// whose optimal S is L restricted to the non-edge coordinates.  Both are
// solved by three-block consensus ADMM with over-relaxation and residual
// balancing: one block each for the nuclear-norm prox (singular value
// thresholding), the l1 data term, and the feasible-set projection.  The
// returned L is the projection block's iterate, so box (and sum)
// feasibility holds exactly.

#include <cstdint>
#include <vector>

#include "lrsc/sym_matrix.hpp"

namespace lrsc {

enum class LambdaMode { intelligent_theorem, blind_theorem, simulation };

// intelligent_theorem: 1/(2 sqrt(n)); blind_theorem: 1/(4 sqrt(n));
// simulation: 1/sqrt(n).
double default_lambda(int n, LambdaMode mode);

struct SolverConfig {
  double lambda = 0.0;
  double rho = 1.0;        // initial penalty; rebalanced at runtime
  double over_relax = 1.5; // alpha in (0, 2)
  int max_iter = 5000;
  double tol_primal = 1e-6;  // absolute, scaled by n
  double tol_dual = 1e-6;    // absolute, scaled by n
  bool adapt_rho = true;
  std::uint64_t seed = 0;  // reserved for randomized variants; the splitting is deterministic
};

struct ResidualSample {
  int iteration;
  double primal;
  double dual;
};

struct Decomposition {
  SymMatrix l, s;
  double objective = 0.0;
  double primal_residual = 0.0;
  double dual_residual = 0.0;
  int iterations = 0;
  bool converged = false;  // non-convergence is reported, not thrown
  std::vector<ResidualSample> history;  // sampled every 10 iterations + final
};

// Requires a symmetric 0/1 matrix with unit diagonal and lambda >= 0.
Decomposition solve_blind(const SymMatrix& a, const SolverConfig& cfg);

// Additionally requires 0 <= region_size <= n^2.
Decomposition solve_intelligent(const SymMatrix& a, double region_size, const SolverConfig& cfg);

// ||L||_* + lambda ||S||_1
double objective_value(const SymMatrix& l, const SymMatrix& s, double lambda);

}  // namespace lrsc
