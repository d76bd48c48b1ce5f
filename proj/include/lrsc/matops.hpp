#pragma once

// Operations on dense symmetric matrices: the proximal maps used by the
// solvers (singular-value thresholding, entrywise shrinkage, box and
// box-plus-sum projections), spectral norm via power iteration, and the
// masked reductions the certificate checks are built from.
//
// Since the inputs are symmetric, singular values are |eigenvalues|, so
// the nuclear-norm proximal map reduces to one symmetric eigendecomposition
// with thresholding applied to magnitudes and signs restored.

#include <stdexcept>
#include <vector>

#include "lrsc/sym_matrix.hpp"

namespace lrsc::matops {

struct EighResult {
  std::vector<double> values;  // ascending
  Matrix vectors;              // column k pairs with values[k]
};

// Full symmetric eigendecomposition (delegated to a dense eigensolver).
EighResult eigh(const SymMatrix& m);

// prox of tau*||.||_* : eigendecompose, shrink |eigenvalue| by tau, keep signs.
SymMatrix svt(const SymMatrix& m, double tau);

// prox of tau*||.||_1 : entrywise sign(x)*max(|x|-tau, 0).
SymMatrix soft_threshold(const SymMatrix& m, double tau);

// Shrink only coordinates in the mask; other entries pass through.
SymMatrix soft_threshold_masked(const SymMatrix& m, const CoordSet& mask, double tau);

// Euclidean projection onto { lo <= X_ij <= hi }.
SymMatrix project_box(const SymMatrix& m, double lo, double hi);

// Euclidean projection onto { lo <= X_ij <= hi, sum(X) >= s }.  Equals
// clamp(M + mu) for the smallest mu >= 0 meeting the sum constraint; mu is
// found by bisection (1e-10 width, <= 200 steps) and the active case is
// polished with the exact multiplier on the identified free set.
// Throws std::invalid_argument if s > hi * n^2 (infeasible).
SymMatrix project_box_sum(const SymMatrix& m, double lo, double hi, double s);

struct spectral_norm_error : std::runtime_error {
  spectral_norm_error(const std::string& msg, double best, int iters)
      : std::runtime_error(msg), best_estimate(best), iterations(iters) {}
  double best_estimate;
  int iterations;
};

// Largest singular value (= max |eigenvalue|), by power iteration on M^2
// with a seeded deterministic start, stopped when the eigenvalue residual
// certifies relative accuracy tol.  Throws spectral_norm_error carrying the
// best estimate if max(20000, 50*n) iterations do not converge.
double spectral_norm(const SymMatrix& m, double tol = 1e-8);

double nuclear_norm(const SymMatrix& m);  // sum of |eigenvalues|
double l1_norm(const SymMatrix& m);
double fro_norm(const SymMatrix& m);
double inf_norm(const SymMatrix& m);
double sum(const SymMatrix& m);
double masked_sum(const SymMatrix& m, const CoordSet& mask);
double inner(const SymMatrix& a, const SymMatrix& b);  // trace(A^T B)

}  // namespace lrsc::matops
