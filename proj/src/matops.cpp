#include "lrsc/matops.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>

#include "lrsc/kernels.hpp"
#include "lrsc/rng.hpp"

namespace lrsc::matops {

namespace {

using EMap = Eigen::Map<const Eigen::MatrixXd>;

void check_square(const SymMatrix& m, const char* who) {
  if (m.order() <= 0) throw std::invalid_argument(std::string(who) + ": empty matrix");
}

}  // namespace

EighResult eigh(const SymMatrix& m) {
  check_square(m, "eigh");
  int n = m.order();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(EMap(m.data(), n, n));
  if (es.info() != Eigen::Success) throw std::runtime_error("eigh: eigensolver failed");
  EighResult r;
  r.values.assign(es.eigenvalues().data(), es.eigenvalues().data() + n);
  r.vectors = Matrix(n, n);
  // Eigen is column-major; Matrix is row-major with column k the k-th vector.
  for (int i = 0; i < n; ++i)
    for (int k = 0; k < n; ++k) r.vectors(i, k) = es.eigenvectors()(i, k);
  return r;
}

SymMatrix svt(const SymMatrix& m, double tau) {
  check_square(m, "svt");
  if (tau < 0.0) throw std::invalid_argument("svt: negative threshold");
  int n = m.order();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(EMap(m.data(), n, n));
  if (es.info() != Eigen::Success) throw std::runtime_error("svt: eigensolver failed");
  Eigen::VectorXd w = es.eigenvalues();
  for (int i = 0; i < n; ++i) {
    double mag = std::fabs(w[i]) - tau;
    w[i] = mag > 0.0 ? (w[i] > 0.0 ? mag : -mag) : 0.0;
  }
  Eigen::MatrixXd rec =
      es.eigenvectors() * w.asDiagonal() * es.eigenvectors().transpose();
  SymMatrix out(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) = rec(i, j);
  out.symmetrize();
  return out;
}

SymMatrix soft_threshold(const SymMatrix& m, double tau) {
  SymMatrix out(m.order());
  kernels::soft_threshold(m.data(), m.size(), tau, out.data());
  return out;
}

SymMatrix soft_threshold_masked(const SymMatrix& m, const CoordSet& mask, double tau) {
  if (mask.rows() != m.order() || mask.cols() != m.order())
    throw std::invalid_argument("soft_threshold_masked: mask shape mismatch");
  SymMatrix out(m.order());
  kernels::soft_threshold_masked(m.data(), mask.data(), m.size(), tau, out.data());
  return out;
}

SymMatrix project_box(const SymMatrix& m, double lo, double hi) {
  if (lo > hi) throw std::invalid_argument("project_box: lo > hi");
  SymMatrix out(m.order());
  kernels::clamp(m.data(), m.size(), lo, hi, out.data());
  return out;
}

SymMatrix project_box_sum(const SymMatrix& m, double lo, double hi, double s) {
  if (lo > hi) throw std::invalid_argument("project_box_sum: lo > hi");
  const std::size_t nn = m.size();
  const double max_sum = hi * static_cast<double>(nn);
  if (s > max_sum * (1.0 + 1e-12) + 1e-12)
    throw std::invalid_argument("project_box_sum: sum target exceeds hi * n^2");

  SymMatrix out(m.order());
  kernels::clamp(m.data(), nn, lo, hi, out.data());
  if (kernels::sum(out.data(), nn) >= s) return out;  // constraint inactive

  // Active case: out = clamp(M + mu) with the multiplier mu > 0 chosen so
  // the sum hits s.  sum(clamp(M + mu)) is nondecreasing in mu, so bisect,
  // then solve for mu exactly on the free set found.
  std::vector<double> shifted(nn);
  auto sum_at = [&](double mu) {
    kernels::shift(m.data(), nn, mu, shifted.data());
    kernels::clamp(shifted.data(), nn, lo, hi, shifted.data());
    return kernels::sum(shifted.data(), nn);
  };

  double mu_lo = 0.0;
  double mu_hi = hi - m(0, 0);
  for (std::size_t i = 0; i < nn; ++i) mu_hi = std::max(mu_hi, hi - m.data()[i]);
  for (int it = 0; it < 200 && mu_hi - mu_lo > 1e-10; ++it) {
    double mid = 0.5 * (mu_lo + mu_hi);
    if (sum_at(mid) >= s)
      mu_hi = mid;
    else
      mu_lo = mid;
  }

  double mu = mu_hi;
  double clamped_part = 0.0, free_part = 0.0;
  std::size_t free_count = 0;
  for (std::size_t i = 0; i < nn; ++i) {
    double v = m.data()[i] + mu;
    if (v <= lo) {
      clamped_part += lo;
    } else if (v >= hi) {
      clamped_part += hi;
    } else {
      free_part += m.data()[i];
      ++free_count;
    }
  }
  if (free_count > 0) {
    double exact = (s - clamped_part - free_part) / static_cast<double>(free_count);
    // Guard against a boundary entry flipping between the bisection bracket
    // and the exact multiplier; keep the polished value only if it stays in
    // the bracket's neighborhood.
    if (exact >= mu_lo - 1e-9 && exact <= mu_hi + 1e-9) mu = exact;
  }

  kernels::shift(m.data(), nn, mu, out.data());
  kernels::clamp(out.data(), nn, lo, hi, out.data());
  return out;
}

double spectral_norm(const SymMatrix& m, double tol) {
  check_square(m, "spectral_norm");
  if (tol <= 0.0) throw std::invalid_argument("spectral_norm: tol must be positive");
  const int n = m.order();
  const std::size_t nn = static_cast<std::size_t>(n);

  // Deterministic seeded start.
  SplitMix64 rng(0x5eed0000u ^ static_cast<std::uint64_t>(n));
  std::vector<double> x(nn), y(nn), z(nn);
  for (auto& v : x) v = rng.uniform(-1.0, 1.0);
  double nx = std::sqrt(kernels::dot(x.data(), x.data(), nn));
  if (nx == 0.0) x[0] = 1.0, nx = 1.0;
  kernels::scale(x.data(), nn, 1.0 / nx, x.data());

  // Power iteration on M^2: immune to +/- eigenvalue ties.  For unit x,
  // nu = ||Mx||^2 is the Rayleigh quotient of M^2 at x (so sqrt(nu) never
  // overshoots), and since M^2 is symmetric the residual ||M^2 x - nu x||
  // bounds the distance from nu to the spectrum of M^2.  Stopping on the
  // residual keeps the returned value within ~tol relative error even when
  // the two extreme eigenvalues of M nearly tie in magnitude: the residual
  // scales with the (tiny) gap itself, so near-degenerate tops stop early
  // instead of grinding the angle down.
  const int max_iter = std::max(20000, 50 * n);
  if (kernels::inf_norm(m.data(), nn) == 0.0) return 0.0;
  auto redraw = [&] {
    for (auto& v : x) v = rng.uniform(-1.0, 1.0);
    double nr = std::sqrt(kernels::dot(x.data(), x.data(), nn));
    kernels::scale(x.data(), nn, 1.0 / nr, x.data());
  };
  double est = 0.0;
  for (int it = 1; it <= max_iter; ++it) {
    kernels::matvec(m.data(), x.data(), n, y.data());
    double nu = kernels::dot(y.data(), y.data(), nn);
    if (nu == 0.0) {  // start fell into the null space; re-randomize
      redraw();
      continue;
    }
    est = std::sqrt(nu);
    kernels::matvec(m.data(), y.data(), n, z.data());  // z = M^2 x
    double rr = 0.0;
    for (std::size_t i = 0; i < nn; ++i) {
      double d = z[i] - nu * x[i];
      rr += d * d;
    }
    if (std::sqrt(rr) <= tol * nu) return est;
    double nz = std::sqrt(kernels::dot(z.data(), z.data(), nn));
    if (nz == 0.0) {
      redraw();
      continue;
    }
    kernels::scale(z.data(), nn, 1.0 / nz, x.data());
  }
  throw spectral_norm_error("spectral_norm: power iteration did not converge", est, max_iter);
}

double nuclear_norm(const SymMatrix& m) {
  check_square(m, "nuclear_norm");
  int n = m.order();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(EMap(m.data(), n, n),
                                                    Eigen::EigenvaluesOnly);
  if (es.info() != Eigen::Success) throw std::runtime_error("nuclear_norm: eigensolver failed");
  double s = 0.0;
  for (int i = 0; i < n; ++i) s += std::fabs(es.eigenvalues()[i]);
  return s;
}

double l1_norm(const SymMatrix& m) { return kernels::abs_sum(m.data(), m.size()); }

double fro_norm(const SymMatrix& m) {
  return std::sqrt(kernels::dot(m.data(), m.data(), m.size()));
}

double inf_norm(const SymMatrix& m) { return kernels::inf_norm(m.data(), m.size()); }

double sum(const SymMatrix& m) { return kernels::sum(m.data(), m.size()); }

double masked_sum(const SymMatrix& m, const CoordSet& mask) {
  if (mask.rows() != m.order() || mask.cols() != m.order())
    throw std::invalid_argument("masked_sum: mask shape mismatch");
  return kernels::masked_sum(m.data(), mask.data(), m.size());
}

double inner(const SymMatrix& a, const SymMatrix& b) {
  if (a.order() != b.order()) throw std::invalid_argument("inner: order mismatch");
  return kernels::dot(a.data(), b.data(), a.size());
}

}  // namespace lrsc::matops
