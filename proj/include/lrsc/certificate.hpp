#pragma once

// Optimality-certificate machinery for the planted solution (1_R, S).
//
// The subdifferential of the nuclear norm at 1_R is built from the
// normalized cluster indicators U (column l equals 1/sqrt(k_l) on C_l):
// any U U^T + W with W U = 0, U^T W = 0, ||W|| < 1 certifies strict
// growth along directions leaving the cluster subspace.  The candidate
// dual W_0 assigns a centered coefficient per (region x edge/non-edge)
// cell so each region has zero mean, then gets projected:
//
//     intelligent  W_0 = lambda [ (1-p_l) on A  within C_l x C_l,
//                                  -p_l   on A^c within C_l x C_l,
//                                  (1-q)  on A  outside R,
//                                  -q     on A^c outside R ]
//     blind        W_0 = 2 * the same coefficients
//     W   = (I - P) W_0 (I - P),  P = U U^T
//
// The scalar margin e ("distinctness") measures how far the model sits
// from the failure boundary; the f/g functionals evaluate the objective's
// first-order growth along structured feasible perturbations
// E = V M^T + N V^T (nonpositive over R, nonnegative outside).

#include <cstdint>
#include <string>
#include <vector>

#include "lrsc/model.hpp"
#include "lrsc/rng.hpp"
#include "lrsc/sym_matrix.hpp"

namespace lrsc::certificate {

struct CharacteristicBasis {
  Matrix u;  // n x t, column l = 1/sqrt(k_l) on cluster l
  Matrix v;  // n x t, 0/1 indicator columns
  SymMatrix p;  // U U^T
  std::vector<int> sizes;
};

// Requires at least one cluster.
CharacteristicBasis build_basis(const ClusterLayout& layout);

// Separation margin:
//   intelligent  e = min_l (p_l - q - 1/(k_l lambda)) / 2
//   blind        e = min(1 - 2q, min_l (2 p_l - 1/(lambda k_l) - 1)) / 2
double distinctness_e(Method method, const std::vector<double>& p, double q, double lambda,
                      const std::vector<int>& k);

SymMatrix build_w0(const PlantedGraph& g, double lambda, Method method);

// W = (I - P) X (I - P).
SymMatrix project_mu(const CharacteristicBasis& basis, const SymMatrix& x);

struct PerpPerturbation {
  Matrix m, n;  // the factor pair
  SymMatrix e;  // V M^T + N V^T
};

// Draw M, N with column l nonpositive on C_l and nonnegative elsewhere
// (uniform magnitudes), then rescale the nonpositive part so sum(E) >= 0.
// The resulting E is nonpositive on R, nonnegative on R^c, and lies in the
// orthogonal complement of M_U; the same cone serves both programs.
PerpPerturbation sample_perp_perturbation(const CharacteristicBasis& basis,
                                          const ClusterLayout& layout, Method method,
                                          SplitMix64& rng);

// First-order growth functionals.  f includes the dual term <E, W>; g omits it.
//   intelligent  f = sum_l sum(E_{C_l x C_l})/k_l + lambda sum(E_{A^c}) + <E, W>
//   blind        f = sum_l sum(E_{C_l x C_l})/k_l
//                    + lambda (sum(E_{A^c}) - sum(E_A)) + <E, W>
double eval_f(const SymMatrix& e, const SymMatrix& w, const PlantedGraph& g, double lambda,
              Method method);
double eval_g(const SymMatrix& e, const PlantedGraph& g, double lambda, Method method);

struct TheoremCheck {
  bool intelligent_ok = false;  // p_min > q and k_l >= 4 sqrt(n) / (p_l - q)
  bool blind_ok = false;        // p_min > 1/2 > q and k_l >= 8 sqrt(n) / (2 p_l - 1)
  bool converse_flag = false;   // p_min <= 1/2, or q > 1/2 with R proper
  double e_intelligent = 0.0;   // margin at lambda = 1/(2 sqrt n)
  double e_blind = 0.0;         // margin at lambda = 1/(4 sqrt n)
};

TheoremCheck check_theorem(const ClusterLayout& layout, const ModelParams& params);

struct ConverseResult {
  double gap;  // objective(planted) - objective(competitor); > 0 refutes optimality
  bool used_all_ones;  // competitor family: all-ones (q > 1/2 case) vs strong-cluster
};

// Builds the explicit competitor for the blind program: if p_min <= 1/2,
// L1 keeps only clusters with p_l > 1/2 and S1 = A - L1; otherwise L1 is
// the all-ones matrix and S1 = -1 on non-edges.
ConverseResult converse_gap(const PlantedGraph& g, double lambda);

struct CertificateReport {
  Method method = Method::intelligent;
  int n = 0, t = 0;
  double lambda = 0.0;
  double e = 0.0;
  double c = 0.0;               // background correction level
  std::vector<double> c_i;      // per-cluster correction levels
  double norm_w0 = 0.0, norm_w = 0.0;
  double inf_gap = 0.0;         // ||W0 - W||_inf
  double mu_residual = 0.0;     // max(||W U||_F, ||W^T U||_F)
  double f_min_sampled = 0.0;
  int samples = 0;
  bool pass = false;  // e > 0, ||W|| < 1, mu_residual tiny, sampled f >= -1e-9
};

CertificateReport certify(const PlantedGraph& g, double lambda, Method method, int samples,
                          std::uint64_t seed);

std::string to_key_value(const CertificateReport& r);
std::string report_csv_header();
std::string to_csv_row(const CertificateReport& r);

}  // namespace lrsc::certificate
