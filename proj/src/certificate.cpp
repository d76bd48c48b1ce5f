#include "lrsc/certificate.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "lrsc/kernels.hpp"
#include "lrsc/matops.hpp"
#include "lrsc/solvers.hpp"

namespace lrsc::certificate {

namespace {

using RowMajor = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using RMap = Eigen::Map<const RowMajor>;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

CharacteristicBasis build_basis(const ClusterLayout& layout) {
  layout.validate();
  int t = layout.t();
  if (t < 1) throw std::invalid_argument("build_basis: needs at least one cluster");
  CharacteristicBasis b;
  b.u = Matrix(layout.n, t);
  b.v = Matrix(layout.n, t);
  b.sizes = layout.sizes();
  for (int l = 0; l < t; ++l) {
    double inv = 1.0 / std::sqrt(static_cast<double>(b.sizes[l]));
    for (int node : layout.clusters[l]) {
      b.u(node, l) = inv;
      b.v(node, l) = 1.0;
    }
  }
  b.p = SymMatrix(layout.n);
  for (int l = 0; l < t; ++l) {
    double inv = 1.0 / static_cast<double>(b.sizes[l]);
    for (int i : layout.clusters[l])
      for (int j : layout.clusters[l]) b.p(i, j) = inv;
  }
  return b;
}

double distinctness_e(Method method, const std::vector<double>& p, double q, double lambda,
                      const std::vector<int>& k) {
  if (p.size() != k.size() || p.empty())
    throw std::invalid_argument("distinctness_e: p and k must match and be nonempty");
  if (!(lambda > 0.0)) throw std::invalid_argument("distinctness_e: lambda must be positive");
  double m;
  if (method == Method::intelligent) {
    m = p[0] - q - 1.0 / (k[0] * lambda);
    for (std::size_t l = 1; l < p.size(); ++l)
      m = std::min(m, p[l] - q - 1.0 / (k[l] * lambda));
  } else {
    m = 1.0 - 2.0 * q;
    for (std::size_t l = 0; l < p.size(); ++l)
      m = std::min(m, 2.0 * p[l] - 1.0 / (lambda * k[l]) - 1.0);
  }
  return 0.5 * m;
}

SymMatrix build_w0(const PlantedGraph& g, double lambda, Method method) {
  if (!(lambda > 0.0)) throw std::invalid_argument("build_w0: lambda must be positive");
  if (static_cast<int>(g.params.p.size()) != g.layout.t())
    throw std::invalid_argument("build_w0: params do not match layout");
  const int n = g.n();
  const double scale = (method == Method::blind) ? 2.0 * lambda : lambda;
  std::vector<int> lab = g.layout.labels();
  SymMatrix w(n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      bool in_r = lab[i] >= 0 && lab[i] == lab[j];
      double level = in_r ? g.params.p[lab[i]] : g.params.q;
      w(i, j) = scale * ((g.a(i, j) != 0.0) ? (1.0 - level) : -level);
    }
  }
  return w;
}

SymMatrix project_mu(const CharacteristicBasis& basis, const SymMatrix& x) {
  const int n = x.order(), t = basis.u.cols;
  if (basis.u.rows != n) throw std::invalid_argument("project_mu: basis/matrix size mismatch");
  RMap u(basis.u.d.data(), n, t);
  RMap xm(x.data(), n, n);
  // (I-P)X(I-P) = X - PX - (PX)^T + P X P with P = U U^T; X is symmetric.
  Eigen::MatrixXd utx = u.transpose() * xm;         // t x n
  Eigen::MatrixXd px = u * utx;                     // P X
  Eigen::MatrixXd core = utx * u;                   // t x t = U^T X U
  Eigen::MatrixXd pxp = u * core * u.transpose();   // P X P
  SymMatrix w(n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) w(i, j) = xm(i, j) - px(i, j) - px(j, i) + pxp(i, j);
  w.symmetrize();
  return w;
}

PerpPerturbation sample_perp_perturbation(const CharacteristicBasis& basis,
                                          const ClusterLayout& layout, Method method,
                                          SplitMix64& rng) {
  const int n = layout.n, t = layout.t();
  if (basis.u.rows != n || basis.u.cols != t)
    throw std::invalid_argument("sample_perp_perturbation: basis/layout mismatch");
  std::vector<int> lab = layout.labels();

  PerpPerturbation pp;
  pp.m = Matrix(n, t);
  pp.n = Matrix(n, t);
  for (int l = 0; l < t; ++l)
    for (int j = 0; j < n; ++j) {
      double sgn = (lab[j] == l) ? -1.0 : 1.0;
      pp.m(j, l) = sgn * rng.uniform();
      pp.n(j, l) = sgn * rng.uniform();
    }

  // Rescale the nonpositive (own-cluster) part so sum(E) >= 0, keeping the
  // sign structure; sum(E) = sum_l k_l (colsum(M_l) + colsum(N_l)).  The
  // same cone serves both programs.
  (void)method;
  double pos = 0.0, neg = 0.0;
  for (int l = 0; l < t; ++l) {
    double k = basis.sizes[l];
    for (int j = 0; j < n; ++j) {
      double v = pp.m(j, l) + pp.n(j, l);
      if (lab[j] == l)
        neg += k * v;
      else
        pos += k * v;
    }
  }
  if (pos + neg < 0.0 && neg < 0.0) {
    double gamma = pos / -neg;
    for (int l = 0; l < t; ++l)
      for (int j : layout.clusters[l]) {
        pp.m(j, l) *= gamma;
        pp.n(j, l) *= gamma;
      }
  }

  pp.e = SymMatrix(n);
  for (int r = 0; r < n; ++r)
    for (int c = 0; c < n; ++c) {
      double v = 0.0;
      if (lab[r] >= 0) v += pp.m(c, lab[r]);
      if (lab[c] >= 0) v += pp.n(r, lab[c]);
      pp.e(r, c) = v;
    }
  return pp;
}

namespace {

// Shared core of f and g; w == nullptr omits the dual term.
double growth(const SymMatrix& e, const SymMatrix* w, const PlantedGraph& g, double lambda,
              Method method) {
  const int n = g.n();
  if (e.order() != n) throw std::invalid_argument("eval_f/eval_g: size mismatch");
  double acc = 0.0;
  for (int l = 0; l < g.layout.t(); ++l) {
    const auto& cl = g.layout.clusters[l];
    double block = 0.0;
    for (int i : cl)
      for (int j : cl) block += e(i, j);
    acc += block / static_cast<double>(cl.size());
  }
  double edge_sum = 0.0;  // sum of E over the adjacency support
  for (std::size_t i = 0; i < e.size(); ++i)
    if (g.a.data()[i] != 0.0) edge_sum += e.data()[i];
  double total = kernels::sum(e.data(), e.size());
  if (method == Method::intelligent)
    acc += lambda * (total - edge_sum);
  else
    acc += lambda * ((total - edge_sum) - edge_sum);
  if (w != nullptr) acc += matops::inner(e, *w);
  return acc;
}

}  // namespace

double eval_f(const SymMatrix& e, const SymMatrix& w, const PlantedGraph& g, double lambda,
              Method method) {
  return growth(e, &w, g, lambda, method);
}

double eval_g(const SymMatrix& e, const PlantedGraph& g, double lambda, Method method) {
  return growth(e, nullptr, g, lambda, method);
}

TheoremCheck check_theorem(const ClusterLayout& layout, const ModelParams& params) {
  layout.validate();
  if (static_cast<int>(params.p.size()) != layout.t())
    throw std::invalid_argument("check_theorem: params do not match layout");
  if (layout.t() < 1) throw std::invalid_argument("check_theorem: needs at least one cluster");
  TheoremCheck tc;
  const double rt = std::sqrt(static_cast<double>(layout.n));
  const double q = params.q;
  std::vector<int> k = layout.sizes();

  tc.intelligent_ok = params.p_min() > q;
  for (int l = 0; l < layout.t() && tc.intelligent_ok; ++l)
    if (static_cast<double>(k[l]) < 4.0 * rt / (params.p[l] - q)) tc.intelligent_ok = false;

  tc.blind_ok = params.p_min() > 0.5 && q < 0.5;
  for (int l = 0; l < layout.t() && tc.blind_ok; ++l)
    if (static_cast<double>(k[l]) < 8.0 * rt / (2.0 * params.p[l] - 1.0)) tc.blind_ok = false;

  bool full_region =
      layout.region_size() == static_cast<long long>(layout.n) * layout.n;
  tc.converse_flag = params.p_min() <= 0.5 || (q > 0.5 && !full_region);

  tc.e_intelligent = distinctness_e(Method::intelligent, params.p, q, 1.0 / (2.0 * rt), k);
  tc.e_blind = distinctness_e(Method::blind, params.p, q, 1.0 / (4.0 * rt), k);
  return tc;
}

ConverseResult converse_gap(const PlantedGraph& g, double lambda) {
  const int n = g.n();
  SymMatrix l0 = planted_low_rank(g.layout);
  SymMatrix s0 = planted_sparse(g, Method::blind);
  double planted = objective_value(l0, s0, lambda);

  ConverseResult res;
  SymMatrix l1(n), s1(n);
  if (g.params.p_min() <= 0.5) {
    // Keep only clusters dense enough to be worth representing.
    res.used_all_ones = false;
    for (int l = 0; l < g.layout.t(); ++l) {
      if (g.params.p[l] > 0.5)
        for (int i : g.layout.clusters[l])
          for (int j : g.layout.clusters[l]) l1(i, j) = 1.0;
    }
    kernels::sub(g.a.data(), l1.data(), g.a.size(), s1.data());
  } else {
    res.used_all_ones = true;
    l1 = SymMatrix::ones(n);
    // L1 + S1 = A with S1 = -1 exactly on non-edges.
    kernels::sub(g.a.data(), l1.data(), g.a.size(), s1.data());
  }
  res.gap = planted - objective_value(l1, s1, lambda);
  return res;
}

CertificateReport certify(const PlantedGraph& g, double lambda, Method method, int samples,
                          std::uint64_t seed) {
  if (samples < 0) throw std::invalid_argument("certify: negative sample count");
  CharacteristicBasis basis = build_basis(g.layout);
  CertificateReport rep;
  rep.method = method;
  rep.n = g.n();
  rep.t = g.layout.t();
  rep.lambda = lambda;
  rep.samples = samples;
  rep.e = distinctness_e(method, g.params.p, g.params.q, lambda, basis.sizes);

  if (method == Method::intelligent) {
    rep.c = -lambda * g.params.q;
    for (double p : g.params.p) rep.c_i.push_back(lambda * (g.params.q - p));
  } else {
    rep.c = -lambda * (2.0 * g.params.q - 1.0);
    for (double p : g.params.p) rep.c_i.push_back(-lambda * (2.0 * p - 1.0));
  }

  SymMatrix w0 = build_w0(g, lambda, method);
  SymMatrix w = project_mu(basis, w0);

  auto safe_norm = [](const SymMatrix& m) {
    try {
      return matops::spectral_norm(m);
    } catch (const matops::spectral_norm_error& err) {
      return err.best_estimate;  // best available; the report still records it
    }
  };
  rep.norm_w0 = safe_norm(w0);
  rep.norm_w = safe_norm(w);

  SymMatrix diff(rep.n);
  kernels::sub(w0.data(), w.data(), w0.size(), diff.data());
  rep.inf_gap = matops::inf_norm(diff);

  // ||W U||_F and ||W^T U||_F (equal for symmetric W; both computed).
  double wu = 0.0, wtu = 0.0;
  for (int l = 0; l < rep.t; ++l)
    for (int i = 0; i < rep.n; ++i) {
      double acc1 = 0.0, acc2 = 0.0;
      for (int j = 0; j < rep.n; ++j) {
        acc1 += w(i, j) * basis.u(j, l);
        acc2 += w(j, i) * basis.u(j, l);
      }
      wu += acc1 * acc1;
      wtu += acc2 * acc2;
    }
  rep.mu_residual = std::sqrt(std::max(wu, wtu));

  SplitMix64 rng(seed);
  double fmin = 0.0;
  bool first = true;
  for (int s = 0; s < samples; ++s) {
    PerpPerturbation pert = sample_perp_perturbation(basis, g.layout, method, rng);
    double f = eval_f(pert.e, w, g, lambda, method);
    if (first || f < fmin) fmin = f;
    first = false;
  }
  rep.f_min_sampled = fmin;

  rep.pass = rep.e > 0.0 && rep.norm_w < 1.0 &&
             rep.mu_residual <= 1e-8 * matops::fro_norm(w0) && rep.f_min_sampled >= -1e-9;
  return rep;
}

std::string to_key_value(const CertificateReport& r) {
  std::ostringstream os;
  os << "method = " << method_name(r.method) << '\n';
  os << "n = " << r.n << '\n';
  os << "t = " << r.t << '\n';
  os << "lambda = " << fmt(r.lambda) << '\n';
  os << "e = " << fmt(r.e) << '\n';
  os << "c = " << fmt(r.c) << '\n';
  os << "c_i =";
  for (double v : r.c_i) os << ' ' << fmt(v);
  os << '\n';
  os << "norm_w0 = " << fmt(r.norm_w0) << '\n';
  os << "norm_w = " << fmt(r.norm_w) << '\n';
  os << "inf_gap = " << fmt(r.inf_gap) << '\n';
  os << "mu_residual = " << fmt(r.mu_residual) << '\n';
  os << "f_min_sampled = " << fmt(r.f_min_sampled) << '\n';
  os << "samples = " << r.samples << '\n';
  os << "pass = " << (r.pass ? "true" : "false") << '\n';
  return os.str();
}

std::string report_csv_header() {
  return "method,n,t,lambda,e,c,c_i,norm_w0,norm_w,inf_gap,mu_residual,f_min_sampled,"
         "samples,pass";
}

std::string to_csv_row(const CertificateReport& r) {
  std::ostringstream os;
  os << method_name(r.method) << ',' << r.n << ',' << r.t << ',' << fmt(r.lambda) << ','
     << fmt(r.e) << ',' << fmt(r.c) << ',';
  for (std::size_t i = 0; i < r.c_i.size(); ++i) {
    if (i) os << ';';
    os << fmt(r.c_i[i]);
  }
  os << ',' << fmt(r.norm_w0) << ',' << fmt(r.norm_w) << ',' << fmt(r.inf_gap) << ','
     << fmt(r.mu_residual) << ',' << fmt(r.f_min_sampled) << ',' << r.samples << ','
     << (r.pass ? "true" : "false");
  return os.str();
}

}  // namespace lrsc::certificate
