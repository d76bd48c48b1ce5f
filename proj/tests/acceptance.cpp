// Acceptance gate: one pass/fail line per criterion, nonzero exit on any
// failure.  Each criterion pins its own fixture, seeds, and tolerances so a
// regression is reproducible from the printed line alone.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <string>
#include <vector>

#include "jacobi.hpp"
#include "lrsc/certificate.hpp"
#include "lrsc/harness.hpp"
#include "lrsc/matops.hpp"
#include "lrsc/model.hpp"
#include "lrsc/recovery.hpp"
#include "lrsc/solvers.hpp"
#include "reference_solver.hpp"

using namespace lrsc;

namespace {

double now_seconds() {
  using clock = std::chrono::steady_clock;
  static const clock::time_point start = clock::now();
  return std::chrono::duration<double>(clock::now() - start).count();
}

int failures = 0;

void report(int index, bool ok, const std::string& detail) {
  std::printf("[%s] C%d: %s\n", ok ? "PASS" : "FAIL", index, detail.c_str());
  std::fflush(stdout);
  if (!ok) ++failures;
}

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return std::string(buf);
}

const harness::SweepRow* find_row(const harness::SweepResult& r, Method m, double p) {
  for (const auto& row : r.rows)
    if (row.method == m && std::abs(row.p - p) < 1e-12) return &row;
  return nullptr;
}

// ---- C1: two-cluster phase transition ------------------------------------
void criterion1() {
  double t0 = now_seconds();
  harness::SweepConfig sc;
  sc.n = 64;
  sc.k = {28, 28};
  sc.q = 0.15;
  sc.p_grid = {0.50, 0.85};
  sc.lambda_override = 1.0 / 8.0;  // 1/sqrt(64)
  sc.trials = 20;
  sc.base_seed = 101;
  sc.workers = 0;  // resolve from environment/hardware

  harness::SweepResult r = harness::run_sweep(sc);
  const harness::SweepRow* b50 = find_row(r, Method::blind, 0.50);
  const harness::SweepRow* b85 = find_row(r, Method::blind, 0.85);
  const harness::SweepRow* i85 = find_row(r, Method::intelligent, 0.85);
  double elapsed = now_seconds() - t0;

  bool ok = b50 && b85 && i85 && b50->successes <= 2 && b85->successes >= 18 &&
            i85->successes >= 18 && elapsed < 1800.0;
  report(1, ok,
         fmt("two-cluster transition n=64 k=28,28 q=0.15 lambda=0.125: "
             "blind@0.50=%d/20 (need <=2), blind@0.85=%d/20, intelligent@0.85=%d/20 "
             "(need >=18), %.1fs (cap 1800)",
             b50 ? b50->successes : -1, b85 ? b85->successes : -1, i85 ? i85->successes : -1,
             elapsed));
}

// ---- C2: single-cluster phase transition ----------------------------------
void criterion2() {
  harness::SweepConfig sc;
  sc.n = 50;
  sc.k = {40};
  sc.q = 0.10;
  sc.p_grid = {0.70, 0.85};
  sc.lambda_override = 1.0 / std::sqrt(50.0);
  sc.trials = 20;
  sc.base_seed = 202;
  sc.workers = 0;

  harness::SweepResult r = harness::run_sweep(sc);
  const harness::SweepRow* i70 = find_row(r, Method::intelligent, 0.70);
  const harness::SweepRow* b70 = find_row(r, Method::blind, 0.70);
  const harness::SweepRow* i85 = find_row(r, Method::intelligent, 0.85);
  const harness::SweepRow* b85 = find_row(r, Method::blind, 0.85);

  bool ok = i70 && b70 && i85 && b85 && i70->successes >= 16 && b70->successes <= 10 &&
            i85->successes >= 18 && b85->successes >= 18;
  report(2, ok,
         fmt("single-cluster transition n=50 k=40 q=0.10: intelligent@0.70=%d/20 (need >=16), "
             "blind@0.70=%d/20 (need <=10), intelligent@0.85=%d/20, blind@0.85=%d/20 "
             "(need >=18)",
             i70 ? i70->successes : -1, b70 ? b70->successes : -1, i85 ? i85->successes : -1,
             b85 ? b85->successes : -1));
}

// ---- C3: converse constructions beat the planted pair ---------------------
void criterion3() {
  auto count_positive = [](int n, const std::vector<int>& k, const std::vector<double>& p,
                           double q, std::uint64_t base) {
    ClusterLayout layout = harness::contiguous_layout(n, k);
    int positive = 0;
    for (int t = 0; t < 20; ++t) {
      SplitMix64 rng(base + static_cast<std::uint64_t>(t));
      PlantedGraph g = generate(layout, {p, q}, rng);
      certificate::ConverseResult c = certificate::converse_gap(g, 0.1);  // 1/sqrt(100)
      positive += (c.gap > 0.0);
    }
    return positive;
  };

  int weak = count_positive(100, {50}, {0.4}, 0.1, 3100);
  int dense = count_positive(100, {40, 40}, {0.95, 0.95}, 0.8, 3200);
  bool ok = weak >= 19 && dense >= 19;
  report(3, ok,
         fmt("converse gap>0: weak-cluster %d/20, dense-background %d/20 (need >=19 each, "
             "lambda=0.1)",
             weak, dense));
}

// ---- C4: solvers vs high-accuracy reference on tiny instances -------------
void criterion4() {
  double max_obj_rel = 0.0, max_feas = 0.0, max_lemma = 0.0;
  int ran = 0;
  for (int i = 0; i < 20; ++i) {
    const int n = 4 + (i % 5);
    SplitMix64 rng(7700 + static_cast<std::uint64_t>(i));
    SymMatrix a(n);
    for (int r = 0; r < n; ++r) {
      a(r, r) = 1.0;
      for (int c = r + 1; c < n; ++c) {
        double v = rng.bernoulli(0.5) ? 1.0 : 0.0;
        a(r, c) = v;
        a(c, r) = v;
      }
    }
    const double lambda = 1.0 / std::sqrt(static_cast<double>(n));
    SolverConfig cfg;
    cfg.lambda = lambda;
    cfg.max_iter = 20000;

    // blind
    {
      Decomposition d = solve_blind(a, cfg);
      oracle::ReferenceSolution ref = oracle::reference_solve(a, Method::blind, lambda, 0.0);
      max_obj_rel = std::max(max_obj_rel, std::abs(d.objective - ref.objective) /
                                              std::max(1.0, std::abs(ref.objective)));
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
          max_feas = std::max(max_feas, std::abs(d.l(r, c) + d.s(r, c) - a(r, c)));
          max_feas = std::max(max_feas, std::max(-d.l(r, c), d.l(r, c) - 1.0));
        }
    }
    // intelligent
    {
      double region = std::floor(rng.uniform(0.0, static_cast<double>(n) * n + 1.0));
      Decomposition d = solve_intelligent(a, region, cfg);
      oracle::ReferenceSolution ref =
          oracle::reference_solve(a, Method::intelligent, lambda, region);
      max_obj_rel = std::max(max_obj_rel, std::abs(d.objective - ref.objective) /
                                              std::max(1.0, std::abs(ref.objective)));
      double lsum = 0.0;
      for (int r = 0; r < n; ++r)
        for (int c = 0; c < n; ++c) {
          double l = d.l(r, c), s = d.s(r, c);
          lsum += l;
          max_feas = std::max({max_feas, l - 1.0, s - l, -s});
          if (a(r, c) == 0.0)
            max_lemma = std::max(max_lemma, std::abs(s - l));
          else
            max_lemma = std::max(max_lemma, std::abs(s));
        }
      max_feas = std::max(max_feas, region - lsum);
    }
    ++ran;
  }
  bool ok = ran == 20 && max_obj_rel <= 1e-4 && max_feas <= 1e-6 && max_lemma <= 1e-6;
  report(4, ok,
         fmt("20 tiny instances vs reference: max objective rel err %.2e (cap 1e-4), max "
             "feasibility violation %.2e (cap 1e-6), max identity violation %.2e (cap 1e-6)",
             max_obj_rel, max_feas, max_lemma));
}

// ---- C5: certificate suite at scale ----------------------------------------
void criterion5() {
  double t0 = now_seconds();
  ClusterLayout layout = harness::contiguous_layout(400, {100});
  const double lambda = 1.0 / (2.0 * std::sqrt(400.0));
  bool all_ok = true;
  double worst_e = 1e9, worst_w0 = 0.0, worst_excess = -1e9, worst_f = 1e9;
  for (int i = 0; i < 10; ++i) {
    SplitMix64 rng(5500 + static_cast<std::uint64_t>(i));
    PlantedGraph g = generate(layout, {{0.8}, 0.2}, rng);
    certificate::CertificateReport r =
        certificate::certify(g, lambda, Method::intelligent, 1000, 5600 + i);
    worst_e = std::min(worst_e, r.e);
    worst_w0 = std::max(worst_w0, r.norm_w0);
    worst_excess = std::max(worst_excess, r.norm_w - r.norm_w0);
    worst_f = std::min(worst_f, r.f_min_sampled);
    double fro =
        matops::fro_norm(certificate::build_w0(g, lambda, Method::intelligent));
    all_ok = all_ok && r.e > 0.0 && r.norm_w0 < 1.0 && r.norm_w <= r.norm_w0 + 1e-9 &&
             r.mu_residual <= 1e-8 * fro && r.f_min_sampled >= -1e-9 && r.pass;
  }
  double elapsed = now_seconds() - t0;
  bool ok = all_ok && elapsed < 300.0;
  report(5, ok,
         fmt("10 certificates n=400 k=100 lambda=0.025: min e=%.3f (need >0), max "
             "norm_w0=%.3f (need <1), max norm_w-norm_w0=%.2e (cap 1e-9), min sampled "
             "f=%.2e (floor -1e-9), %.1fs (cap 300)",
             worst_e, worst_w0, worst_excess, worst_f, elapsed));
}

// ---- C6: proximal/spectral kernels vs brute-force oracles ------------------
void criterion6() {
  SplitMix64 rng(6600);
  double worst = 0.0;
  auto track = [&](double err) { worst = std::max(worst, err); };

  for (int i = 0; i < 100; ++i) {
    // svt on a random symmetric 6x6
    {
      const int n = 6;
      SymMatrix m(n);
      for (int r = 0; r < n; ++r)
        for (int c = r; c < n; ++c) {
          double v = rng.uniform(-2.0, 2.0);
          m(r, c) = v;
          m(c, r) = v;
        }
      double tau = rng.uniform(0.0, 2.0);
      SymMatrix got = matops::svt(m, tau);
      std::vector<double> flat(m.data(), m.data() + m.size());
      std::vector<double> want = oracle::svt(flat, n, tau);
      for (std::size_t idx = 0; idx < want.size(); ++idx)
        track(std::abs(got.data()[idx] - want[idx]));
    }
    // soft threshold against the closed form
    {
      SymMatrix m(3);
      for (int r = 0; r < 3; ++r)
        for (int c = r; c < 3; ++c) {
          double v = rng.uniform(-2.0, 2.0);
          m(r, c) = v;
          m(c, r) = v;
        }
      double tau = rng.uniform(0.0, 1.5);
      SymMatrix got = matops::soft_threshold(m, tau);
      for (std::size_t idx = 0; idx < m.size(); ++idx) {
        double x = m.data()[idx];
        double want = x > tau ? x - tau : (x < -tau ? x + tau : 0.0);
        track(std::abs(got.data()[idx] - want));
      }
    }
    // box+sum projection, active and inactive targets
    {
      const int n = 4;
      SymMatrix m(n);
      for (int r = 0; r < n; ++r)
        for (int c = r; c < n; ++c) {
          double v = rng.uniform(-1.0, 1.0);
          m(r, c) = v;
          m(c, r) = v;
        }
      double target = rng.uniform(0.0, 16.0);
      SymMatrix got = matops::project_box_sum(m, 0.0, 1.0, target);
      std::vector<double> flat(m.data(), m.data() + m.size());
      std::vector<double> want = oracle::project_box_sum_exact(flat, 0.0, 1.0, target);
      for (std::size_t idx = 0; idx < want.size(); ++idx)
        track(std::abs(got.data()[idx] - want[idx]));
    }
    // spectral norm
    {
      const int n = 8;
      SymMatrix m(n);
      for (int r = 0; r < n; ++r)
        for (int c = r; c < n; ++c) {
          double v = rng.uniform(-1.0, 1.0);
          m(r, c) = v;
          m(c, r) = v;
        }
      std::vector<double> flat(m.data(), m.data() + m.size());
      track(std::abs(matops::spectral_norm(m) - oracle::spectral_norm(flat, n)));
    }
  }
  bool ok = worst <= 1e-6;
  report(6, ok, fmt("400 oracle comparisons (svt, shrinkage, box+sum, spectral): max "
                    "deviation %.2e (cap 1e-6)",
                    worst));
}

// ---- C7: sweep determinism --------------------------------------------------
void criterion7() {
  harness::SweepConfig sc;
  sc.n = 24;
  sc.k = {10, 8};
  sc.q = 0.1;
  sc.p_grid = {0.7, 0.9};
  sc.lambda_mode = LambdaMode::simulation;
  sc.trials = 3;
  sc.base_seed = 777;
  sc.workers = 1;

  std::string first = harness::strip_timing_column(harness::sweep_csv(harness::run_sweep(sc)));
  std::string second = harness::strip_timing_column(harness::sweep_csv(harness::run_sweep(sc)));
  sc.workers = 2;
  std::string threaded = harness::strip_timing_column(harness::sweep_csv(harness::run_sweep(sc)));

  bool ok = first == second && first == threaded;
  report(7, ok, fmt("sweep csv determinism: rerun identical=%s, workers=2 identical=%s "
                    "(timing column excluded)",
                    first == second ? "yes" : "no", first == threaded ? "yes" : "no"));
}

}  // namespace

int main() {
  criterion1();
  criterion2();
  criterion3();
  criterion4();
  criterion5();
  criterion6();
  criterion7();
  if (failures) std::printf("%d criterion(s) failed\n", failures);
  return failures ? 1 : 0;
}
