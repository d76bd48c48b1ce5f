#include <cmath>
#include <vector>

#include "doctest.h"
#include "jacobi.hpp"
#include "lrsc/matops.hpp"
#include "lrsc/model.hpp"
#include "lrsc/rng.hpp"

using namespace lrsc;
namespace mo = lrsc::matops;

namespace {

SymMatrix random_sym(int n, SplitMix64& rng, double lo = -2.0, double hi = 2.0) {
  SymMatrix m(n);
  for (int i = 0; i < n; ++i)
    for (int j = i; j < n; ++j) {
      double v = rng.uniform(lo, hi);
      m(i, j) = v;
      m(j, i) = v;
    }
  return m;
}

double max_abs_diff(const SymMatrix& a, const SymMatrix& b) {
  double m = 0.0;
  for (int i = 0; i < a.order(); ++i)
    for (int j = 0; j < a.order(); ++j) m = std::max(m, std::abs(a(i, j) - b(i, j)));
  return m;
}

SymMatrix oracle_svt(const SymMatrix& m, double tau) {
  std::vector<double> v(m.data(), m.data() + m.size());
  std::vector<double> out = oracle::svt(v, m.order(), tau);
  SymMatrix r(m.order());
  std::copy(out.begin(), out.end(), r.data());
  return r;
}

}  // namespace

TEST_CASE("eigh reproduces the matrix and matches the rotation oracle") {
  SplitMix64 rng(101);
  SymMatrix m = random_sym(8, rng);
  mo::EighResult e = mo::eigh(m);
  REQUIRE(e.values.size() == 8);
  for (std::size_t i = 1; i < e.values.size(); ++i) CHECK(e.values[i - 1] <= e.values[i]);

  // reconstruct sum_k lambda_k v_k v_k^T
  SymMatrix rec(8);
  for (int k = 0; k < 8; ++k)
    for (int i = 0; i < 8; ++i)
      for (int j = 0; j < 8; ++j)
        rec(i, j) += e.values[k] * e.vectors(i, k) * e.vectors(j, k);
  CHECK(max_abs_diff(rec, m) < 1e-10);

  std::vector<double> flat(m.data(), m.data() + m.size());
  oracle::Eigh ref = oracle::jacobi_eigh(flat, 8);
  for (int k = 0; k < 8; ++k)
    CHECK(e.values[k] == doctest::Approx(ref.values[k]).epsilon(1e-10));
}

TEST_CASE("svt shrinks spectra") {
  SUBCASE("tau = 0 is the identity") {
    SplitMix64 rng(102);
    SymMatrix m = random_sym(6, rng);
    CHECK(max_abs_diff(mo::svt(m, 0.0), m) < 1e-12);
  }

  SUBCASE("rank-one matrix shrinks its single value") {
    const int n = 5;
    SymMatrix m(n);
    std::vector<double> v = {0.1, -0.4, 0.5, 0.2, -0.7};
    double norm = 0;
    for (double x : v) norm += x * x;
    norm = std::sqrt(norm);
    for (double& x : v) x /= norm;
    const double k = 3.0, tau = 1.25;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = k * v[i] * v[j];
    SymMatrix want(n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) want(i, j) = (k - tau) * v[i] * v[j];
    CHECK(max_abs_diff(mo::svt(m, tau), want) < 1e-10);
  }

  SUBCASE("diagonal case thresholds magnitudes and keeps signs") {
    SymMatrix m(3);
    m(0, 0) = 3.0;
    m(1, 1) = 1.0;
    m(2, 2) = -2.0;
    SymMatrix got = mo::svt(m, 1.5);
    CHECK(got(0, 0) == doctest::Approx(1.5).epsilon(1e-12));
    CHECK(got(1, 1) == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(got(2, 2) == doctest::Approx(-0.5).epsilon(1e-12));
    CHECK(std::abs(got(0, 1)) < 1e-12);
  }

  SUBCASE("random matrices agree with the rotation oracle") {
    SplitMix64 rng(103);
    for (int trial = 0; trial < 5; ++trial) {
      SymMatrix m = random_sym(5, rng);
      CHECK(max_abs_diff(mo::svt(m, 0.8), oracle_svt(m, 0.8)) < 1e-8);
    }
  }

  SUBCASE("the prox is nonexpansive") {
    SplitMix64 rng(104);
    SymMatrix a = random_sym(7, rng), b = random_sym(7, rng);
    SymMatrix pa = mo::svt(a, 0.6), pb = mo::svt(b, 0.6);
    double num = 0, den = 0;
    for (std::size_t i = 0; i < a.size(); ++i) {
      num += (pa.data()[i] - pb.data()[i]) * (pa.data()[i] - pb.data()[i]);
      den += (a.data()[i] - b.data()[i]) * (a.data()[i] - b.data()[i]);
    }
    CHECK(std::sqrt(num) <= std::sqrt(den) + 1e-10);
  }

  SUBCASE("negative tau is rejected") {
    SymMatrix m(2);
    CHECK_THROWS_AS(mo::svt(m, -0.1), std::invalid_argument);
  }
}

TEST_CASE("entrywise shrinkage follows the closed form") {
  SymMatrix m(2);
  m(0, 0) = 1.0;
  m(0, 1) = -1.0;
  m(1, 0) = -1.0;
  m(1, 1) = 0.7;
  SymMatrix got = mo::soft_threshold(m, 1.0);
  CHECK(got(0, 0) == 0.0);
  CHECK(got(0, 1) == 0.0);
  CHECK(got(1, 1) == doctest::Approx(0.0).epsilon(1e-15));

  got = mo::soft_threshold(m, 0.25);
  CHECK(got(0, 0) == doctest::Approx(0.75));
  CHECK(got(0, 1) == doctest::Approx(-0.75));
  CHECK(got(1, 1) == doctest::Approx(0.45));

  CoordSet mask(2, 2);
  mask.set(0, 0);
  SymMatrix masked = mo::soft_threshold_masked(m, mask, 0.25);
  CHECK(masked(0, 0) == doctest::Approx(0.75));
  CHECK(masked(0, 1) == -1.0);  // untouched
  CHECK(masked(1, 1) == 0.7);
}

TEST_CASE("box projection clamps and is idempotent") {
  SplitMix64 rng(105);
  SymMatrix m = random_sym(6, rng, -3.0, 3.0);
  SymMatrix p = mo::project_box(m, 0.0, 1.0);
  for (int i = 0; i < 6; ++i)
    for (int j = 0; j < 6; ++j) {
      CHECK(p(i, j) >= 0.0);
      CHECK(p(i, j) <= 1.0);
      if (m(i, j) >= 0.0 && m(i, j) <= 1.0) CHECK(p(i, j) == m(i, j));
    }
  CHECK(mo::project_box(p, 0.0, 1.0) == p);
}

TEST_CASE("box-plus-sum projection meets its constraint set") {
  SUBCASE("inactive sum constraint reduces to the plain box") {
    SplitMix64 rng(106);
    SymMatrix m = random_sym(5, rng, 0.2, 0.8);
    // sum of the box projection is ~ 25*0.5; ask for far less
    CHECK(max_abs_diff(mo::project_box_sum(m, 0.0, 1.0, 1.0), mo::project_box(m, 0.0, 1.0)) <
          1e-12);
  }

  SUBCASE("zero matrix with an active constraint spreads mass evenly") {
    SymMatrix z(2);
    SymMatrix p = mo::project_box_sum(z, 0.0, 1.0, 2.0);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) CHECK(p(i, j) == doctest::Approx(0.5).epsilon(1e-9));
  }

  SUBCASE("active case matches the breakpoint-exact oracle") {
    SplitMix64 rng(107);
    for (int trial = 0; trial < 8; ++trial) {
      SymMatrix m = random_sym(4, rng, -1.0, 1.0);
      double target = 8.0 + rng.uniform(0.0, 4.0);  // well above sum(clamp(m))
      SymMatrix p = mo::project_box_sum(m, 0.0, 1.0, target);
      std::vector<double> flat(m.data(), m.data() + m.size());
      std::vector<double> ref = oracle::project_box_sum_exact(flat, 0.0, 1.0, target);
      double d = 0;
      for (std::size_t i = 0; i < flat.size(); ++i)
        d = std::max(d, std::abs(p.data()[i] - ref[i]));
      CHECK(d < 1e-6);
      CHECK(mo::sum(p) >= target - 1e-9);
      CHECK(mo::sum(p) <= target + 1e-6);  // active constraint is tight
      for (std::size_t i = 0; i < flat.size(); ++i) {
        CHECK(p.data()[i] >= 0.0);
        CHECK(p.data()[i] <= 1.0);
      }
      // idempotent
      CHECK(max_abs_diff(mo::project_box_sum(p, 0.0, 1.0, target), p) < 1e-9);
    }
  }

  SUBCASE("infeasible targets are rejected") {
    SymMatrix m(3);
    CHECK_THROWS_AS(mo::project_box_sum(m, 0.0, 1.0, 10.0), std::invalid_argument);
  }
}

TEST_CASE("spectral norm matches known values and the oracle") {
  CHECK(mo::spectral_norm(SymMatrix::identity(9)) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK(mo::spectral_norm(SymMatrix(4)) == 0.0);

  // rank-one k vv^T has norm k
  SymMatrix r1(3);
  std::vector<double> v = {2.0 / 3, -1.0 / 3, 2.0 / 3};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) r1(i, j) = 5.0 * v[i] * v[j];
  CHECK(mo::spectral_norm(r1) == doctest::Approx(5.0).epsilon(1e-7));

  SplitMix64 rng(108);
  for (int trial = 0; trial < 3; ++trial) {
    SymMatrix m = random_sym(20, rng);
    std::vector<double> flat(m.data(), m.data() + m.size());
    double ref = oracle::spectral_norm(flat, 20);
    CHECK(mo::spectral_norm(m) == doctest::Approx(ref).epsilon(1e-6));
    CHECK(mo::spectral_norm(m) <= mo::fro_norm(m) + 1e-9);
  }
}

TEST_CASE("nuclear norm sums singular values") {
  SymMatrix d(3);
  d(0, 0) = 3.0;
  d(1, 1) = -1.0;
  d(2, 2) = 0.5;
  CHECK(mo::nuclear_norm(d) == doctest::Approx(4.5).epsilon(1e-10));

  SplitMix64 rng(109);
  SymMatrix m = random_sym(10, rng);
  std::vector<double> flat(m.data(), m.data() + m.size());
  CHECK(mo::nuclear_norm(m) ==
        doctest::Approx(oracle::nuclear_norm(flat, 10)).epsilon(1e-8));
}

TEST_CASE("reductions and masked sums") {
  ClusterLayout l;
  l.n = 5;
  l.clusters = {{0, 1}, {2, 3, 4}};
  CoordSet r = region_R(l);
  CHECK(mo::masked_sum(SymMatrix::ones(5), r) == doctest::Approx(13.0));
  CHECK(mo::masked_sum(SymMatrix::ones(5), CoordSet(5, 5)) == 0.0);

  SplitMix64 rng(110);
  SymMatrix m = random_sym(6, rng);
  CHECK(mo::inner(m, m) == doctest::Approx(mo::fro_norm(m) * mo::fro_norm(m)).epsilon(1e-12));

  double s = 0, l1 = 0, inf = 0;
  for (std::size_t i = 0; i < m.size(); ++i) {
    s += m.data()[i];
    l1 += std::abs(m.data()[i]);
    inf = std::max(inf, std::abs(m.data()[i]));
  }
  CHECK(mo::sum(m) == doctest::Approx(s).epsilon(1e-12));
  CHECK(mo::l1_norm(m) == doctest::Approx(l1).epsilon(1e-12));
  CHECK(mo::inf_norm(m) == inf);
}
