#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numeric>
#include <random>
#include <vector>

#include "reftrace/errors.hpp"
#include "reftrace/stats.hpp"

using namespace reftrace;

namespace {

double countingU(const std::vector<double>& a, const std::vector<double>& b) {
  double u = 0.0;
  for (double x : a)
    for (double y : b) {
      if (x > y)
        u += 1.0;
      else if (x == y)
        u += 0.5;
    }
  return u;
}

/// Independent oracle: enumerate every C(n+m, n) assignment of the pooled
/// values to group a and tabulate the exact two-sided permutation p-value
/// for the observed U (inclusive tails, doubled smaller tail, capped at 1).
double exactOracleP(const std::vector<double>& a, const std::vector<double>& b) {
  std::vector<double> pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());
  const std::size_t n = pooled.size();
  const std::size_t k = a.size();
  const double observed = countingU(a, b);

  long long below = 0, above = 0, total = 0;
  std::vector<std::size_t> idx(k);
  std::iota(idx.begin(), idx.end(), 0);
  while (true) {
    std::vector<double> ga, gb;
    std::vector<bool> inA(n, false);
    for (std::size_t i : idx) inA[i] = true;
    for (std::size_t i = 0; i < n; ++i) (inA[i] ? ga : gb).push_back(pooled[i]);
    double u = countingU(ga, gb);
    if (u <= observed) ++below;
    if (u >= observed) ++above;
    ++total;

    // Next k-combination of {0..n-1} in lexicographic order.
    std::size_t i = k;
    while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
    if (i == 0) break;
    ++idx[i - 1];
    for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
  }
  double p = 2.0 * static_cast<double>(std::min(below, above)) / static_cast<double>(total);
  return std::min(1.0, p);
}

}  // namespace

TEST_CASE("descriptive statistics") {
  Descriptive d = descriptiveStats({2.0, 4.0, 4.0, 4.0, 5.0, 5.0, 7.0, 9.0});
  CHECK(d.mean == doctest::Approx(5.0).epsilon(1e-12));
  CHECK(d.sd == doctest::Approx(std::sqrt(32.0 / 7.0)).epsilon(1e-12));

  Descriptive single = descriptiveStats({3.5});
  CHECK(single.mean == 3.5);
  CHECK(single.sd == 0.0);

  CHECK_THROWS_AS(descriptiveStats({}), DataError);
}

TEST_CASE("mid-ranks average ties and keep input order") {
  CHECK(midRanks({3.0, 1.0, 3.0}) == std::vector<double>{2.5, 1.0, 2.5});
  CHECK(midRanks({10.0}) == std::vector<double>{1.0});
  CHECK(midRanks({5.0, 5.0, 5.0, 5.0}) == std::vector<double>{2.5, 2.5, 2.5, 2.5});
}

TEST_CASE("mid-rank sum is always N(N+1)/2") {
  std::mt19937 rng(1234u);
  std::uniform_int_distribution<int> len(1, 40);
  std::uniform_int_distribution<int> value(0, 6);
  for (int iter = 0; iter < 300; ++iter) {
    int n = len(rng);
    std::vector<double> values;
    for (int i = 0; i < n; ++i) values.push_back(static_cast<double>(value(rng)));
    std::vector<double> ranks = midRanks(values);
    double sum = std::accumulate(ranks.begin(), ranks.end(), 0.0);
    CHECK(sum == doctest::Approx(n * (n + 1) / 2.0).epsilon(1e-12));
  }
}

TEST_CASE("kruskal-wallis on three separated groups gives H = 7.2") {
  GroupedSamples samples;
  samples.groups["a"] = {1.0, 2.0, 3.0};
  samples.groups["b"] = {4.0, 5.0, 6.0};
  samples.groups["c"] = {7.0, 8.0, 9.0};
  TestResult r = kruskalWallis(samples);
  CHECK(r.method == "kruskal-wallis");
  CHECK(std::fabs(r.statistic - 7.2) <= 1e-9);
  // df = 2, so the chi-squared upper tail has the closed form exp(-H/2).
  CHECK(std::fabs(r.pValue - std::exp(-3.6)) <= 1e-12);
  CHECK_FALSE(r.tieCorrected);
}

TEST_CASE("kruskal-wallis on identical values degenerates to H = 0, p = 1") {
  GroupedSamples samples;
  samples.groups["a"] = {2.0, 2.0, 2.0};
  samples.groups["b"] = {2.0, 2.0};
  samples.groups["c"] = {2.0};
  TestResult r = kruskalWallis(samples);
  CHECK(r.statistic == 0.0);
  CHECK(r.pValue == 1.0);
}

TEST_CASE("kruskal-wallis input validation") {
  GroupedSamples one;
  one.groups["only"] = {1.0, 2.0};
  CHECK_THROWS_AS(kruskalWallis(one), DataError);

  GroupedSamples withEmpty;
  withEmpty.groups["a"] = {1.0};
  withEmpty.groups["b"] = {};
  CHECK_THROWS_AS(kruskalWallis(withEmpty), DataError);
}

TEST_CASE("kruskal-wallis applies the tie correction") {
  GroupedSamples samples;
  samples.groups["a"] = {1.0, 2.0, 2.0};
  samples.groups["b"] = {2.0, 3.0, 4.0};
  TestResult r = kruskalWallis(samples);
  CHECK(r.tieCorrected);
  // Hand computation: ranks 1, 3, 3, 3, 5, 6; R1 = 7, R2 = 14.
  // H = 12/(6*7) * (49/3 + 196/3) - 3*7 = 23.333... - 21 = 2.3333...
  // C = 1 - (3^3 - 3)/(6^3 - 6) = 1 - 24/210; H' = H / C.
  double h = 12.0 / 42.0 * (49.0 / 3.0 + 196.0 / 3.0) - 21.0;
  double c = 1.0 - 24.0 / 210.0;
  CHECK(r.statistic == doctest::Approx(h / c).epsilon(1e-12));
}

TEST_CASE("mann-whitney separated example is binary-exact") {
  TestResult r = mannWhitneyU({1.0, 2.0, 3.0}, {4.0, 5.0, 6.0});
  CHECK(r.method == "mann-whitney");
  CHECK(r.statistic == 0.0);
  CHECK(std::fabs(r.pValue - 0.1) <= 1e-12);
}

TEST_CASE("mann-whitney on identical samples gives p = 1") {
  TestResult r = mannWhitneyU({5.0, 5.0}, {5.0, 5.0, 5.0});
  CHECK(r.statistic == doctest::Approx(3.0));  // all ties: nm/2
  CHECK(r.pValue == 1.0);
  CHECK(r.tieCorrected);
}

TEST_CASE("mann-whitney rejects empty groups") {
  CHECK_THROWS_AS(mannWhitneyU({}, {1.0}), DataError);
  CHECK_THROWS_AS(mannWhitneyU({1.0}, {}), DataError);
}

TEST_CASE("exact p-values match brute-force enumeration, with and without ties") {
  std::mt19937 rng(8675309u);
  std::uniform_int_distribution<int> sizeDist(1, 5);
  std::uniform_int_distribution<int> tiedValue(0, 3);
  std::uniform_real_distribution<double> smoothValue(0.0, 1.0);
  for (int iter = 0; iter < 200; ++iter) {
    int n = sizeDist(rng), m = sizeDist(rng);
    std::vector<double> a, b;
    bool tied = iter % 2 == 0;
    for (int i = 0; i < n; ++i)
      a.push_back(tied ? static_cast<double>(tiedValue(rng)) : smoothValue(rng));
    for (int i = 0; i < m; ++i)
      b.push_back(tied ? static_cast<double>(tiedValue(rng)) : smoothValue(rng));
    TestResult r = mannWhitneyU(a, b);
    CHECK(r.statistic == countingU(a, b));
    double oracle = exactOracleP(a, b);
    INFO("n=", n, " m=", m, " U=", r.statistic, " p=", r.pValue, " oracle=", oracle);
    REQUIRE(std::fabs(r.pValue - oracle) <= 1e-12);
  }
}

TEST_CASE("U duality: U(a,b) + U(b,a) = n*m with equal p-values") {
  std::mt19937 rng(5551212u);
  std::uniform_int_distribution<int> sizeDist(1, 12);
  std::uniform_int_distribution<int> value(0, 9);
  for (int iter = 0; iter < 200; ++iter) {
    int n = sizeDist(rng), m = sizeDist(rng);
    std::vector<double> a, b;
    for (int i = 0; i < n; ++i) a.push_back(static_cast<double>(value(rng)));
    for (int i = 0; i < m; ++i) b.push_back(static_cast<double>(value(rng)));
    TestResult fwd = mannWhitneyU(a, b);
    TestResult rev = mannWhitneyU(b, a);
    CHECK(fwd.statistic + rev.statistic == doctest::Approx(n * m).epsilon(1e-12));
    CHECK(fwd.pValue == doctest::Approx(rev.pValue).epsilon(1e-12));
  }
}

TEST_CASE("rank tests are invariant under strictly increasing transforms") {
  std::mt19937 rng(31415u);
  std::uniform_int_distribution<int> sizeDist(2, 10);
  std::uniform_int_distribution<int> value(-5, 5);
  for (int iter = 0; iter < 100; ++iter) {
    int n = sizeDist(rng), m = sizeDist(rng);
    std::vector<double> a, b, ta, tb;
    for (int i = 0; i < n; ++i) a.push_back(static_cast<double>(value(rng)));
    for (int i = 0; i < m; ++i) b.push_back(static_cast<double>(value(rng)));
    for (double x : a) ta.push_back(std::exp(x));
    for (double x : b) tb.push_back(std::exp(x));
    TestResult plain = mannWhitneyU(a, b);
    TestResult mapped = mannWhitneyU(ta, tb);
    CHECK(plain.statistic == mapped.statistic);
    CHECK(plain.pValue == doctest::Approx(mapped.pValue).epsilon(1e-12));

    GroupedSamples g1, g2;
    g1.groups["a"] = a;
    g1.groups["b"] = b;
    g2.groups["a"] = ta;
    g2.groups["b"] = tb;
    TestResult kw1 = kruskalWallis(g1);
    TestResult kw2 = kruskalWallis(g2);
    CHECK(kw1.statistic == doctest::Approx(kw2.statistic).epsilon(1e-12));
    CHECK(kw1.pValue == doctest::Approx(kw2.pValue).epsilon(1e-12));
  }
}

TEST_CASE("normal approximation is taken above the exact threshold and stays sane") {
  // n*m = 420 > 400: approximation path.
  std::mt19937 rng(2718u);
  std::normal_distribution<double> na(0.0, 1.0);
  std::normal_distribution<double> nb(0.4, 1.0);
  std::vector<double> a, b;
  for (int i = 0; i < 20; ++i) a.push_back(na(rng));
  for (int i = 0; i < 21; ++i) b.push_back(nb(rng));
  TestResult approx = mannWhitneyU(a, b);
  CHECK(approx.pValue > 0.0);
  CHECK(approx.pValue <= 1.0);

  // Dropping one observation lands on the exact path; with the continuity
  // correction the two distributions' p-values must be close.
  std::vector<double> bTrim(b.begin(), b.end() - 1);
  TestResult exact = mannWhitneyU(a, bTrim);
  CHECK(std::fabs(exact.pValue - approx.pValue) < 0.15);
}

TEST_CASE("two-group kruskal-wallis approximates the mann-whitney p-value") {
  std::mt19937 rng(16180u);
  std::normal_distribution<double> na(0.0, 1.0);
  std::normal_distribution<double> nb(0.3, 1.0);
  for (int iter = 0; iter < 10; ++iter) {
    std::vector<double> a, b;
    for (int i = 0; i < 25; ++i) a.push_back(na(rng));
    for (int i = 0; i < 25; ++i) b.push_back(nb(rng));
    GroupedSamples g;
    g.groups["a"] = a;
    g.groups["b"] = b;
    TestResult kw = kruskalWallis(g);
    TestResult mw = mannWhitneyU(a, b);  // nm = 625: normal path
    CHECK(std::fabs(kw.pValue - mw.pValue) < 0.02);
  }
}
