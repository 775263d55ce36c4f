#include "reftrace/stats.hpp"

#include <algorithm>
#include <boost/math/distributions/chi_squared.hpp>
#include <cmath>
#include <cstdint>
#include <numeric>

#include "reftrace/errors.hpp"

namespace reftrace {

Descriptive descriptiveStats(const std::vector<double>& samples) {
  if (samples.empty()) throw DataError("descriptiveStats: empty sample");
  Descriptive result;
  result.mean = std::accumulate(samples.begin(), samples.end(), 0.0) /
                static_cast<double>(samples.size());
  if (samples.size() >= 2) {
    double sumSq = 0.0;
    for (double value : samples) {
      double d = value - result.mean;
      sumSq += d * d;
    }
    result.sd = std::sqrt(sumSq / static_cast<double>(samples.size() - 1));
  }
  return result;
}

std::vector<double> midRanks(const std::vector<double>& values) {
  std::vector<size_t> order(values.size());
  std::iota(order.begin(), order.end(), size_t{0});
  std::sort(order.begin(), order.end(),
            [&](size_t a, size_t b) { return values[a] < values[b]; });
  std::vector<double> ranks(values.size());
  size_t i = 0;
  while (i < order.size()) {
    size_t j = i;
    while (j + 1 < order.size() && values[order[j + 1]] == values[order[i]]) ++j;
    double rank = (static_cast<double>(i + 1) + static_cast<double>(j + 1)) / 2.0;
    for (size_t k = i; k <= j; ++k) ranks[order[k]] = rank;
    i = j + 1;
  }
  return ranks;
}

namespace {

/// Sum of t^3 - t over tie runs of a sorted copy of the values.
double tieTerm(std::vector<double> values) {
  std::sort(values.begin(), values.end());
  double total = 0.0;
  size_t i = 0;
  while (i < values.size()) {
    size_t j = i;
    while (j + 1 < values.size() && values[j + 1] == values[i]) ++j;
    double t = static_cast<double>(j - i + 1);
    total += t * t * t - t;
    i = j + 1;
  }
  return total;
}

}  // namespace

TestResult kruskalWallis(const GroupedSamples& samples) {
  if (samples.groups.size() < 2) throw DataError("kruskalWallis: need at least 2 groups");
  std::vector<double> all;
  std::vector<size_t> groupOf;
  size_t groupIndex = 0;
  for (const auto& [label, values] : samples.groups) {
    if (values.empty()) throw DataError("kruskalWallis: empty group " + label);
    for (double value : values) {
      all.push_back(value);
      groupOf.push_back(groupIndex);
    }
    ++groupIndex;
  }

  size_t g = samples.groups.size();
  double n = static_cast<double>(all.size());
  std::vector<double> ranks = midRanks(all);

  std::vector<double> rankSum(g, 0.0);
  std::vector<double> groupSize(g, 0.0);
  for (size_t i = 0; i < all.size(); ++i) {
    rankSum[groupOf[i]] += ranks[i];
    groupSize[groupOf[i]] += 1.0;
  }

  double h = 0.0;
  for (size_t k = 0; k < g; ++k) h += rankSum[k] * rankSum[k] / groupSize[k];
  h = 12.0 / (n * (n + 1.0)) * h - 3.0 * (n + 1.0);

  double ties = tieTerm(all);
  double correction = 1.0 - ties / (n * n * n - n);

  TestResult result;
  result.method = "kruskal-wallis";
  result.tieCorrected = ties > 0.0;
  if (correction <= 0.0) {
    // All values identical: no rank separation is possible.
    result.statistic = 0.0;
    result.pValue = 1.0;
    return result;
  }
  h = std::max(0.0, h / correction);
  result.statistic = h;
  boost::math::chi_squared dist(static_cast<double>(g - 1));
  result.pValue = boost::math::cdf(boost::math::complement(dist, h));
  return result;
}

namespace {

/// Exact two-sided p for the smaller group's U via the conditional
/// permutation distribution: every size-k relabeling of the pooled values is
/// equally likely; U maps to the selected mid-rank sum. Ranks are doubled so
/// all sums are integers; subset counts stay below 2^53 for n*m <= 400.
double exactTwoSidedP(const std::vector<double>& pooled, size_t k, double uSmaller) {
  std::vector<double> ranks = midRanks(pooled);
  std::vector<long long> doubled(ranks.size());
  for (size_t i = 0; i < ranks.size(); ++i) doubled[i] = std::llround(2.0 * ranks[i]);

  std::sort(doubled.rbegin(), doubled.rend());
  long long maxSum = std::accumulate(doubled.begin(), doubled.begin() + static_cast<long>(k), 0LL);

  // dp[j][s] = number of j-subsets of the processed ranks with doubled sum s.
  std::vector<std::vector<std::uint64_t>> dp(
      k + 1, std::vector<std::uint64_t>(static_cast<size_t>(maxSum) + 1, 0));
  dp[0][0] = 1;
  for (long long rank : doubled) {
    for (size_t j = k; j >= 1; --j) {
      for (long long s = maxSum; s >= rank; --s) {
        std::uint64_t from = dp[j - 1][static_cast<size_t>(s - rank)];
        if (from != 0) dp[j][static_cast<size_t>(s)] += from;
      }
    }
  }

  // 2U = S - k(k+1) for the selected group; compare in doubled-integer space.
  long long uDoubled = std::llround(2.0 * uSmaller);
  long long base = static_cast<long long>(k) * (static_cast<long long>(k) + 1);
  long double total = 0.0L, below = 0.0L, above = 0.0L;
  for (long long s = 0; s <= maxSum; ++s) {
    std::uint64_t count = dp[k][static_cast<size_t>(s)];
    if (count == 0) continue;
    long long u2 = s - base;
    total += static_cast<long double>(count);
    if (u2 <= uDoubled) below += static_cast<long double>(count);
    if (u2 >= uDoubled) above += static_cast<long double>(count);
  }
  long double p = 2.0L * std::min(below, above) / total;
  return static_cast<double>(std::min(1.0L, p));
}

}  // namespace

TestResult mannWhitneyU(const std::vector<double>& a, const std::vector<double>& b) {
  if (a.empty() || b.empty()) throw DataError("mannWhitneyU: empty group");
  double u = 0.0;
  bool ties = false;
  for (double x : a) {
    for (double y : b) {
      if (x > y) {
        u += 1.0;
      } else if (x == y) {
        u += 0.5;
        ties = true;
      }
    }
  }

  double n = static_cast<double>(a.size());
  double m = static_cast<double>(b.size());

  TestResult result;
  result.method = "mann-whitney";
  result.statistic = u;
  result.tieCorrected = ties;

  std::vector<double> pooled = a;
  pooled.insert(pooled.end(), b.begin(), b.end());

  if (n * m <= 400.0) {
    // Work with the smaller group; its U mirrors the other's (U + U' = nm).
    bool aSmaller = a.size() <= b.size();
    size_t k = aSmaller ? a.size() : b.size();
    double uSmaller = aSmaller ? u : n * m - u;
    result.pValue = exactTwoSidedP(pooled, k, uSmaller);
    return result;
  }

  double total = n + m;
  double tie = tieTerm(pooled);
  double variance = n * m / 12.0 * ((total + 1.0) - tie / (total * (total - 1.0)));
  if (variance <= 0.0) {
    result.pValue = 1.0;  // every pooled value identical
    return result;
  }
  double mean = n * m / 2.0;
  double shifted = std::max(0.0, std::fabs(u - mean) - 0.5);  // continuity correction
  double z = shifted / std::sqrt(variance);
  result.pValue = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  return result;
}

}  // namespace reftrace
