#pragma once

#include <map>
#include <string>
#include <vector>

namespace reftrace {

struct GroupedSamples {
  /// Group label (e.g. prompt id) -> metric values.
  std::map<std::string, std::vector<double>> groups;
};

struct TestResult {
  double statistic = 0.0;  // H or U
  double pValue = 1.0;
  std::string method;  // "kruskal-wallis" | "mann-whitney"
  bool tieCorrected = false;
};

struct Descriptive {
  double mean = 0.0;
  double sd = 0.0;  // sample (n-1) denominator; 0 for a single value
};

/// Mean and sample standard deviation. Throws DataError on empty input.
Descriptive descriptiveStats(const std::vector<double>& samples);

/// Kruskal-Wallis H across ≥ 2 non-empty groups: mid-ranks, tie-corrected,
/// p from the chi-squared upper tail with (#groups − 1) degrees of freedom.
/// All-identical values give H = 0, p = 1.
TestResult kruskalWallis(const GroupedSamples& samples);

/// Mann-Whitney U for group a, counting U = #{(x,y): x > y} + ties/2.
/// Two-sided p: exact distribution (mid-rank permutation) when n·m ≤ 400,
/// otherwise normal approximation with tie-corrected variance and continuity
/// correction.
TestResult mannWhitneyU(const std::vector<double>& a, const std::vector<double>& b);

/// Mid-ranks (1-based, ties averaged) of the concatenated input, returned in
/// input order. Exposed for tests: the mid-rank sum is always N(N+1)/2.
std::vector<double> midRanks(const std::vector<double>& values);

}  // namespace reftrace
