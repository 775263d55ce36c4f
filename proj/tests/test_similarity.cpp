#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "reftrace/similarity.hpp"

using namespace reftrace;

namespace {

/// Independent oracle: classic O(n*m) dynamic-programming LCS table.
std::size_t lcsOracle(const std::string& a, const std::string& b) {
  std::vector<std::vector<std::size_t>> dp(a.size() + 1,
                                           std::vector<std::size_t>(b.size() + 1, 0));
  for (std::size_t i = 1; i <= a.size(); ++i) {
    for (std::size_t j = 1; j <= b.size(); ++j) {
      if (a[i - 1] == b[j - 1])
        dp[i][j] = dp[i - 1][j - 1] + 1;
      else
        dp[i][j] = std::max(dp[i - 1][j], dp[i][j - 1]);
    }
  }
  return dp[a.size()][b.size()];
}

/// Oracle mirror of lineSimilarity: normalize, then Dice over the DP LCS.
double similarityOracle(const std::string& a, const std::string& b) {
  std::string na = normalizeWhitespace(a);
  std::string nb = normalizeWhitespace(b);
  if (na.empty() && nb.empty()) return 1.0;
  if (na.empty() || nb.empty()) return 0.0;
  return 2.0 * static_cast<double>(lcsOracle(na, nb)) /
         static_cast<double>(na.size() + nb.size());
}

std::string randomLine(std::mt19937& rng, int maxLen, const std::string& alphabet) {
  std::uniform_int_distribution<int> len(0, maxLen);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::string out;
  int n = len(rng);
  for (int i = 0; i < n; ++i) out.push_back(alphabet[pick(rng)]);
  return out;
}

}  // namespace

TEST_CASE("normalizeWhitespace collapses runs and trims") {
  CHECK(normalizeWhitespace("") == "");
  CHECK(normalizeWhitespace("   ") == "");
  CHECK(normalizeWhitespace("a b") == "a b");
  CHECK(normalizeWhitespace("  a \t  b  ") == "a b");
  CHECK(normalizeWhitespace("\tif (x)\t{") == "if (x) {");
}

TEST_CASE("lcsLength agrees with the DP oracle on fixed cases") {
  CHECK(lcsLength("", "") == 0);
  CHECK(lcsLength("abc", "") == 0);
  CHECK(lcsLength("abcd", "abed") == 3);
  CHECK(lcsLength("abc", "xyz") == 0);
  CHECK(lcsLength("AGGTAB", "GXTXAYB") == 4);
}

TEST_CASE("identical lines score 1") {
  CHECK(lineSimilarity("int x = 0;", "int x = 0;") == 1.0);
  CHECK(lineSimilarity("", "") == 1.0);
  CHECK(lineSimilarity("   ", "") == 1.0);  // both normalize to empty
}

TEST_CASE("quarter-different example scores 0.75") {
  CHECK(lineSimilarity("abcd", "abed") == 0.75);
}

TEST_CASE("disjoint alphabets score 0") {
  CHECK(lineSimilarity("abc", "xyz") == 0.0);
}

TEST_CASE("normalization-equal lines score exactly 1") {
  CHECK(lineSimilarity("if (x>0) {", "if   (x>0)   {") == 1.0);
  CHECK(lineSimilarity("\treturn a;", " return a; ") == 1.0);
}

TEST_CASE("similarity matches the DP oracle on 10000 random pairs") {
  std::mt19937 rng(424242u);
  const std::string alphabet = "abcdef ();{}=+<>\t0123xyz.\"";
  for (int i = 0; i < 10000; ++i) {
    std::string a = randomLine(rng, 90, alphabet);
    std::string b = randomLine(rng, 90, alphabet);
    double got = lineSimilarity(a, b);
    double want = similarityOracle(a, b);
    REQUIRE(std::fabs(got - want) <= 1e-12);
  }
}

TEST_CASE("similarity is symmetric and bounded on random pairs") {
  std::mt19937 rng(777u);
  const std::string alphabet = "abRST (;=)";
  for (int i = 0; i < 2000; ++i) {
    std::string a = randomLine(rng, 60, alphabet);
    std::string b = randomLine(rng, 60, alphabet);
    double ab = lineSimilarity(a, b);
    double ba = lineSimilarity(b, a);
    CHECK(ab == ba);
    CHECK(ab >= 0.0);
    CHECK(ab <= 1.0);
    CHECK(lineSimilarity(a, a) == 1.0);
  }
}

TEST_CASE("long lines exercise the multi-word bit-parallel path") {
  std::mt19937 rng(31337u);
  const std::string alphabet = "abcdefghij";
  for (int i = 0; i < 200; ++i) {
    std::string a = randomLine(rng, 300, alphabet);
    std::string b = randomLine(rng, 300, alphabet);
    CHECK(lcsLength(a, b) == lcsOracle(a, b));
  }
}
