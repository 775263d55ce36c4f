#include "reftrace/align.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>

#include "reftrace/similarity.hpp"

namespace reftrace {

namespace {

/// LCS matching over byte-identical lines. Ties in the backtrack are broken
/// by comparing line content (old > new moves up, else left), which keeps the
/// matching transpose-symmetric: swapping the inputs transposes the result.
std::vector<std::pair<int, int>> matchUnchanged(
    const std::vector<std::string>& a, const std::vector<std::string>& b) {
  const int n = static_cast<int>(a.size());
  const int m = static_cast<int>(b.size());

  // Intern lines so the DP compares ints.
  std::unordered_map<std::string_view, int> internMap;
  auto intern = [&](const std::string& s) {
    return internMap.try_emplace(s, static_cast<int>(internMap.size()))
        .first->second;
  };
  std::vector<int> ia(n), ib(m);
  for (int i = 0; i < n; ++i) ia[i] = intern(a[i]);
  for (int j = 0; j < m; ++j) ib[j] = intern(b[j]);

  std::vector<std::vector<int>> dp(n + 1, std::vector<int>(m + 1, 0));
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= m; ++j) {
      dp[i][j] = ia[i - 1] == ib[j - 1]
                     ? dp[i - 1][j - 1] + 1
                     : std::max(dp[i - 1][j], dp[i][j - 1]);
    }
  }

  std::vector<std::pair<int, int>> matches;
  int i = n, j = m;
  while (i > 0 && j > 0) {
    if (ia[i - 1] == ib[j - 1]) {
      matches.emplace_back(i - 1, j - 1);
      --i;
      --j;
    } else if (dp[i - 1][j] > dp[i][j - 1]) {
      --i;
    } else if (dp[i - 1][j] < dp[i][j - 1]) {
      --j;
    } else if (a[i - 1] > b[j - 1]) {
      --i;
    } else {
      --j;
    }
  }
  std::reverse(matches.begin(), matches.end());
  return matches;
}

struct Candidate {
  double sim;
  int oldIdx;
  int newIdx;
};

void pairBlock(const std::vector<std::string>& a, const std::vector<std::string>& b,
               int o0, int o1, int n0, int n1, LineAlignment& out) {
  if (o0 >= o1 && n0 >= n1) return;
  if (o0 >= o1) {
    for (int j = n0; j < n1; ++j) out.insertions.push_back(j);
    return;
  }
  if (n0 >= n1) {
    for (int i = o0; i < o1; ++i) out.deletions.push_back(i);
    return;
  }

  std::vector<Candidate> cands;
  cands.reserve(static_cast<std::size_t>(o1 - o0) * (n1 - n0));
  for (int i = o0; i < o1; ++i) {
    for (int j = n0; j < n1; ++j) {
      double s = lineSimilarity(a[i], b[j]);
      if (s >= kPairThreshold) cands.push_back(Candidate{s, i, j});
    }
  }
  std::sort(cands.begin(), cands.end(), [](const Candidate& x, const Candidate& y) {
    if (x.sim != y.sim) return x.sim > y.sim;
    if (x.oldIdx != y.oldIdx) return x.oldIdx < y.oldIdx;
    return x.newIdx < y.newIdx;
  });

  std::map<int, int> byOld;  // accepted pairs, keyed by old index
  std::vector<bool> oldUsed(o1 - o0, false), newUsed(n1 - n0, false);
  for (const Candidate& c : cands) {
    if (oldUsed[c.oldIdx - o0] || newUsed[c.newIdx - n0]) continue;
    auto after = byOld.upper_bound(c.oldIdx);
    if (after != byOld.end() && after->second < c.newIdx) continue;
    if (after != byOld.begin() && std::prev(after)->second > c.newIdx) continue;
    byOld.emplace(c.oldIdx, c.newIdx);
    oldUsed[c.oldIdx - o0] = true;
    newUsed[c.newIdx - n0] = true;
  }

  for (auto [i, j] : byOld) out.pairs.emplace_back(i, j);
  for (int i = o0; i < o1; ++i)
    if (!oldUsed[i - o0]) out.deletions.push_back(i);
  for (int j = n0; j < n1; ++j)
    if (!newUsed[j - n0]) out.insertions.push_back(j);
}

}  // namespace

LineAlignment alignLines(const std::vector<std::string>& oldLines,
                         const std::vector<std::string>& newLines) {
  LineAlignment out;
  out.unchanged = matchUnchanged(oldLines, newLines);

  int prevOld = 0, prevNew = 0;
  for (auto [mi, mj] : out.unchanged) {
    pairBlock(oldLines, newLines, prevOld, mi, prevNew, mj, out);
    prevOld = mi + 1;
    prevNew = mj + 1;
  }
  pairBlock(oldLines, newLines, prevOld, static_cast<int>(oldLines.size()),
            prevNew, static_cast<int>(newLines.size()), out);

  std::sort(out.pairs.begin(), out.pairs.end());
  std::sort(out.deletions.begin(), out.deletions.end());
  std::sort(out.insertions.begin(), out.insertions.end());
  return out;
}

}  // namespace reftrace
