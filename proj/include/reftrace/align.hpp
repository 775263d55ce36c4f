#pragma once

#include <string>
#include <utility>
#include <vector>

namespace reftrace {

/// Similarity floor below which two lines are not considered a changed pair.
inline constexpr double kPairThreshold = 0.5;

/// Line-level alignment of two file versions.
///
/// Unchanged lines are matched by a longest-common-subsequence pass over
/// byte-identical lines; the gaps between matches are then paired greedily
/// by descending line similarity (ties: smaller old index, then smaller new
/// index) subject to monotonicity, with a 0.5 similarity floor. Lines left
/// over on the old side are deletions, on the new side insertions.
struct LineAlignment {
  std::vector<std::pair<int, int>> unchanged;  // (old index, new index)
  std::vector<std::pair<int, int>> pairs;      // changed pairs, old asc
  std::vector<int> deletions;                  // old indices, ascending
  std::vector<int> insertions;                 // new indices, ascending
};

LineAlignment alignLines(const std::vector<std::string>& oldLines,
                         const std::vector<std::string>& newLines);

}  // namespace reftrace
