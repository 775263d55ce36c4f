#pragma once

#include <array>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "reftrace/classify.hpp"
#include "reftrace/metrics.hpp"

namespace reftrace {

struct ComparisonKey {
  std::string snippet;
  std::string variantA;
  std::string variantB;
  int versionA = 0;
  int versionB = 0;
  std::string prompt;

  auto operator<=>(const ComparisonKey&) const = default;
};

/// Per-line kinds for insertion/deletion accounting: code, comment, blank.
enum class LineBucket { Code = 0, Comment = 1, Blank = 2 };

struct ComparisonRecord {
  ComparisonKey key;
  int unchangedCount = 0;
  std::map<ChangeType, int> changeCounts;          // absent key = 0
  std::array<int, 3> insertionsByKind{};           // indexed by LineBucket
  std::array<int, 3> deletionsByKind{};
  std::optional<double> averageSimilarity;         // absent when no pairs
  AbsoluteMetrics deltas;                            // new minus old
  std::vector<ChangeRecord> changes;               // one per changed pair

  int pairCount() const { return static_cast<int>(changes.size()); }
  int insertionCount() const {
    return insertionsByKind[0] + insertionsByKind[1] + insertionsByKind[2];
  }
  int deletionCount() const {
    return deletionsByKind[0] + deletionsByKind[1] + deletionsByKind[2];
  }
  /// Denominator for proportion reporting.
  int lineEvents() const {
    return unchangedCount + pairCount() + insertionCount() + deletionCount();
  }
  int countOf(ChangeType type) const {
    auto it = changeCounts.find(type);
    return it == changeCounts.end() ? 0 : it->second;
  }
};

ComparisonRecord compareSnippets(const std::string& oldSource,
                                 const std::string& newSource,
                                 const ComparisonKey& key);

struct RenameMapEntry {
  /// new name -> occurrence count; more than one key means conflict.
  std::map<std::string, int> candidates;
  int occurrences = 0;
  bool consistent = true;
};

struct RenameMap {
  std::map<std::string, RenameMapEntry> entries;  // keyed by old name
  bool consistent = true;
};

/// Merge renameEntries across the change records of one comparison.
RenameMap buildRenameMap(const std::vector<ChangeRecord>& records);

}  // namespace reftrace
