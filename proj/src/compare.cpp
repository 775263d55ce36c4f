#include "reftrace/compare.hpp"

#include "reftrace/align.hpp"
#include "reftrace/lex.hpp"

namespace reftrace {

namespace {

struct LineInfo {
  std::vector<std::string> lines;
  std::vector<LexState> stateBefore;
  std::vector<LineBucket> buckets;
};

LineInfo inspect(const std::string& source) {
  LineInfo info;
  info.lines = splitLines(source);
  info.stateBefore.reserve(info.lines.size());
  info.buckets.reserve(info.lines.size());
  LexState state;
  for (std::size_t i = 0; i < info.lines.size(); ++i) {
    info.stateBefore.push_back(state);
    LineClass cls = classifyLine(info.lines[i], static_cast<int>(i), state);
    switch (cls.kind) {
      case LineKind::Code: info.buckets.push_back(LineBucket::Code); break;
      case LineKind::Comment: info.buckets.push_back(LineBucket::Comment); break;
      case LineKind::Blank: info.buckets.push_back(LineBucket::Blank); break;
    }
  }
  return info;
}

}  // namespace

ComparisonRecord compareSnippets(const std::string& oldSource,
                                 const std::string& newSource,
                                 const ComparisonKey& key) {
  ComparisonRecord rec;
  rec.key = key;

  LineInfo oldInfo = inspect(oldSource);
  LineInfo newInfo = inspect(newSource);

  LineAlignment alignment = alignLines(oldInfo.lines, newInfo.lines);
  rec.unchangedCount = static_cast<int>(alignment.unchanged.size());

  double simSum = 0.0;
  rec.changes.reserve(alignment.pairs.size());
  for (auto [i, j] : alignment.pairs) {
    ChangeRecord change = classifyChange(oldInfo.lines[i], newInfo.lines[j],
                                         oldInfo.stateBefore[i],
                                         newInfo.stateBefore[j], i, j);
    simSum += change.similarity;
    ++rec.changeCounts[change.type];
    rec.changes.push_back(std::move(change));
  }
  if (!rec.changes.empty()) {
    rec.averageSimilarity = simSum / static_cast<double>(rec.changes.size());
  }

  for (int i : alignment.deletions)
    ++rec.deletionsByKind[static_cast<int>(oldInfo.buckets[i])];
  for (int j : alignment.insertions)
    ++rec.insertionsByKind[static_cast<int>(newInfo.buckets[j])];

  rec.deltas = metricsDelta(computeAbsoluteMetrics(newSource), computeAbsoluteMetrics(oldSource));
  return rec;
}

RenameMap buildRenameMap(const std::vector<ChangeRecord>& records) {
  RenameMap map;
  for (const ChangeRecord& rec : records) {
    for (const auto& [oldName, newName] : rec.renameEntries) {
      RenameMapEntry& entry = map.entries[oldName];
      ++entry.candidates[newName];
      ++entry.occurrences;
    }
  }
  for (auto& kv : map.entries) {
    RenameMapEntry& entry = kv.second;
    entry.consistent = entry.candidates.size() <= 1;
    if (!entry.consistent) map.consistent = false;
  }
  return map;
}

}  // namespace reftrace
