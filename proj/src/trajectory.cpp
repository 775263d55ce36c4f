#include "reftrace/trajectory.hpp"

#include <algorithm>
#include <tuple>

#include "reftrace/errors.hpp"
#include "reftrace/pipeline.hpp"

namespace reftrace {

bool isIdenticalComparison(const ComparisonRecord& record) {
  return record.pairCount() == 0 && record.insertionCount() == 0 && record.deletionCount() == 0;
}

std::optional<double> trajectorySimilarity(const ComparisonRecord& record) {
  if (record.averageSimilarity) return record.averageSimilarity;
  if (isIdenticalComparison(record)) return 1.0;
  return std::nullopt;
}

std::vector<std::string> orderPrompts(std::vector<std::string> prompts) {
  auto rank = [](const std::string& id) {
    const auto& catalog = promptCatalog();
    for (size_t i = 0; i < catalog.size(); ++i) {
      if (catalog[i].id == id) return i;
    }
    return catalog.size();
  };
  std::sort(prompts.begin(), prompts.end(), [&](const std::string& a, const std::string& b) {
    size_t ra = rank(a), rb = rank(b);
    return ra != rb ? ra < rb : a < b;
  });
  prompts.erase(std::unique(prompts.begin(), prompts.end()), prompts.end());
  return prompts;
}

namespace {

std::string describeInstance(const std::string& snippet, VariantId variant,
                             const std::string& prompt, int version) {
  return snippet + "/" + variantName(variant) + "/" + prompt + "/v" + std::to_string(version);
}

std::string mustRead(const SnapshotStore& store, const std::string& snippet, VariantId variant,
                     const std::string& prompt, int version) {
  if (!store.exists(snippet, variant, prompt, version)) {
    throw DataError("missing snapshot " + describeInstance(snippet, variant, prompt, version));
  }
  return store.read(snippet, variant, prompt, version);
}

}  // namespace

std::vector<ComparisonRecord> horizontalAnalysis(const SnapshotStore& store,
                                                 const std::string& snippet, VariantId variant,
                                                 const std::string& prompt, int iterations) {
  std::vector<std::string> sources;
  sources.reserve(static_cast<size_t>(iterations) + 1);
  for (int version = 0; version <= iterations; ++version) {
    sources.push_back(mustRead(store, snippet, variant, prompt, version));
  }
  std::vector<ComparisonRecord> records;
  records.reserve(static_cast<size_t>(iterations) * (iterations + 1) / 2);
  for (int i = 0; i <= iterations; ++i) {
    for (int j = i + 1; j <= iterations; ++j) {
      ComparisonKey key{snippet, variantName(variant), variantName(variant), i, j, prompt};
      records.push_back(compareSnippets(sources[static_cast<size_t>(i)],
                                        sources[static_cast<size_t>(j)], key));
    }
  }
  return records;
}

std::vector<ComparisonRecord> verticalAnalysis(const SnapshotStore& store, int version) {
  static constexpr std::array<std::pair<VariantId, VariantId>, 3> kPairs = {{
      {VariantId::Original, VariantId::Meaningless},
      {VariantId::Original, VariantId::NoComment},
      {VariantId::Meaningless, VariantId::NoComment},
  }};
  std::vector<ComparisonRecord> records;
  for (const std::string& snippet : store.snippets()) {
    std::vector<std::string> prompts = orderPrompts(store.prompts(snippet, VariantId::Original));
    for (const std::string& prompt : prompts) {
      for (auto [a, b] : kPairs) {
        std::string sourceA = mustRead(store, snippet, a, prompt, version);
        std::string sourceB = mustRead(store, snippet, b, prompt, version);
        ComparisonKey key{snippet, variantName(a), variantName(b), version, version, prompt};
        records.push_back(compareSnippets(sourceA, sourceB, key));
      }
    }
  }
  return records;
}

SimilarityMatrix buildSimilarityMatrix(const std::vector<const ComparisonRecord*>& records,
                                       int versions, bool identicalAsOne) {
  std::map<std::pair<int, int>, std::pair<double, int>> sums;  // (i,j) -> (sum, n)
  for (const ComparisonRecord* record : records) {
    std::optional<double> value = record->averageSimilarity;
    if (!value && identicalAsOne && isIdenticalComparison(*record)) value = 1.0;
    if (!value) continue;
    auto& cell = sums[{record->key.versionA, record->key.versionB}];
    cell.first += *value;
    cell.second += 1;
  }
  SimilarityMatrix matrix;
  matrix.versions = versions;
  for (const auto& [pair, sum] : sums) {
    matrix.cells[pair] = {sum.first / sum.second, sum.second};
  }
  return matrix;
}

std::vector<OscillationFlag> detectBackAndForth(
    const std::vector<const ComparisonRecord*>& records, double delta) {
  struct TrajectoryKey {
    std::string snippet;
    std::string variant;
    std::string prompt;
    auto operator<=>(const TrajectoryKey&) const = default;
  };
  std::map<TrajectoryKey, std::map<std::pair<int, int>, std::optional<double>>> byTrajectory;
  std::map<TrajectoryKey, int> maxVersion;
  for (const ComparisonRecord* record : records) {
    if (record->key.variantA != record->key.variantB) continue;  // horizontal only
    TrajectoryKey key{record->key.snippet, record->key.variantA, record->key.prompt};
    byTrajectory[key][{record->key.versionA, record->key.versionB}] =
        trajectorySimilarity(*record);
    maxVersion[key] = std::max(maxVersion[key], record->key.versionB);
  }

  std::vector<OscillationFlag> flags;
  for (const auto& [key, sims] : byTrajectory) {
    int top = maxVersion[key];
    for (int i = 0; i + 2 <= top; ++i) {
      auto outer = sims.find({i, i + 2});
      auto innerA = sims.find({i, i + 1});
      auto innerB = sims.find({i + 1, i + 2});
      if (outer == sims.end() || innerA == sims.end() || innerB == sims.end()) continue;
      if (!outer->second || !innerA->second || !innerB->second) continue;
      double strength = *outer->second - std::max(*innerA->second, *innerB->second);
      if (strength > delta) {
        std::optional<VariantId> variant = variantFromName(key.variant);
        flags.push_back(
            {key.snippet, variant.value_or(VariantId::Original), key.prompt, i, strength});
      }
    }
  }
  std::sort(flags.begin(), flags.end(), [](const OscillationFlag& a, const OscillationFlag& b) {
    auto keyOf = [](const OscillationFlag& f) {
      return std::make_tuple(f.snippet, std::string(variantName(f.variant)), f.prompt,
                             f.tripleStart);
    };
    return keyOf(a) < keyOf(b);
  });
  return flags;
}

std::vector<ConvergenceRow> buildConvergenceSeries(
    const std::vector<const ComparisonRecord*>& records, int versions) {
  std::vector<ConvergenceRow> rows(static_cast<size_t>(std::max(0, versions - 1)));
  for (size_t i = 0; i < rows.size(); ++i) rows[i].transition = static_cast<int>(i);
  for (const ComparisonRecord* record : records) {
    if (record->key.versionB != record->key.versionA + 1) continue;
    int transition = record->key.versionA;
    if (transition < 0 || transition >= static_cast<int>(rows.size())) continue;
    int events = record->lineEvents();
    if (events == 0) continue;
    ConvergenceRow& row = rows[static_cast<size_t>(transition)];
    double denom = events;
    row.unchanged += record->unchangedCount / denom;
    for (size_t t = 0; t < kAllChangeTypes.size(); ++t) {
      row.byType[t] += record->countOf(kAllChangeTypes[t]) / denom;
    }
    row.insertions += record->insertionCount() / denom;
    row.deletions += record->deletionCount() / denom;
    row.contributing += 1;
  }
  for (ConvergenceRow& row : rows) {
    if (row.contributing == 0) continue;
    double n = row.contributing;
    row.unchanged /= n;
    for (double& value : row.byType) value /= n;
    row.insertions /= n;
    row.deletions /= n;
  }
  return rows;
}

namespace {

std::vector<const ComparisonRecord*> asPointers(const std::vector<ComparisonRecord>& records) {
  std::vector<const ComparisonRecord*> pointers;
  pointers.reserve(records.size());
  for (const ComparisonRecord& record : records) pointers.push_back(&record);
  return pointers;
}

}  // namespace

SimilarityMatrix buildSimilarityMatrix(const std::vector<ComparisonRecord>& records,
                                       int versions, bool identicalAsOne) {
  return buildSimilarityMatrix(asPointers(records), versions, identicalAsOne);
}

std::vector<OscillationFlag> detectBackAndForth(const std::vector<ComparisonRecord>& records,
                                                double delta) {
  return detectBackAndForth(asPointers(records), delta);
}

std::vector<ConvergenceRow> buildConvergenceSeries(const std::vector<ComparisonRecord>& records,
                                                   int versions) {
  return buildConvergenceSeries(asPointers(records), versions);
}

SimilarityMatrix similarityMatrix(const SnapshotStore& store, VariantId variant,
                                  const std::string& prompt, int iterations,
                                  bool identicalAsOne) {
  std::vector<ComparisonRecord> all;
  for (const std::string& snippet : store.snippets()) {
    std::vector<ComparisonRecord> records =
        horizontalAnalysis(store, snippet, variant, prompt, iterations);
    all.insert(all.end(), records.begin(), records.end());
  }
  return buildSimilarityMatrix(all, iterations + 1, identicalAsOne);
}

std::vector<ConvergenceRow> convergenceSeries(const SnapshotStore& store, VariantId variant,
                                              const std::string& prompt, int iterations) {
  std::vector<ComparisonRecord> all;
  for (const std::string& snippet : store.snippets()) {
    std::vector<ComparisonRecord> records =
        horizontalAnalysis(store, snippet, variant, prompt, iterations);
    all.insert(all.end(), records.begin(), records.end());
  }
  return buildConvergenceSeries(all, iterations + 1);
}

}  // namespace reftrace
