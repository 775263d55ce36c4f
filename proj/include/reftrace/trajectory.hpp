#pragma once

#include <map>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "reftrace/compare.hpp"
#include "reftrace/store.hpp"
#include "reftrace/variants.hpp"

namespace reftrace {

/// Margin a reverting similarity must clear before an oscillation is
/// flagged; suppresses float noise without hiding real A,B,A patterns.
inline constexpr double kOscillationDelta = 0.02;

/// True when the comparison found the two texts line-identical (nothing but
/// unchanged lines).
bool isIdenticalComparison(const ComparisonRecord& record);

/// Similarity of a version pair as the trajectory analyses use it:
/// line-identical texts score 1.0 even though they have no changed pairs;
/// otherwise the mean changed-pair similarity; absent when the texts differ
/// only by insertions/deletions (no pairs to average).
std::optional<double> trajectorySimilarity(const ComparisonRecord& record);

struct SimilarityCell {
  double meanSimilarity = 0.0;
  int contributing = 0;  // snippets whose comparison had a usable similarity
};

/// Upper-triangular mean-similarity matrix over version pairs (i, j), i<j.
/// Cells with no contributing snippets are absent from the map, never 0.
struct SimilarityMatrix {
  int versions = 0;  // K+1
  std::map<std::pair<int, int>, SimilarityCell> cells;
};

struct OscillationFlag {
  std::string snippet;
  VariantId variant = VariantId::Original;
  std::string prompt;
  int tripleStart = 0;     // i of the (i, i+1, i+2) triple
  double strength = 0.0;   // sim(i,i+2) − max(sim(i,i+1), sim(i+1,i+2))
};

struct ConvergenceRow {
  int transition = 0;  // i of the v_i → v_{i+1} transition
  double unchanged = 0.0;
  std::array<double, kAllChangeTypes.size()> byType{};  // kAllChangeTypes order
  double insertions = 0.0;
  double deletions = 0.0;
  int contributing = 0;  // snippets averaged into this row
};

/// All ordered version pairs (i, j), i<j, of one trajectory, compared.
/// Throws DataError naming the missing instance when a version is absent.
std::vector<ComparisonRecord> horizontalAnalysis(const SnapshotStore& store,
                                                 const std::string& snippet, VariantId variant,
                                                 const std::string& prompt, int iterations);

/// The three variant pairs at one version, for every snippet and prompt in
/// the store. Throws DataError when a variant snapshot is missing.
std::vector<ComparisonRecord> verticalAnalysis(const SnapshotStore& store, int version);

/// Aggregate horizontal records (any number of snippets, one variant/prompt
/// slice) into the heatmap matrix. With identicalAsOne, line-identical
/// comparisons contribute 1.0 instead of being excluded. The pointer form is
/// the primary one so large record sets need not be copied per slice.
SimilarityMatrix buildSimilarityMatrix(const std::vector<const ComparisonRecord*>& records,
                                       int versions, bool identicalAsOne = false);
SimilarityMatrix buildSimilarityMatrix(const std::vector<ComparisonRecord>& records,
                                       int versions, bool identicalAsOne = false);

/// Flag every version triple whose outer similarity beats both inner ones by
/// more than delta. Records may span snippets; flags come back sorted by
/// (snippet, variant, prompt, tripleStart). Triples with an undefined
/// similarity are skipped.
std::vector<OscillationFlag> detectBackAndForth(
    const std::vector<const ComparisonRecord*>& records, double delta = kOscillationDelta);
std::vector<OscillationFlag> detectBackAndForth(const std::vector<ComparisonRecord>& records,
                                                double delta = kOscillationDelta);

/// Mean per-transition line-event proportions over consecutive pairs in the
/// records. Every row's proportions sum to 1.
std::vector<ConvergenceRow> buildConvergenceSeries(
    const std::vector<const ComparisonRecord*>& records, int versions);
std::vector<ConvergenceRow> buildConvergenceSeries(const std::vector<ComparisonRecord>& records,
                                                   int versions);

/// Store-driven conveniences over the builders above.
SimilarityMatrix similarityMatrix(const SnapshotStore& store, VariantId variant,
                                  const std::string& prompt, int iterations,
                                  bool identicalAsOne = false);
std::vector<ConvergenceRow> convergenceSeries(const SnapshotStore& store, VariantId variant,
                                              const std::string& prompt, int iterations);

/// Prompt ids ordered General, Meaning, Comments first, then any others
/// lexicographically.
std::vector<std::string> orderPrompts(std::vector<std::string> prompts);

}  // namespace reftrace
