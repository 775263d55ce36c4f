#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "reftrace/store.hpp"
#include "reftrace/trajectory.hpp"

namespace reftrace {

struct AnalyzeOptions {
  int jobs = 4;
  double oscillationDelta = kOscillationDelta;
  /// Heatmap toggle: count line-identical comparisons as similarity 1.0
  /// instead of excluding them from cell means.
  bool heatmapIdenticalAsOne = false;
};

struct AnalyzeSummary {
  int snippets = 0;
  int iterations = 0;            // highest complete K found in the store
  int completeTrajectories = 0;
  int skippedTrajectories = 0;
  long long comparisons = 0;     // rows in comparisons.csv
  long long changeEvents = 0;    // rows in changes.jsonl
  long long oscillations = 0;
  std::vector<std::string> warnings;  // human-readable skip notices
  std::string summaryJson;       // headline numbers document (report command)
};

/// Run every comparison strategy over the store and write the CSV/JSONL
/// artifacts into outputDir:
///   comparisons.csv, changes.jsonl, heatmap_<variant>_<prompt>.csv,
///   convergence_<variant>_<prompt>.csv, vertical_similarity.csv,
///   oscillations.csv, stats_report.csv
/// Only complete trajectories (contiguous v0..vK for the store-wide K)
/// participate; incomplete ones are skipped and reported in warnings.
/// Throws DataError when the store holds no snippets at all.
AnalyzeSummary analyzeStore(const SnapshotStore& store,
                            const std::filesystem::path& outputDir,
                            const AnalyzeOptions& options);

}  // namespace reftrace
