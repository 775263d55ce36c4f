#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "reftrace/metrics.hpp"

namespace reftrace {

struct CriteriaReport {
  bool locOk = false;
  bool methodsRatioOk = false;
  bool codeCommentsRatioOk = false;
  bool accepted = false;
  std::vector<std::string> reasons;
};

/// Sampling criteria: 50 <= total <= 200; with B = ceil(total/50) the method
/// count must fall in [B, 3B]; code lines must be at least half of all lines.
CriteriaReport checkSamplingCriteria(const AbsoluteMetrics& metrics);

struct ManifestRow {
  std::string path;     // relative to the corpus root, '/' separators
  std::string snippet;  // derived snippet id (unique per manifest)
  AbsoluteMetrics metrics;
  CriteriaReport report;
};

/// Scan a directory tree for candidate .java files (test files excluded),
/// measure and filter them. Rows come back sorted lexicographically by path.
std::vector<ManifestRow> sampleCorpus(const std::filesystem::path& root);

/// Serialize rows in corpus_manifest.csv column order.
std::string manifestToCsv(const std::vector<ManifestRow>& rows);

/// Parse a manifest produced by manifestToCsv.
std::vector<ManifestRow> manifestFromCsv(const std::string& text);

}  // namespace reftrace
