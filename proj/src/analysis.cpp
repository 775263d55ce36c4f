#include "reftrace/analysis.hpp"

#include <algorithm>
#include <atomic>
#include <exception>
#include <fstream>
#include <functional>
#include <json.hpp>
#include <map>
#include <optional>
#include <set>
#include <thread>
#include <tuple>
#include <utility>

#include "reftrace/csv.hpp"
#include "reftrace/errors.hpp"
#include "reftrace/pipeline.hpp"
#include "reftrace/stats.hpp"

namespace reftrace {
namespace {

namespace fs = std::filesystem;

struct TrajectoryRef {
  std::string snippet;
  VariantId variant = VariantId::Original;
  std::string prompt;
};

struct StoreShape {
  std::vector<std::string> snippets;
  std::vector<std::string> prompts;  // orderPrompts order
  int iterations = 0;                // store-wide K
  std::vector<TrajectoryRef> complete;
  std::vector<std::pair<std::string, std::string>> verticalReady;  // (snippet, prompt)
  std::vector<std::string> warnings;
  int skipped = 0;
};

StoreShape discover(const SnapshotStore& store) {
  StoreShape shape;
  shape.snippets = store.snippets();
  if (shape.snippets.empty()) {
    throw DataError("snapshot store is empty: " + store.root().string());
  }

  struct Entry {
    TrajectoryRef ref;
    int maxVersion;
  };
  std::vector<Entry> entries;
  std::set<std::string> promptSet;
  for (const std::string& snippet : shape.snippets) {
    for (VariantId variant : kAllVariants) {
      for (const std::string& prompt : store.prompts(snippet, variant)) {
        promptSet.insert(prompt);
        int maxVersion = store.maxContiguousVersion(snippet, variant, prompt);
        if (maxVersion >= 0) entries.push_back({{snippet, variant, prompt}, maxVersion});
      }
    }
  }
  if (entries.empty()) {
    throw DataError("snapshot store has no v0 snapshots: " + store.root().string());
  }
  shape.prompts = orderPrompts({promptSet.begin(), promptSet.end()});

  for (const Entry& entry : entries) {
    shape.iterations = std::max(shape.iterations, entry.maxVersion);
  }
  std::set<std::tuple<std::string, int, std::string>> completeKeys;
  for (const Entry& entry : entries) {
    if (entry.maxVersion == shape.iterations) {
      shape.complete.push_back(entry.ref);
      completeKeys.insert(
          {entry.ref.snippet, static_cast<int>(entry.ref.variant), entry.ref.prompt});
    } else {
      ++shape.skipped;
      shape.warnings.push_back(
          "skipping incomplete trajectory " + entry.ref.snippet + "/" +
          variantName(entry.ref.variant) + "/" + entry.ref.prompt + " (has v0..v" +
          std::to_string(entry.maxVersion) + ", store-wide K=" +
          std::to_string(shape.iterations) + ")");
    }
  }

  for (const std::string& snippet : shape.snippets) {
    for (const std::string& prompt : shape.prompts) {
      bool allVariants = true;
      for (VariantId variant : kAllVariants) {
        if (!completeKeys.count({snippet, static_cast<int>(variant), prompt})) {
          allVariants = false;
          break;
        }
      }
      if (allVariants) shape.verticalReady.push_back({snippet, prompt});
    }
  }
  return shape;
}

std::vector<ComparisonRecord> verticalTrajectory(const SnapshotStore& store,
                                                 const std::string& snippet,
                                                 const std::string& prompt, int iterations) {
  static constexpr std::array<std::pair<VariantId, VariantId>, 3> kPairs = {{
      {VariantId::Original, VariantId::Meaningless},
      {VariantId::Original, VariantId::NoComment},
      {VariantId::Meaningless, VariantId::NoComment},
  }};
  std::vector<ComparisonRecord> records;
  records.reserve(3 * static_cast<size_t>(iterations + 1));
  std::array<std::vector<std::string>, 3> sources;
  for (VariantId variant : kAllVariants) {
    auto& column = sources[static_cast<size_t>(variant)];
    for (int version = 0; version <= iterations; ++version) {
      column.push_back(store.read(snippet, variant, prompt, version));
    }
  }
  for (int version = 0; version <= iterations; ++version) {
    for (auto [a, b] : kPairs) {
      ComparisonKey key{snippet, variantName(a), variantName(b), version, version, prompt};
      records.push_back(compareSnippets(sources[static_cast<size_t>(a)][version],
                                        sources[static_cast<size_t>(b)][version], key));
    }
  }
  return records;
}

/// Run one closure per task index on a bounded pool, propagating the first
/// exception after all workers join.
void runTasks(size_t taskCount, int jobs, const std::function<void(size_t)>& work) {
  if (taskCount == 0) return;
  int workers = std::max(1, std::min<int>(jobs, static_cast<int>(taskCount)));
  std::atomic<size_t> next{0};
  std::vector<std::exception_ptr> errors(static_cast<size_t>(workers));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&, w] {
      try {
        for (size_t index = next.fetch_add(1); index < taskCount; index = next.fetch_add(1)) {
          work(index);
        }
      } catch (...) {
        errors[static_cast<size_t>(w)] = std::current_exception();
        next.store(taskCount);  // drain remaining work
      }
    });
  }
  for (std::thread& worker : pool) worker.join();
  for (const std::exception_ptr& error : errors) {
    if (error) std::rethrow_exception(error);
  }
}

void writeTextFile(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(content.data(), static_cast<std::streamsize>(content.size()));
  out.flush();
  if (!out) throw DataError("short write to " + path.string());
}

std::string comparisonsCsv(const std::vector<const ComparisonRecord*>& records) {
  std::vector<std::string> header = {"snippet",  "variantA", "variantB",
                                     "versionA", "versionB", "prompt",
                                     "unchanged"};
  for (ChangeType type : kAllChangeTypes) header.push_back(changeTypeName(type));
  for (const char* column : {"ins_code", "ins_comment", "ins_blank", "del_code", "del_comment",
                             "del_blank", "avg_sim", "d_total", "d_code", "d_comment", "d_inline",
                             "d_empty", "d_methods"}) {
    header.push_back(column);
  }
  std::string out = csvRow(header) + "\n";
  for (const ComparisonRecord* record : records) {
    std::vector<std::string> row = {
        record->key.snippet,
        record->key.variantA,
        record->key.variantB,
        std::to_string(record->key.versionA),
        std::to_string(record->key.versionB),
        record->key.prompt,
        std::to_string(record->unchangedCount),
    };
    for (ChangeType type : kAllChangeTypes) row.push_back(std::to_string(record->countOf(type)));
    for (int kind = 0; kind < 3; ++kind) {
      row.push_back(std::to_string(record->insertionsByKind[static_cast<size_t>(kind)]));
    }
    for (int kind = 0; kind < 3; ++kind) {
      row.push_back(std::to_string(record->deletionsByKind[static_cast<size_t>(kind)]));
    }
    row.push_back(record->averageSimilarity ? formatFixed(*record->averageSimilarity)
                                            : std::string());
    const AbsoluteMetrics& d = record->deltas;
    for (int value : {d.total, d.code, d.comment, d.inlineComments, d.empty, d.methods}) {
      row.push_back(std::to_string(value));
    }
    out += csvRow(row) + "\n";
  }
  return out;
}

std::string changesJsonl(const std::vector<const ComparisonRecord*>& records) {
  std::string out;
  for (const ComparisonRecord* record : records) {
    for (const ChangeRecord& change : record->changes) {
      nlohmann::json entry;
      entry["snippet"] = record->key.snippet;
      entry["variantA"] = record->key.variantA;
      entry["variantB"] = record->key.variantB;
      entry["versionA"] = record->key.versionA;
      entry["versionB"] = record->key.versionB;
      entry["prompt"] = record->key.prompt;
      entry["oldLine"] = change.oldLine;
      entry["newLine"] = change.newLine;
      entry["oldText"] = change.oldText;
      entry["newText"] = change.newText;
      entry["type"] = changeTypeName(change.type);
      entry["similarity"] = change.similarity;
      nlohmann::json categories = nlohmann::json::array();
      for (NodeCategory category : change.nodeCategories) {
        categories.push_back(nodeCategoryName(category));
      }
      entry["nodeCategories"] = std::move(categories);
      nlohmann::json renames = nlohmann::json::array();
      for (const auto& [oldName, newName] : change.renameEntries) {
        renames.push_back(nlohmann::json::array({oldName, newName}));
      }
      entry["renames"] = std::move(renames);
      entry["diagnostics"] = change.diagnostics;
      out += entry.dump();
      out += "\n";
    }
  }
  return out;
}

std::string heatmapCsv(const SimilarityMatrix& matrix) {
  std::string out = csvRow({"i", "j", "mean_sim", "n_contributing"}) + "\n";
  for (int i = 0; i + 1 < matrix.versions; ++i) {
    for (int j = i + 1; j < matrix.versions; ++j) {
      auto it = matrix.cells.find({i, j});
      std::string mean = it == matrix.cells.end() ? std::string()
                                                  : formatFixed(it->second.meanSimilarity);
      int n = it == matrix.cells.end() ? 0 : it->second.contributing;
      out += csvRow({std::to_string(i), std::to_string(j), mean, std::to_string(n)}) + "\n";
    }
  }
  return out;
}

std::string convergenceCsv(const std::vector<ConvergenceRow>& rows) {
  std::vector<std::string> header = {"transition", "unchanged"};
  for (ChangeType type : kAllChangeTypes) header.push_back(changeTypeName(type));
  header.push_back("ins");
  header.push_back("del");
  std::string out = csvRow(header) + "\n";
  for (const ConvergenceRow& row : rows) {
    std::vector<std::string> fields = {
        "v" + std::to_string(row.transition) + "->v" + std::to_string(row.transition + 1)};
    if (row.contributing == 0) {
      fields.resize(header.size());  // no contributors: leave the values empty
    } else {
      fields.push_back(formatFixed(row.unchanged));
      for (double value : row.byType) fields.push_back(formatFixed(value));
      fields.push_back(formatFixed(row.insertions));
      fields.push_back(formatFixed(row.deletions));
    }
    out += csvRow(fields) + "\n";
  }
  return out;
}

std::string oscillationsCsv(const std::vector<OscillationFlag>& flags) {
  std::string out = csvRow({"snippet", "variant", "prompt", "i", "strength"}) + "\n";
  for (const OscillationFlag& flag : flags) {
    out += csvRow({flag.snippet, variantName(flag.variant), flag.prompt,
                   std::to_string(flag.tripleStart), formatFixed(flag.strength)}) +
           "\n";
  }
  return out;
}

struct VerticalCell {
  double changedSum = 0.0;
  int changedCount = 0;
  double inclSum = 0.0;
  int inclCount = 0;
};

std::string verticalSimilarityCsv(const std::vector<const ComparisonRecord*>& vertical,
                                  const StoreShape& shape) {
  // (variantA, variantB, prompt, version) -> aggregate over snippets
  std::map<std::tuple<std::string, std::string, std::string, int>, VerticalCell> cells;
  for (const ComparisonRecord* record : vertical) {
    auto& cell = cells[{record->key.variantA, record->key.variantB, record->key.prompt,
                        record->key.versionA}];
    if (record->averageSimilarity) {
      cell.changedSum += *record->averageSimilarity;
      cell.changedCount += 1;
      cell.inclSum += *record->averageSimilarity;
      cell.inclCount += 1;
    } else if (isIdenticalComparison(*record)) {
      cell.inclSum += 1.0;
      cell.inclCount += 1;
    }
  }
  static constexpr std::array<std::pair<VariantId, VariantId>, 3> kPairs = {{
      {VariantId::Original, VariantId::Meaningless},
      {VariantId::Original, VariantId::NoComment},
      {VariantId::Meaningless, VariantId::NoComment},
  }};
  std::string out = csvRow({"variantA", "variantB", "prompt", "version", "mean_sim",
                            "n_contributing", "mean_sim_incl_identical", "n_incl_identical"}) +
                    "\n";
  for (auto [a, b] : kPairs) {
    for (const std::string& prompt : shape.prompts) {
      for (int version = 0; version <= shape.iterations; ++version) {
        auto it = cells.find({variantName(a), variantName(b), prompt, version});
        const VerticalCell cell = it == cells.end() ? VerticalCell{} : it->second;
        std::string changed = cell.changedCount == 0
                                  ? std::string()
                                  : formatFixed(cell.changedSum / cell.changedCount);
        std::string incl = cell.inclCount == 0 ? std::string()
                                               : formatFixed(cell.inclSum / cell.inclCount);
        out += csvRow({variantName(a), variantName(b), prompt, std::to_string(version), changed,
                       std::to_string(cell.changedCount), incl,
                       std::to_string(cell.inclCount)}) +
               "\n";
      }
    }
  }
  return out;
}

std::string statsReportCsv(const std::vector<const ComparisonRecord*>& horizontal,
                           const StoreShape& shape) {
  // Samples: one observation per consecutive transition of one trajectory —
  // the proportion of that trajectory's line events carrying the change type.
  // grouped[variant][type][prompt] -> values
  std::map<std::string, std::map<ChangeType, std::map<std::string, std::vector<double>>>>
      grouped;
  for (const ComparisonRecord* record : horizontal) {
    if (record->key.versionB != record->key.versionA + 1) continue;
    int events = record->lineEvents();
    if (events == 0) continue;
    for (ChangeType type : kAllChangeTypes) {
      grouped[record->key.variantA][type][record->key.prompt].push_back(
          record->countOf(type) / static_cast<double>(events));
    }
  }

  std::string out =
      csvRow({"change_type", "variant", "comparison", "statistic", "p", "method"}) + "\n";
  for (VariantId variant : kAllVariants) {
    auto variantIt = grouped.find(variantName(variant));
    if (variantIt == grouped.end()) continue;
    for (ChangeType type : kAllChangeTypes) {
      const auto& byPrompt = variantIt->second[type];
      std::vector<std::string> prompts;
      for (const std::string& prompt : shape.prompts) {
        auto it = byPrompt.find(prompt);
        if (it != byPrompt.end() && !it->second.empty()) prompts.push_back(prompt);
      }
      if (prompts.size() >= 2) {
        GroupedSamples samples;
        std::string label;
        for (const std::string& prompt : prompts) {
          samples.groups[prompt] = byPrompt.at(prompt);
          if (!label.empty()) label += " vs ";
          label += prompt;
        }
        TestResult kw = kruskalWallis(samples);
        out += csvRow({changeTypeName(type), variantName(variant), label,
                       formatCompact(kw.statistic), formatCompact(kw.pValue), kw.method}) +
               "\n";
        for (size_t a = 0; a < prompts.size(); ++a) {
          for (size_t b = a + 1; b < prompts.size(); ++b) {
            TestResult mw = mannWhitneyU(byPrompt.at(prompts[a]), byPrompt.at(prompts[b]));
            out += csvRow({changeTypeName(type), variantName(variant),
                           prompts[a] + " vs " + prompts[b], formatCompact(mw.statistic),
                           formatCompact(mw.pValue), mw.method}) +
                   "\n";
          }
        }
      }
    }
  }
  return out;
}

std::string summaryJson(const StoreShape& shape,
                        const std::vector<const ComparisonRecord*>& all,
                        const std::vector<const ComparisonRecord*>& horizontal,
                        long long changeEvents, long long oscillations,
                        const std::map<std::pair<VariantId, std::string>, SimilarityMatrix>&
                            matrices,
                        const std::map<std::pair<VariantId, std::string>,
                                       std::vector<ConvergenceRow>>& convergences) {
  nlohmann::json doc;
  doc["snippets"] = shape.snippets.size();
  doc["prompts"] = shape.prompts;
  doc["iterations"] = shape.iterations;
  doc["complete_trajectories"] = shape.complete.size();
  doc["skipped_trajectories"] = shape.skipped;
  doc["comparisons"] = all.size();
  doc["change_events"] = changeEvents;
  doc["oscillations"] = oscillations;

  nlohmann::json byType = nlohmann::json::object();
  for (ChangeType type : kAllChangeTypes) {
    long long count = 0;
    for (const ComparisonRecord* record : horizontal) count += record->countOf(type);
    byType[changeTypeName(type)] = count;
  }
  doc["change_events_by_type_horizontal"] = std::move(byType);

  nlohmann::json unchanged = nlohmann::json::object();
  for (const auto& [key, rows] : convergences) {
    nlohmann::json series = nlohmann::json::array();
    for (const ConvergenceRow& row : rows) {
      if (row.contributing == 0) {
        series.push_back(nullptr);
      } else {
        series.push_back(row.unchanged);
      }
    }
    unchanged[variantName(key.first)][key.second] = std::move(series);
  }
  doc["unchanged_proportion_by_transition"] = std::move(unchanged);

  nlohmann::json adjacent = nlohmann::json::object();
  for (const auto& [key, matrix] : matrices) {
    nlohmann::json series = nlohmann::json::array();
    for (int i = 0; i + 1 < matrix.versions; ++i) {
      auto it = matrix.cells.find({i, i + 1});
      if (it == matrix.cells.end()) {
        series.push_back(nullptr);
      } else {
        series.push_back(it->second.meanSimilarity);
      }
    }
    adjacent[variantName(key.first)][key.second] = std::move(series);
  }
  doc["mean_adjacent_similarity"] = std::move(adjacent);

  return doc.dump(2) + "\n";
}

}  // namespace

AnalyzeSummary analyzeStore(const SnapshotStore& store, const fs::path& outputDir,
                            const AnalyzeOptions& options) {
  StoreShape shape = discover(store);
  fs::create_directories(outputDir);

  size_t horizontalTasks = shape.complete.size();
  size_t verticalTasks = shape.verticalReady.size();
  std::vector<std::vector<ComparisonRecord>> results(horizontalTasks + verticalTasks);
  runTasks(results.size(), options.jobs, [&](size_t index) {
    if (index < horizontalTasks) {
      const TrajectoryRef& ref = shape.complete[index];
      results[index] =
          horizontalAnalysis(store, ref.snippet, ref.variant, ref.prompt, shape.iterations);
    } else {
      const auto& [snippet, prompt] = shape.verticalReady[index - horizontalTasks];
      results[index] = verticalTrajectory(store, snippet, prompt, shape.iterations);
    }
  });

  std::vector<const ComparisonRecord*> all;
  for (const auto& bundle : results) {
    for (const ComparisonRecord& record : bundle) all.push_back(&record);
  }
  std::sort(all.begin(), all.end(),
            [](const ComparisonRecord* a, const ComparisonRecord* b) { return a->key < b->key; });

  std::vector<const ComparisonRecord*> horizontal;
  std::vector<const ComparisonRecord*> vertical;
  for (const ComparisonRecord* record : all) {
    (record->key.variantA == record->key.variantB ? horizontal : vertical).push_back(record);
  }

  // Per-slice aggregates over the horizontal records.
  std::map<std::pair<VariantId, std::string>, std::vector<const ComparisonRecord*>> slices;
  for (const ComparisonRecord* record : horizontal) {
    auto variant = variantFromName(record->key.variantA);
    if (!variant) continue;
    slices[{*variant, record->key.prompt}].push_back(record);
  }
  std::map<std::pair<VariantId, std::string>, SimilarityMatrix> matrices;
  std::map<std::pair<VariantId, std::string>, std::vector<ConvergenceRow>> convergences;
  for (VariantId variant : kAllVariants) {
    for (const std::string& prompt : shape.prompts) {
      const std::vector<const ComparisonRecord*>& records = slices[{variant, prompt}];
      matrices[{variant, prompt}] =
          buildSimilarityMatrix(records, shape.iterations + 1, options.heatmapIdenticalAsOne);
      convergences[{variant, prompt}] = buildConvergenceSeries(records, shape.iterations + 1);
    }
  }

  std::vector<OscillationFlag> flags = detectBackAndForth(horizontal, options.oscillationDelta);

  long long changeEvents = 0;
  for (const ComparisonRecord* record : all) changeEvents += record->pairCount();

  writeTextFile(outputDir / "comparisons.csv", comparisonsCsv(all));
  writeTextFile(outputDir / "changes.jsonl", changesJsonl(all));
  for (VariantId variant : kAllVariants) {
    for (const std::string& prompt : shape.prompts) {
      std::string suffix = std::string(variantName(variant)) + "_" + prompt + ".csv";
      writeTextFile(outputDir / ("heatmap_" + suffix), heatmapCsv(matrices[{variant, prompt}]));
      writeTextFile(outputDir / ("convergence_" + suffix),
                    convergenceCsv(convergences[{variant, prompt}]));
    }
  }
  writeTextFile(outputDir / "vertical_similarity.csv", verticalSimilarityCsv(vertical, shape));
  writeTextFile(outputDir / "oscillations.csv", oscillationsCsv(flags));
  writeTextFile(outputDir / "stats_report.csv", statsReportCsv(horizontal, shape));

  AnalyzeSummary summary;
  summary.snippets = static_cast<int>(shape.snippets.size());
  summary.iterations = shape.iterations;
  summary.completeTrajectories = static_cast<int>(shape.complete.size());
  summary.skippedTrajectories = shape.skipped;
  summary.comparisons = static_cast<long long>(all.size());
  summary.changeEvents = changeEvents;
  summary.oscillations = static_cast<long long>(flags.size());
  summary.warnings = shape.warnings;
  summary.summaryJson =
      summaryJson(shape, all, horizontal, changeEvents, summary.oscillations, matrices,
                  convergences);
  return summary;
}

}  // namespace reftrace
