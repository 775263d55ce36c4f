#include <CLI11.hpp>
#include <cstdlib>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <json.hpp>
#include <memory>
#include <sstream>

#include "reftrace/analysis.hpp"
#include "reftrace/corpus.hpp"
#include "reftrace/errors.hpp"
#include "reftrace/pipeline.hpp"
#include "reftrace/provider.hpp"
#include "reftrace/store.hpp"
#include "reftrace/variants.hpp"

namespace fs = std::filesystem;
using namespace reftrace;

namespace {

std::string readFileOrThrow(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

void writeFileOrThrow(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out << content;
  if (!out) throw DataError("short write to " + path.string());
}

int runSample(const fs::path& corpusDir, const fs::path& outDir) {
  if (!fs::is_directory(corpusDir)) {
    throw DataError("corpus directory not found: " + corpusDir.string());
  }
  std::vector<ManifestRow> rows = sampleCorpus(corpusDir);
  if (rows.empty()) {
    throw DataError("no candidate .java files found under " + corpusDir.string());
  }
  fs::create_directories(outDir);
  writeFileOrThrow(outDir / "corpus_manifest.csv", manifestToCsv(rows));
  size_t accepted = 0;
  for (const ManifestRow& row : rows) accepted += row.report.accepted ? 1 : 0;
  std::cout << "sample: " << accepted << " of " << rows.size() << " candidate files accepted -> "
            << (outDir / "corpus_manifest.csv").string() << "\n";
  if (accepted == 0) {
    std::cerr << "error: no files satisfied the sampling criteria\n";
    return 2;
  }
  return 0;
}

int runVariants(const fs::path& manifestPath, const fs::path& corpusDir,
                const fs::path& storeDir) {
  std::vector<ManifestRow> rows = manifestFromCsv(readFileOrThrow(manifestPath));
  SnapshotStore store(storeDir);
  size_t made = 0;
  std::vector<std::string> failures;
  for (const ManifestRow& row : rows) {
    if (!row.report.accepted) continue;
    std::string source = readFileOrThrow(corpusDir / row.path);
    try {
      MeaninglessResult meaningless = makeMeaningless(source);
      std::string noComment = stripComments(source);
      for (const PromptSpec& prompt : promptCatalog()) {
        store.write(row.snippet, VariantId::Original, prompt.id, 0, source);
        store.write(row.snippet, VariantId::Meaningless, prompt.id, 0, meaningless.source);
        store.write(row.snippet, VariantId::NoComment, prompt.id, 0, noComment);
      }
      store.writeRenameTable(row.snippet, meaningless.table);
      ++made;
    } catch (const RenameCollisionError& e) {
      failures.push_back(row.snippet + ": " + e.what());
    }
  }
  if (made == 0 && failures.empty()) {
    throw DataError("manifest has no accepted rows: " + manifestPath.string());
  }
  std::cout << "variants: wrote v0 snapshots for " << made << " snippet(s) under "
            << storeDir.string() << "\n";
  for (const std::string& failure : failures) std::cerr << "failed: " << failure << "\n";
  return failures.empty() ? 0 : 2;
}

struct RunFlags {
  std::string manifest;
  std::string storeDir;
  int iterations = 5;
  std::vector<std::string> prompts;
  std::string provider = "replay";
  std::string model = "gpt-4o";
  double temperature = 0.0;
  std::string endpoint;
  std::string script;
  std::string record;
  int maxRetries = 3;
  int timeout = 120;
  int jobs = 4;
};

int runPipelineCommand(const RunFlags& flags) {
  std::vector<ManifestRow> rows = manifestFromCsv(readFileOrThrow(flags.manifest));
  std::vector<std::string> snippets;
  for (const ManifestRow& row : rows) {
    if (row.report.accepted) snippets.push_back(row.snippet);
  }
  if (snippets.empty()) {
    throw DataError("manifest has no accepted rows: " + flags.manifest);
  }

  std::unique_ptr<Provider> base;
  if (flags.provider == "replay") {
    if (flags.script.empty()) throw UsageError("replay provider needs --script");
    base = std::make_unique<ReplayProvider>(flags.script);
  } else if (flags.provider == "live-http") {
    if (flags.endpoint.empty()) throw UsageError("live-http provider needs --endpoint");
    LiveProviderConfig config;
    config.endpoint = flags.endpoint;
    config.model = flags.model;
    config.temperature = flags.temperature;
    config.timeoutSeconds = flags.timeout;
    if (const char* key = std::getenv("REFTRACE_API_KEY")) config.apiKey = key;
    if (config.apiKey.empty()) {
      std::cerr << "warning: REFTRACE_API_KEY is not set; sending unauthenticated requests\n";
    }
    base = std::make_unique<LiveHttpProvider>(config);
  } else {
    throw UsageError("unknown provider kind: " + flags.provider +
                     " (expected replay or live-http)");
  }

  std::unique_ptr<RecordingProvider> recorder;
  Provider* provider = base.get();
  if (!flags.record.empty()) {
    recorder = std::make_unique<RecordingProvider>(*base, flags.record);
    provider = recorder.get();
  }

  SnapshotStore store(flags.storeDir);
  PipelineOptions options;
  options.iterations = flags.iterations;
  options.prompts = flags.prompts;
  options.jobs = flags.jobs;
  options.maxAttempts = flags.maxRetries;
  PipelineSummary summary = runPipeline(store, snippets, *provider, options);

  nlohmann::json meta;
  meta["provider"] = {{"kind", base->kind()},
                      {"model", flags.model},
                      {"temperature", flags.temperature}};
  if (!flags.endpoint.empty()) meta["provider"]["endpoint"] = flags.endpoint;
  meta["iterations"] = flags.iterations;
  meta["prompts"] = flags.prompts.empty()
                        ? [] {
                            std::vector<std::string> all;
                            for (const PromptSpec& p : promptCatalog()) all.push_back(p.id);
                            return all;
                          }()
                        : flags.prompts;
  meta["request_includes_filename"] = false;
  if (summary.tokenTotalsComplete && (summary.promptTokens > 0 || summary.completionTokens > 0)) {
    meta["token_usage"] = {{"prompt_tokens", summary.promptTokens},
                           {"completion_tokens", summary.completionTokens}};
  }
  if (flags.provider == "live-http") {
    meta["completed_at_utc"] = [] {
      std::time_t now = std::time(nullptr);
      char buffer[32];
      std::strftime(buffer, sizeof(buffer), "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
      return std::string(buffer);
    }();
  }
  store.writeMeta(meta.dump(2) + "\n");
  if (recorder) recorder->flush();

  std::cout << "run: " << summary.written << " snapshot(s) written, " << summary.skipped
            << " already present, " << summary.requests << " provider request(s), "
            << summary.failures.size() << " failure(s)\n";
  if (summary.failures.empty()) return 0;
  bool providerSide = false;
  for (const IterationFailure& failure : summary.failures) {
    std::cerr << "failed: " << failure.snippet << "/" << variantName(failure.variant) << "/"
              << failure.prompt << "/v" << failure.version << ": " << failure.error << "\n";
    if (failure.error.rfind("missing v0", 0) != 0) providerSide = true;
  }
  return providerSide ? 3 : 2;
}

int runAnalyze(const fs::path& storeDir, const fs::path& outDir, int jobs, double delta,
               bool identicalAsOne, bool withSummary) {
  SnapshotStore store(storeDir);
  AnalyzeOptions options;
  options.jobs = jobs;
  options.oscillationDelta = delta;
  options.heatmapIdenticalAsOne = identicalAsOne;
  AnalyzeSummary summary = analyzeStore(store, outDir, options);
  for (const std::string& warning : summary.warnings) std::cerr << "warning: " << warning << "\n";
  if (withSummary) writeFileOrThrow(outDir / "summary.json", summary.summaryJson);
  std::cout << (withSummary ? "report: " : "analyze: ") << summary.comparisons
            << " comparison(s) over " << summary.completeTrajectories << " trajectorie(s), K="
            << summary.iterations << ", " << summary.changeEvents << " change event(s), "
            << summary.oscillations << " oscillation flag(s) -> " << outDir.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Measure iterative LLM refactoring behavior over a Java snippet corpus"};
  app.require_subcommand(1);

  // sample
  auto* sample = app.add_subcommand("sample", "Scan a corpus and write corpus_manifest.csv");
  std::string sampleCorpusDir;
  std::string sampleOut = "out";
  sample->add_option("--corpus", sampleCorpusDir, "Corpus root directory")->required();
  sample->add_option("--out", sampleOut, "Output directory");
  sample->set_config("--config");

  // variants
  auto* variants = app.add_subcommand("variants", "Write v0 variant snapshots into the store");
  std::string variantsManifest;
  std::string variantsCorpus;
  std::string variantsStore;
  variants->add_option("--manifest", variantsManifest, "corpus_manifest.csv path")->required();
  variants->add_option("--corpus", variantsCorpus, "Corpus root directory")->required();
  variants->add_option("--store", variantsStore, "Snapshot store root")->required();
  variants->set_config("--config");

  // run
  auto* run = app.add_subcommand("run", "Drive the iterative refactoring pipeline");
  RunFlags flags;
  run->add_option("--manifest", flags.manifest, "corpus_manifest.csv path")->required();
  run->add_option("--store", flags.storeDir, "Snapshot store root")->required();
  run->add_option("--iterations", flags.iterations, "Refactoring iterations per trajectory")
      ->check(CLI::PositiveNumber);
  run->add_option("--prompts", flags.prompts, "Prompt ids (default: all three)")
      ->delimiter(',');
  run->add_option("--provider", flags.provider, "Provider kind: replay | live-http");
  run->add_option("--model", flags.model, "Model name (live provider)");
  run->add_option("--temperature", flags.temperature, "Sampling temperature");
  run->add_option("--endpoint", flags.endpoint, "Chat-completions URL (live provider)");
  run->add_option("--script", flags.script, "Replay script path (replay provider)");
  run->add_option("--record", flags.record, "Record responses to a replay script");
  run->add_option("--max-retries", flags.maxRetries, "Attempts per request")
      ->check(CLI::PositiveNumber);
  run->add_option("--timeout", flags.timeout, "Request timeout in seconds")
      ->check(CLI::PositiveNumber);
  run->add_option("--jobs", flags.jobs, "Concurrent trajectories")->check(CLI::PositiveNumber);
  run->set_config("--config");

  // analyze / report
  std::string analyzeStoreDir, analyzeOut = "out";
  int analyzeJobs = 4;
  double analyzeDelta = kOscillationDelta;
  bool analyzeIdenticalAsOne = false;
  auto addAnalyzeFlags = [&](CLI::App* cmd) {
    cmd->add_option("--store", analyzeStoreDir, "Snapshot store root")->required();
    cmd->add_option("--out", analyzeOut, "Output directory");
    cmd->add_option("--jobs", analyzeJobs, "Concurrent comparison tasks")
        ->check(CLI::PositiveNumber);
    cmd->add_option("--oscillation-delta", analyzeDelta, "Back-and-forth strength margin");
    cmd->add_flag("--heatmap-identical-as-one", analyzeIdenticalAsOne,
                  "Count line-identical comparisons as similarity 1.0 in heatmaps");
    cmd->set_config("--config");
  };
  auto* analyze = app.add_subcommand("analyze", "Emit comparison CSV/JSONL artifacts");
  addAnalyzeFlags(analyze);
  auto* report =
      app.add_subcommand("report", "Analyze and additionally write summary.json");
  addAnalyzeFlags(report);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;  // usage errors are exit 1; help is success
  }

  try {
    if (*sample) return runSample(sampleCorpusDir, sampleOut);
    if (*variants) return runVariants(variantsManifest, variantsCorpus, variantsStore);
    if (*run) return runPipelineCommand(flags);
    if (*analyze) {
      return runAnalyze(analyzeStoreDir, analyzeOut, analyzeJobs, analyzeDelta,
                        analyzeIdenticalAsOne, false);
    }
    if (*report) {
      return runAnalyze(analyzeStoreDir, analyzeOut, analyzeJobs, analyzeDelta,
                        analyzeIdenticalAsOne, true);
    }
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ProviderError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 3;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
