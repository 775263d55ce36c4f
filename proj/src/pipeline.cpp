#include "reftrace/pipeline.hpp"

#include <algorithm>
#include <atomic>
#include <thread>

#include "reftrace/errors.hpp"
#include "reftrace/lex.hpp"

namespace reftrace {

const std::vector<PromptSpec>& promptCatalog() {
  static const std::vector<PromptSpec> catalog = {
      {"General", "Refactor this code for improved readability."},
      {"Meaning",
       "Refactor this code for improved readability, especially with respect to identifier "
       "naming."},
      {"Comments",
       "Refactor this code for improved readability, especially with respect to comments."},
  };
  return catalog;
}

const PromptSpec* findPrompt(std::string_view id) {
  for (const PromptSpec& spec : promptCatalog()) {
    if (spec.id == id) return &spec;
  }
  return nullptr;
}

std::string buildRequestContent(const std::string& promptText, const std::string& source) {
  return promptText + "\n\n" + source;
}

namespace {

std::string_view trimView(std::string_view text) {
  size_t begin = text.find_first_not_of(" \t\r");
  if (begin == std::string_view::npos) return {};
  size_t end = text.find_last_not_of(" \t\r");
  return text.substr(begin, end - begin + 1);
}

bool isBlank(std::string_view line) { return trimView(line).empty(); }

std::string joinStripped(const std::vector<std::string>& lines, size_t begin, size_t end) {
  while (begin < end && isBlank(lines[begin])) ++begin;
  while (end > begin && isBlank(lines[end - 1])) --end;
  std::string out;
  for (size_t i = begin; i < end; ++i) {
    if (i > begin) out.push_back('\n');
    out += lines[i];
  }
  return out;
}

}  // namespace

std::string extractCode(const std::string& responseText) {
  std::vector<std::string> lines = splitLines(responseText);
  bool sawFence = false;
  size_t i = 0;
  while (i < lines.size()) {
    std::string_view trimmed = trimView(lines[i]);
    if (trimmed.substr(0, 3) != "```") {
      ++i;
      continue;
    }
    sawFence = true;
    std::string_view tag = trimView(trimmed.substr(3));
    tag = tag.substr(0, tag.find_first_of(" \t"));  // ```java title=x → java
    size_t close = i + 1;
    while (close < lines.size() && trimView(lines[close]).substr(0, 3) != "```") ++close;
    if (tag.empty() || tag == "java") {
      return joinStripped(lines, i + 1, close);
    }
    i = close < lines.size() ? close + 1 : close;  // skip a foreign-tagged block
  }
  if (sawFence) return {};  // only foreign-tagged blocks: nothing extractable
  return joinStripped(lines, 0, lines.size());
}

IterationOutcome runIteration(const std::string& source, const PromptSpec& prompt,
                              Provider& provider, int maxAttempts,
                              std::chrono::milliseconds initialBackoff) {
  IterationOutcome outcome;
  std::string request = buildRequestContent(prompt.text, source);
  ProviderResult result;
  std::chrono::milliseconds wait = initialBackoff;
  for (int attempt = 1; attempt <= maxAttempts; ++attempt) {
    ++outcome.attempts;
    result = provider.complete(request);
    if (result.ok || !result.retryable) break;
    if (attempt < maxAttempts && wait.count() > 0) {
      std::this_thread::sleep_for(wait);
      wait *= 2;
    }
  }
  outcome.promptTokens = result.promptTokens;
  outcome.completionTokens = result.completionTokens;
  if (!result.ok) {
    outcome.error = result.error;
    return outcome;
  }
  std::string code = extractCode(result.text);
  if (code.empty()) {
    outcome.error = "empty refactoring response";
    return outcome;
  }
  if (code.back() != '\n') code.push_back('\n');
  outcome.ok = true;
  outcome.source = std::move(code);
  return outcome;
}

namespace {

struct Task {
  std::string snippet;
  VariantId variant;
  const PromptSpec* prompt;
};

struct TaskResult {
  long long requests = 0;
  long long written = 0;
  long long skipped = 0;
  long long promptTokens = 0;
  long long completionTokens = 0;
  bool tokenTotalsComplete = true;
  std::vector<IterationFailure> failures;
};

TaskResult runTrajectory(SnapshotStore& store, const Task& task, Provider& provider,
                         const PipelineOptions& options) {
  TaskResult result;
  if (!store.exists(task.snippet, task.variant, task.prompt->id, 0)) {
    result.failures.push_back({task.snippet, task.variant, task.prompt->id, 0,
                               "missing v0 snapshot (run the variants command first)"});
    return result;
  }
  std::string current = store.read(task.snippet, task.variant, task.prompt->id, 0);
  for (int version = 1; version <= options.iterations; ++version) {
    if (store.exists(task.snippet, task.variant, task.prompt->id, version)) {
      ++result.skipped;
      current = store.read(task.snippet, task.variant, task.prompt->id, version);
      continue;
    }
    IterationOutcome outcome =
        runIteration(current, *task.prompt, provider, options.maxAttempts, options.initialBackoff);
    result.requests += outcome.attempts;
    if (outcome.promptTokens >= 0) {
      result.promptTokens += outcome.promptTokens;
    } else {
      result.tokenTotalsComplete = false;
    }
    if (outcome.completionTokens >= 0) result.completionTokens += outcome.completionTokens;
    if (!outcome.ok) {
      result.failures.push_back(
          {task.snippet, task.variant, task.prompt->id, version, outcome.error});
      return result;  // truncate: copying v(k) forward would fake convergence
    }
    store.write(task.snippet, task.variant, task.prompt->id, version, outcome.source);
    ++result.written;
    current = outcome.source;
  }
  return result;
}

}  // namespace

PipelineSummary runPipeline(SnapshotStore& store, const std::vector<std::string>& snippets,
                            Provider& provider, const PipelineOptions& options) {
  if (options.iterations < 1) throw UsageError("iterations must be at least 1");

  std::vector<const PromptSpec*> prompts;
  if (options.prompts.empty()) {
    for (const PromptSpec& spec : promptCatalog()) prompts.push_back(&spec);
  } else {
    for (const PromptSpec& spec : promptCatalog()) {
      if (std::find(options.prompts.begin(), options.prompts.end(), spec.id) !=
          options.prompts.end()) {
        prompts.push_back(&spec);
      }
    }
    for (const std::string& id : options.prompts) {
      if (!findPrompt(id)) throw UsageError("unknown prompt id: " + id);
    }
  }
  if (prompts.empty()) throw UsageError("prompt list is empty");

  std::vector<std::string> ordered = snippets;
  std::sort(ordered.begin(), ordered.end());
  ordered.erase(std::unique(ordered.begin(), ordered.end()), ordered.end());

  std::vector<Task> tasks;
  for (const std::string& snippet : ordered) {
    for (VariantId variant : kAllVariants) {
      for (const PromptSpec* prompt : prompts) tasks.push_back({snippet, variant, prompt});
    }
  }

  std::vector<TaskResult> results(tasks.size());
  std::atomic<size_t> next{0};
  int workers = std::max(1, std::min<int>(options.jobs, static_cast<int>(tasks.size())));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<size_t>(workers));
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (size_t index = next.fetch_add(1); index < tasks.size(); index = next.fetch_add(1)) {
        results[index] = runTrajectory(store, tasks[index], provider, options);
      }
    });
  }
  for (std::thread& worker : pool) worker.join();

  PipelineSummary summary;
  for (const TaskResult& result : results) {
    summary.requests += result.requests;
    summary.written += result.written;
    summary.skipped += result.skipped;
    summary.promptTokens += result.promptTokens;
    summary.completionTokens += result.completionTokens;
    summary.tokenTotalsComplete = summary.tokenTotalsComplete && result.tokenTotalsComplete;
    summary.failures.insert(summary.failures.end(), result.failures.begin(),
                            result.failures.end());
  }
  return summary;
}

}  // namespace reftrace
