#pragma once

#include <chrono>
#include <string>
#include <string_view>
#include <vector>

#include "reftrace/provider.hpp"
#include "reftrace/store.hpp"
#include "reftrace/variants.hpp"

namespace reftrace {

struct PromptSpec {
  std::string id;    // General | Meaning | Comments
  std::string text;  // exact instruction sent to the provider
};

/// The three refactoring instructions, in canonical order.
const std::vector<PromptSpec>& promptCatalog();

/// Catalog entry by id, or nullptr.
const PromptSpec* findPrompt(std::string_view id);

/// The full request content for one iteration: the prompt text, a blank
/// line, then the source verbatim — never any conversation history, never a
/// file name, no code fences around the input.
std::string buildRequestContent(const std::string& promptText, const std::string& source);

/// Pull the refactored source out of a completion. Takes the content of the
/// first fenced code block tagged `java` or untagged (blocks with other tags
/// are skipped); with no fences at all, the whole response is used. Leading
/// and trailing blank lines are stripped. May return an empty string — the
/// caller treats that as a failed iteration.
std::string extractCode(const std::string& responseText);

struct IterationOutcome {
  bool ok = false;
  std::string source;  // extracted code, normalized to end with one newline
  std::string error;
  long long promptTokens = -1;
  long long completionTokens = -1;
  int attempts = 0;
};

/// One stateless refactoring request with bounded retries: up to maxAttempts
/// tries, exponential backoff starting at initialBackoff, retrying only
/// transport-level failures.
IterationOutcome runIteration(const std::string& source, const PromptSpec& prompt,
                              Provider& provider, int maxAttempts,
                              std::chrono::milliseconds initialBackoff);

struct IterationFailure {
  std::string snippet;
  VariantId variant = VariantId::Original;
  std::string prompt;
  int version = 0;  // the version that could not be produced
  std::string error;
};

struct PipelineOptions {
  int iterations = 5;
  std::vector<std::string> prompts;  // prompt ids; empty means all three
  int jobs = 4;
  int maxAttempts = 3;
  std::chrono::milliseconds initialBackoff{2000};
};

struct PipelineSummary {
  long long requests = 0;  // provider calls issued, retries included
  long long written = 0;   // snapshots persisted by this run
  long long skipped = 0;   // snapshots already present (resume)
  long long promptTokens = 0;
  long long completionTokens = 0;
  bool tokenTotalsComplete = true;  // false when any response lacked usage
  std::vector<IterationFailure> failures;
};

/// Drive every (snippet, variant, prompt) trajectory up to
/// options.iterations versions. Existing snapshots are never re-requested; a
/// failed iteration truncates its trajectory (later versions are not
/// fabricated) and is recorded. Tasks run on a bounded worker pool; results
/// are merged in deterministic task order.
PipelineSummary runPipeline(SnapshotStore& store, const std::vector<std::string>& snippets,
                            Provider& provider, const PipelineOptions& options);

}  // namespace reftrace
