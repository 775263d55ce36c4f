#pragma once

#include <atomic>
#include <filesystem>
#include <map>
#include <memory>
#include <mutex>
#include <string>

namespace reftrace {

/// Outcome of one completion request. `retryable` distinguishes transient
/// transport trouble (timeouts, 429/5xx) from permanent failures (missing
/// replay entry, 4xx); only the former is worth another attempt.
struct ProviderResult {
  bool ok = false;
  bool retryable = false;
  std::string text;
  std::string error;
  long long promptTokens = -1;      // -1 when the provider reports no usage
  long long completionTokens = -1;
};

/// Stateless chat-completion provider: one user message in, one completion
/// out. Implementations must be safe to call from multiple threads.
class Provider {
 public:
  virtual ~Provider() = default;
  virtual ProviderResult complete(const std::string& requestContent) = 0;
  virtual std::string kind() const = 0;
};

/// Lowercase hex SHA-256 of the full request content; the key under which
/// replay scripts store responses.
std::string requestDigest(const std::string& requestContent);

/// Answers from a recorded script: a JSON object mapping request digest to
/// response text. A missing digest is a permanent failure (the script cannot
/// grow mid-run), reported with the digest so scripts are easy to extend.
class ReplayProvider : public Provider {
 public:
  explicit ReplayProvider(const std::filesystem::path& scriptPath);

  ProviderResult complete(const std::string& requestContent) override;
  std::string kind() const override { return "replay"; }

  /// Number of complete() calls served so far; lets tests assert that a
  /// resumed run issues requests only for missing snapshots.
  int requestCount() const { return requests_.load(); }

 private:
  std::map<std::string, std::string> script_;
  std::atomic<int> requests_{0};
};

struct LiveProviderConfig {
  std::string endpoint;  // full URL, e.g. https://host/v1/chat/completions
  std::string model;
  double temperature = 0.0;
  int timeoutSeconds = 120;
  std::string apiKey;  // from REFTRACE_API_KEY
};

/// Talks to an OpenAI-style chat-completions endpoint over HTTPS. Each call
/// posts {model, temperature, messages:[{role:"user", content}]} and reads
/// choices[0].message.content plus usage token counts when present.
class LiveHttpProvider : public Provider {
 public:
  explicit LiveHttpProvider(LiveProviderConfig config);

  ProviderResult complete(const std::string& requestContent) override;
  std::string kind() const override { return "live-http"; }

 private:
  LiveProviderConfig config_;
};

/// Wraps another provider and records digest -> response for every
/// successful call; flush() writes a replay script. Lets a live run double
/// as a future replay fixture.
class RecordingProvider : public Provider {
 public:
  RecordingProvider(Provider& inner, std::filesystem::path outPath);
  ~RecordingProvider() override;

  ProviderResult complete(const std::string& requestContent) override;
  std::string kind() const override;

  void flush();

 private:
  Provider& inner_;
  std::filesystem::path outPath_;
  std::map<std::string, std::string> recorded_;
  std::mutex mutex_;
};

}  // namespace reftrace
