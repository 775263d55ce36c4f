#pragma once

#include <stdexcept>
#include <string>

namespace reftrace {

/// Bad invocation: unknown flags, missing arguments, malformed config.
/// Mapped to exit code 1 by the command-line driver.
struct UsageError : std::runtime_error {
  explicit UsageError(const std::string& what) : std::runtime_error(what) {}
};

/// Broken or missing input data: absent files, malformed manifests or
/// snapshot stores, rename collisions. Mapped to exit code 2.
struct DataError : std::runtime_error {
  explicit DataError(const std::string& what) : std::runtime_error(what) {}
};

/// Completion-provider failure that exhausted its retries. Mapped to exit
/// code 3.
struct ProviderError : std::runtime_error {
  explicit ProviderError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace reftrace
