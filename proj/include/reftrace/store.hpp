#pragma once

#include <filesystem>
#include <mutex>
#include <string>
#include <vector>

#include "reftrace/variants.hpp"

namespace reftrace {

/// On-disk layout for refactoring snapshots:
///
///   <root>/<snippetId>/<variant>/<prompt>/v<k>.java
///
/// plus `rename_table.json` beside each Meaningless variant directory and a
/// `meta.json` at the root describing the run. Writes are serialized through
/// one mutex so a worker pool can share a single store object; reads are
/// lock-free (the pipeline never rewrites an existing snapshot).
class SnapshotStore {
 public:
  explicit SnapshotStore(std::filesystem::path root);

  const std::filesystem::path& root() const { return root_; }

  std::filesystem::path snapshotPath(const std::string& snippet, VariantId variant,
                                     const std::string& prompt, int version) const;
  std::filesystem::path renameTablePath(const std::string& snippet) const;
  std::filesystem::path metaPath() const;

  bool exists(const std::string& snippet, VariantId variant, const std::string& prompt,
              int version) const;

  /// Read a snapshot verbatim. Throws DataError when absent.
  std::string read(const std::string& snippet, VariantId variant, const std::string& prompt,
                   int version) const;

  /// Write a snapshot, creating parent directories as needed.
  void write(const std::string& snippet, VariantId variant, const std::string& prompt,
             int version, const std::string& source);

  void writeRenameTable(const std::string& snippet, const RenameTable& table);
  RenameTable readRenameTable(const std::string& snippet) const;

  void writeMeta(const std::string& jsonText);

  /// Snippet ids present in the store, sorted.
  std::vector<std::string> snippets() const;

  /// Prompt ids present for one (snippet, variant), sorted.
  std::vector<std::string> prompts(const std::string& snippet, VariantId variant) const;

  /// Highest contiguous version: largest k such that v0..vk all exist.
  /// Returns -1 when even v0 is missing.
  int maxContiguousVersion(const std::string& snippet, VariantId variant,
                           const std::string& prompt) const;

  /// Write arbitrary bytes to a path under the store root (helper shared by
  /// the snapshot and table writers; serialized by the store mutex).
  void writeFile(const std::filesystem::path& path, const std::string& bytes);

  static std::string readFile(const std::filesystem::path& path);

 private:
  std::filesystem::path root_;
  mutable std::mutex writeMutex_;
};

}  // namespace reftrace
