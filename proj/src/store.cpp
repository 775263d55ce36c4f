#include "reftrace/store.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>
#include <system_error>

#include "reftrace/errors.hpp"

namespace reftrace {
namespace fs = std::filesystem;

SnapshotStore::SnapshotStore(fs::path root) : root_(std::move(root)) {}

fs::path SnapshotStore::snapshotPath(const std::string& snippet, VariantId variant,
                                     const std::string& prompt, int version) const {
  return root_ / snippet / variantName(variant) / prompt / ("v" + std::to_string(version) + ".java");
}

fs::path SnapshotStore::renameTablePath(const std::string& snippet) const {
  return root_ / snippet / variantName(VariantId::Meaningless) / "rename_table.json";
}

fs::path SnapshotStore::metaPath() const { return root_ / "meta.json"; }

bool SnapshotStore::exists(const std::string& snippet, VariantId variant,
                           const std::string& prompt, int version) const {
  std::error_code ec;
  return fs::is_regular_file(snapshotPath(snippet, variant, prompt, version), ec);
}

std::string SnapshotStore::readFile(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot read " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return buffer.str();
}

std::string SnapshotStore::read(const std::string& snippet, VariantId variant,
                                const std::string& prompt, int version) const {
  return readFile(snapshotPath(snippet, variant, prompt, version));
}

void SnapshotStore::writeFile(const fs::path& path, const std::string& bytes) {
  std::lock_guard<std::mutex> lock(writeMutex_);
  std::error_code ec;
  fs::create_directories(path.parent_path(), ec);
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
  out.flush();
  if (!out) throw DataError("short write to " + path.string());
}

void SnapshotStore::write(const std::string& snippet, VariantId variant,
                          const std::string& prompt, int version, const std::string& source) {
  writeFile(snapshotPath(snippet, variant, prompt, version), source);
}

void SnapshotStore::writeRenameTable(const std::string& snippet, const RenameTable& table) {
  writeFile(renameTablePath(snippet), renameTableToJson(table));
}

RenameTable SnapshotStore::readRenameTable(const std::string& snippet) const {
  return renameTableFromJson(readFile(renameTablePath(snippet)));
}

void SnapshotStore::writeMeta(const std::string& jsonText) { writeFile(metaPath(), jsonText); }

std::vector<std::string> SnapshotStore::snippets() const {
  std::vector<std::string> names;
  std::error_code ec;
  for (fs::directory_iterator it(root_, ec), end; !ec && it != end; it.increment(ec)) {
    if (it->is_directory()) names.push_back(it->path().filename().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

std::vector<std::string> SnapshotStore::prompts(const std::string& snippet,
                                                VariantId variant) const {
  std::vector<std::string> names;
  std::error_code ec;
  fs::path dir = root_ / snippet / variantName(variant);
  for (fs::directory_iterator it(dir, ec), end; !ec && it != end; it.increment(ec)) {
    if (it->is_directory()) names.push_back(it->path().filename().string());
  }
  std::sort(names.begin(), names.end());
  return names;
}

int SnapshotStore::maxContiguousVersion(const std::string& snippet, VariantId variant,
                                        const std::string& prompt) const {
  int k = -1;
  while (exists(snippet, variant, prompt, k + 1)) ++k;
  return k;
}

}  // namespace reftrace
