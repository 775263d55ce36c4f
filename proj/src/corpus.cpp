#include "reftrace/corpus.hpp"

#include <algorithm>
#include <fstream>
#include <sstream>

#include "reftrace/csv.hpp"

namespace fs = std::filesystem;

namespace reftrace {

namespace {

bool isTestFile(const fs::path& relative) {
  std::string name = relative.filename().string();
  if (name.size() > 9 && name.ends_with("Test.java")) return true;
  for (const fs::path& part : relative.parent_path()) {
    if (part == "test") return true;
  }
  return false;
}

std::string snippetIdFor(const std::string& relativePath) {
  std::string id = relativePath;
  if (id.ends_with(".java")) id.resize(id.size() - 5);
  std::replace(id.begin(), id.end(), '/', '_');
  return id;
}

std::string readFile(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

}  // namespace

CriteriaReport checkSamplingCriteria(const AbsoluteMetrics& m) {
  CriteriaReport r;
  r.locOk = m.total >= 50 && m.total <= 200;
  if (m.total < 50) r.reasons.push_back("LOC < 50");
  else if (m.total > 200) r.reasons.push_back("LOC > 200");

  int blocks = (m.total + 49) / 50;
  r.methodsRatioOk = m.methods >= blocks && m.methods <= 3 * blocks;
  if (!r.methodsRatioOk) r.reasons.push_back("methods outside 1..3 per 50 lines");

  r.codeCommentsRatioOk = 2 * m.code >= m.total;
  if (!r.codeCommentsRatioOk) r.reasons.push_back("code ratio < 50%");

  r.accepted = r.locOk && r.methodsRatioOk && r.codeCommentsRatioOk;
  return r;
}

std::vector<ManifestRow> sampleCorpus(const fs::path& root) {
  std::vector<std::string> paths;
  if (fs::exists(root)) {
    for (const auto& entry : fs::recursive_directory_iterator(root)) {
      if (!entry.is_regular_file()) continue;
      if (entry.path().extension() != ".java") continue;
      fs::path rel = fs::relative(entry.path(), root);
      if (isTestFile(rel)) continue;
      paths.push_back(rel.generic_string());
    }
  }
  std::sort(paths.begin(), paths.end());

  std::vector<ManifestRow> rows;
  rows.reserve(paths.size());
  for (const std::string& rel : paths) {
    ManifestRow row;
    row.path = rel;
    row.snippet = snippetIdFor(rel);
    row.metrics = computeAbsoluteMetrics(readFile(root / rel));
    row.report = checkSamplingCriteria(row.metrics);
    rows.push_back(std::move(row));
  }
  return rows;
}

std::string manifestToCsv(const std::vector<ManifestRow>& rows) {
  std::string out = "path,total,code,comment,inline,empty,methods,accepted,reasons\n";
  for (const ManifestRow& r : rows) {
    std::string reasons;
    for (std::size_t i = 0; i < r.report.reasons.size(); ++i) {
      if (i) reasons += ';';
      reasons += r.report.reasons[i];
    }
    out += csvRow({r.path, std::to_string(r.metrics.total),
                   std::to_string(r.metrics.code),
                   std::to_string(r.metrics.comment),
                   std::to_string(r.metrics.inlineComments),
                   std::to_string(r.metrics.empty),
                   std::to_string(r.metrics.methods),
                   r.report.accepted ? "true" : "false", reasons});
    out += '\n';
  }
  return out;
}

std::vector<ManifestRow> manifestFromCsv(const std::string& text) {
  std::vector<ManifestRow> rows;
  std::istringstream in(text);
  std::string line;
  bool first = true;
  while (std::getline(in, line)) {
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (first) {
      first = false;
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> f = csvSplit(line);
    if (f.size() < 9) continue;
    ManifestRow row;
    row.path = f[0];
    row.snippet = snippetIdFor(f[0]);
    row.metrics.total = std::stoi(f[1]);
    row.metrics.code = std::stoi(f[2]);
    row.metrics.comment = std::stoi(f[3]);
    row.metrics.inlineComments = std::stoi(f[4]);
    row.metrics.empty = std::stoi(f[5]);
    row.metrics.methods = std::stoi(f[6]);
    row.report.accepted = f[7] == "true";
    std::string reason;
    std::istringstream rs(f[8]);
    while (std::getline(rs, reason, ';')) {
      if (!reason.empty()) row.report.reasons.push_back(reason);
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

}  // namespace reftrace
