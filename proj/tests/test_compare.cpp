#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <string>

#include "reftrace/compare.hpp"
#include "reftrace/similarity.hpp"
#include "reftrace/variants.hpp"

using namespace reftrace;

namespace {

const char* kAdderSnippet =
    "// adds two numbers\n"
    "public class Adder {\n"
    "\n"
    "    public int add(int a, int b) {\n"
    "        return a + b; // sum\n"
    "    }\n"
    "}\n";

ComparisonKey key() {
  ComparisonKey k;
  k.snippet = "Adder";
  k.variantA = "Original";
  k.variantB = "NoComment";
  k.versionA = 0;
  k.versionB = 0;
  k.prompt = "General";
  return k;
}

int totalChangeCount(const ComparisonRecord& rec) {
  int n = 0;
  for (const auto& [type, count] : rec.changeCounts) n += count;
  return n;
}

}  // namespace

TEST_CASE("comparing a snippet with itself is pure unchanged") {
  ComparisonRecord rec = compareSnippets(kAdderSnippet, kAdderSnippet, key());
  CHECK(rec.unchangedCount == 7);
  CHECK(rec.pairCount() == 0);
  CHECK(rec.insertionCount() == 0);
  CHECK(rec.deletionCount() == 0);
  CHECK(totalChangeCount(rec) == 0);
  CHECK_FALSE(rec.averageSimilarity.has_value());
  CHECK(rec.deltas == AbsoluteMetrics{});
  CHECK(rec.lineEvents() == 7);
}

TEST_CASE("original versus comment-stripped adder") {
  std::string stripped = stripComments(kAdderSnippet);
  ComparisonRecord rec = compareSnippets(kAdderSnippet, stripped, key());

  // The header comment line is deleted in the comment bucket; the inline
  // comment removal shows up as one changed pair classified CommentChange.
  CHECK(rec.deletionsByKind[static_cast<int>(LineBucket::Comment)] == 1);
  CHECK(rec.deletionsByKind[static_cast<int>(LineBucket::Code)] == 0);
  CHECK(rec.deletionsByKind[static_cast<int>(LineBucket::Blank)] == 0);
  CHECK(rec.insertionCount() == 0);
  REQUIRE(rec.pairCount() == 1);
  CHECK(rec.countOf(ChangeType::CommentChange) == 1);
  CHECK(totalChangeCount(rec) == 1);
  CHECK(rec.unchangedCount == 5);

  REQUIRE(rec.averageSimilarity.has_value());
  CHECK(*rec.averageSimilarity ==
        lineSimilarity("        return a + b; // sum", "        return a + b;"));

  CHECK(rec.deltas.total == -1);
  CHECK(rec.deltas.code == 0);
  CHECK(rec.deltas.comment == -1);
  CHECK(rec.deltas.inlineComments == -1);
  CHECK(rec.deltas.empty == 0);
  CHECK(rec.deltas.methods == 0);

  // The key is carried through verbatim.
  CHECK(rec.key.snippet == "Adder");
  CHECK(rec.key.variantB == "NoComment");
}

TEST_CASE("meaningless variant diff never contains code-change subtypes") {
  MeaninglessResult meaningless = makeMeaningless(kAdderSnippet);
  ComparisonRecord rec = compareSnippets(kAdderSnippet, meaningless.source, key());
  for (const auto& [type, count] : rec.changeCounts) {
    INFO("type: ", changeTypeName(type), " count: ", count);
    CHECK_FALSE(isCodeChange(type));
  }
  // A comment rewritten beyond the pairing floor may split into a comment
  // deletion plus insertion, but code and blank lines never churn.
  CHECK(rec.insertionsByKind[static_cast<int>(LineBucket::Code)] == 0);
  CHECK(rec.insertionsByKind[static_cast<int>(LineBucket::Blank)] == 0);
  CHECK(rec.deletionsByKind[static_cast<int>(LineBucket::Code)] == 0);
  CHECK(rec.deletionsByKind[static_cast<int>(LineBucket::Blank)] == 0);
  CHECK(rec.deltas.total == 0);
  CHECK(rec.deltas.methods == 0);
}

TEST_CASE("insertions and deletions are bucketed by line kind") {
  std::string oldSource =
      "int a = 1;\n"
      "int b = 2;\n";
  std::string newSource =
      "int a = 1;\n"
      "\n"
      "// explain\n"
      "int b = 2;\n"
      "call();\n";
  ComparisonRecord rec = compareSnippets(oldSource, newSource, key());
  CHECK(rec.unchangedCount == 2);
  CHECK(rec.pairCount() == 0);
  CHECK(rec.insertionsByKind[static_cast<int>(LineBucket::Blank)] == 1);
  CHECK(rec.insertionsByKind[static_cast<int>(LineBucket::Comment)] == 1);
  CHECK(rec.insertionsByKind[static_cast<int>(LineBucket::Code)] == 1);
  CHECK(rec.deletionCount() == 0);
  CHECK(rec.lineEvents() == 5);
}

TEST_CASE("multi-line block comment insertions bucket as comment lines") {
  std::string oldSource = "int a = 1;\nint b = 2;\n";
  std::string newSource = "int a = 1;\n/* one\n   two */\nint b = 2;\n";
  ComparisonRecord rec = compareSnippets(oldSource, newSource, key());
  CHECK(rec.insertionsByKind[static_cast<int>(LineBucket::Comment)] == 2);
  CHECK(rec.insertionsByKind[static_cast<int>(LineBucket::Code)] == 0);
}

TEST_CASE("average similarity is the mean over all changed pairs") {
  std::string oldSource =
      "int alpha = 1;\n"
      "unrelated();\n"
      "int beta = 2;\n";
  std::string newSource =
      "int alphaX = 1;\n"
      "unrelated();\n"
      "int betaY = 2;\n";
  ComparisonRecord rec = compareSnippets(oldSource, newSource, key());
  REQUIRE(rec.pairCount() == 2);
  double expected = (lineSimilarity("int alpha = 1;", "int alphaX = 1;") +
                     lineSimilarity("int beta = 2;", "int betaY = 2;")) /
                    2.0;
  REQUIRE(rec.averageSimilarity.has_value());
  CHECK(std::fabs(*rec.averageSimilarity - expected) < 1e-15);
  // Changed pairs carry their own records in order.
  REQUIRE(rec.changes.size() == 2);
  CHECK(rec.changes[0].oldLine == 0);
  CHECK(rec.changes[1].oldLine == 2);
}

TEST_CASE("line events decompose both files") {
  std::string oldSource = "a();\nb();\nc();\nd();\n";
  std::string newSource = "a();\nb(x);\nd();\nnew1();\nnew2();\n";
  ComparisonRecord rec = compareSnippets(oldSource, newSource, key());
  // old: 4 = unchanged + pairs + deletions; new: 5 = unchanged + pairs + insertions.
  CHECK(4 == rec.unchangedCount + rec.pairCount() + rec.deletionCount());
  CHECK(5 == rec.unchangedCount + rec.pairCount() + rec.insertionCount());
}

TEST_CASE("rename map merges duplicate entries") {
  ChangeRecord r1;
  r1.renameEntries = {{"a", "count"}};
  ChangeRecord r2;
  r2.renameEntries = {{"a", "count"}};
  RenameMap map = buildRenameMap({r1, r2});
  CHECK(map.consistent);
  REQUIRE(map.entries.contains("a"));
  CHECK(map.entries.at("a").occurrences == 2);
  CHECK(map.entries.at("a").consistent);
  REQUIRE(map.entries.at("a").candidates.size() == 1);
  CHECK(map.entries.at("a").candidates.at("count") == 2);
}

TEST_CASE("rename map flags conflicting targets and keeps both candidates") {
  ChangeRecord r1;
  r1.renameEntries = {{"a", "count"}, {"a", "total"}};
  RenameMap map = buildRenameMap({r1});
  CHECK_FALSE(map.consistent);
  REQUIRE(map.entries.contains("a"));
  const RenameMapEntry& entry = map.entries.at("a");
  CHECK_FALSE(entry.consistent);
  CHECK(entry.occurrences == 2);
  CHECK(entry.candidates.at("count") == 1);
  CHECK(entry.candidates.at("total") == 1);
}

TEST_CASE("rename map of no records is empty and consistent") {
  RenameMap map = buildRenameMap({});
  CHECK(map.entries.empty());
  CHECK(map.consistent);
}

TEST_CASE("cross-file rename consistency via the map") {
  MeaninglessResult meaningless = makeMeaningless(kAdderSnippet);
  ComparisonRecord rec = compareSnippets(kAdderSnippet, meaningless.source, key());
  RenameMap map = buildRenameMap(rec.changes);
  CHECK(map.consistent);
  // Every mapped identifier must agree with the generated table.
  for (const auto& [oldName, entry] : map.entries) {
    REQUIRE(meaningless.table.entries.contains(oldName));
    REQUIRE(entry.candidates.size() == 1);
    CHECK(entry.candidates.begin()->first ==
          meaningless.table.entries.at(oldName).replacement);
  }
}
