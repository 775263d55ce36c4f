#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <map>
#include <random>
#include <string>

#include "labeled_pairs.hpp"
#include "reftrace/classify.hpp"
#include "reftrace/similarity.hpp"

using namespace reftrace;

namespace {

ChangeRecord classify(const std::string& oldLine, const std::string& newLine) {
  return classifyChange(oldLine, newLine, LexState{}, LexState{}, 0, 0);
}

}  // namespace

TEST_CASE("hand-labeled pair suite classifies 100% correctly") {
  std::map<ChangeType, int> seen;
  for (const auto& pair : testutil::kLabeledPairs) {
    ChangeRecord rec = classify(pair.oldLine, pair.newLine);
    INFO("old: ", pair.oldLine, "\nnew: ", pair.newLine, "\nwhy: ", pair.rationale,
         "\nexpected: ", changeTypeName(pair.expected), " got: ", changeTypeName(rec.type));
    CHECK(rec.type == pair.expected);
    ++seen[rec.type];
  }
  // The suite itself must cover every type at least twice.
  REQUIRE(testutil::kLabeledPairs.size() >= 30);
  for (ChangeType type : kAllChangeTypes) {
    INFO("type: ", changeTypeName(type));
    int n = 0;
    for (const auto& pair : testutil::kLabeledPairs)
      if (pair.expected == type) ++n;
    CHECK(n >= 2);
  }
  (void)seen;
}

TEST_CASE("rename records carry the identifier entries") {
  ChangeRecord rec = classify("int a = 0;", "int count = 0;");
  REQUIRE(rec.type == ChangeType::Rename);
  REQUIRE(rec.renameEntries.size() == 1);
  CHECK(rec.renameEntries[0] == std::pair<std::string, std::string>{"a", "count"});

  // Each instance is a separate entry, no dedup.
  ChangeRecord twice = classify("print(a, a);", "print(b, b);");
  REQUIRE(twice.type == ChangeType::Rename);
  REQUIRE(twice.renameEntries.size() == 2);
  CHECK(twice.renameEntries[0] == std::pair<std::string, std::string>{"a", "b"});
  CHECK(twice.renameEntries[1] == std::pair<std::string, std::string>{"a", "b"});
}

TEST_CASE("inconsistent per-line mapping is not a rename but keeps entries") {
  ChangeRecord rec = classify("f(a, a);", "f(b, c);");
  CHECK(rec.type == ChangeType::OtherStructuralChange);
  REQUIRE(rec.renameEntries.size() == 2);
  CHECK(rec.renameEntries[0] == std::pair<std::string, std::string>{"a", "b"});
  CHECK(rec.renameEntries[1] == std::pair<std::string, std::string>{"a", "c"});
}

TEST_CASE("identifier substitutions inside a mixed change are recorded") {
  ChangeRecord rec = classify("return x + 1; // tweak", "return y + 2; // tweak");
  REQUIRE(rec.type == ChangeType::MixedChange);
  REQUIRE(rec.renameEntries.size() == 1);
  CHECK(rec.renameEntries[0] == std::pair<std::string, std::string>{"x", "y"});
}

TEST_CASE("similarity on the record matches lineSimilarity") {
  ChangeRecord rec = classify("int a = 0;", "int count = 0;");
  CHECK(rec.similarity == lineSimilarity("int a = 0;", "int count = 0;"));
  CHECK(rec.oldLine == 0);
  CHECK(rec.newLine == 0);
  CHECK(rec.oldText == "int a = 0;");
  CHECK(rec.newText == "int count = 0;");
}

TEST_CASE("node categories are attached and never empty") {
  CHECK(classify("if (x>0) {", "if (x > 0) {").nodeCategories ==
        std::set<NodeCategory>{NodeCategory::OtherNode});
  CHECK(classify("return a; // sum", "return a; // total").nodeCategories ==
        std::set<NodeCategory>{NodeCategory::CommentNode});
  CHECK(classify("int limit = 10;", "int limit = 20;")
            .nodeCategories.contains(NodeCategory::LiteralNode));
  CHECK(classify("if (a) {", "while (a) {")
            .nodeCategories.contains(NodeCategory::ControlNode));
  for (const auto& pair : testutil::kLabeledPairs) {
    ChangeRecord rec = classify(pair.oldLine, pair.newLine);
    CHECK_FALSE(rec.nodeCategories.empty());
  }
}

TEST_CASE("lexical failure degrades to the structural fallback with diagnostics") {
  ChangeRecord rec = classify("String s = \"broken", "String s = \"also broken");
  CHECK(rec.type == ChangeType::OtherStructuralChange);
  CHECK(rec.diagnostics);
  CHECK_FALSE(rec.nodeCategories.empty());
}

TEST_CASE("block-comment carry state drives comment detection") {
  // Inside an open block comment both lines are pure comment text.
  LexState open;
  open.inBlockComment = true;
  ChangeRecord rec = classifyChange(" * first words", " * other words", open, open, 3, 3);
  CHECK(rec.type == ChangeType::CommentChange);
}

TEST_CASE("classification is total and deterministic on random line pairs") {
  std::mt19937 rng(90210u);
  const std::string alphabet = "abL1 ;(){}=+<>./\"'xyz,";
  std::uniform_int_distribution<int> len(0, 40);
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  for (int i = 0; i < 1000; ++i) {
    std::string a, b;
    int la = len(rng), lb = len(rng);
    for (int k = 0; k < la; ++k) a.push_back(alphabet[pick(rng)]);
    for (int k = 0; k < lb; ++k) b.push_back(alphabet[pick(rng)]);
    ChangeRecord r1 = classify(a, b);
    ChangeRecord r2 = classify(a, b);
    CHECK(r1.type == r2.type);
    CHECK_FALSE(r1.nodeCategories.empty());
    CHECK(r1.similarity >= 0.0);
    CHECK(r1.similarity <= 1.0);
    bool known = false;
    for (ChangeType t : kAllChangeTypes)
      if (r1.type == t) known = true;
    CHECK(known);
  }
}
