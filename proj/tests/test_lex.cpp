#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>
#include <string>
#include <vector>

#include "reftrace/lex.hpp"

using namespace reftrace;

namespace {

std::vector<std::string> tokenTexts(const LexedLine& lexed) {
  std::vector<std::string> out;
  for (const auto& t : lexed.tokens) out.push_back(t.text);
  return out;
}

std::vector<TokenKind> tokenKinds(const LexedLine& lexed) {
  std::vector<TokenKind> out;
  for (const auto& t : lexed.tokens) out.push_back(t.kind);
  return out;
}

/// Every token must be a verbatim slice of the line at its recorded column,
/// and every byte not covered by a token must be whitespace. Together these
/// make the token stream a lossless decomposition of the line.
void checkLosslessDecomposition(const std::string& line) {
  LexState state;
  LexedLine lexed = tokenizeLine(line, 0, state);
  std::vector<bool> covered(line.size(), false);
  for (const auto& t : lexed.tokens) {
    REQUIRE(t.column >= 0);
    REQUIRE(static_cast<std::size_t>(t.column) + t.text.size() <= line.size());
    CHECK(line.substr(static_cast<std::size_t>(t.column), t.text.size()) == t.text);
    for (std::size_t k = 0; k < t.text.size(); ++k)
      covered[static_cast<std::size_t>(t.column) + k] = true;
  }
  for (std::size_t i = 0; i < line.size(); ++i) {
    if (!covered[i]) {
      char c = line[i];
      CHECK((c == ' ' || c == '\t' || c == '\f' || c == '\v' || c == '\r'));
    }
  }
}

}  // namespace

TEST_CASE("inline comment splits into code tokens plus one comment token") {
  LexState state;
  LexedLine lexed = tokenizeLine("return x; // done", 0, state);
  REQUIRE(lexed.tokens.size() == 4);
  CHECK(tokenTexts(lexed) == std::vector<std::string>{"return", "x", ";", "// done"});
  CHECK(tokenKinds(lexed) == std::vector<TokenKind>{TokenKind::Keyword, TokenKind::Identifier,
                                                    TokenKind::Separator, TokenKind::CommentText});
  CHECK_FALSE(state.inBlockComment);
}

TEST_CASE("unterminated block comment opens the carry state") {
  LexState state;
  LexedLine lexed = tokenizeLine("/* open", 0, state);
  REQUIRE(lexed.tokens.size() == 1);
  CHECK(lexed.tokens[0].kind == TokenKind::CommentText);
  CHECK(state.inBlockComment);

  // The next line is comment text until the terminator; code after it lexes.
  LexedLine next = tokenizeLine("still comment */ int x;", 1, state);
  CHECK_FALSE(state.inBlockComment);
  REQUIRE(next.tokens.size() >= 3);
  CHECK(next.tokens[0].kind == TokenKind::CommentText);
  CHECK(next.tokens[1].text == "int");
  CHECK(next.tokens[1].kind == TokenKind::Keyword);
}

TEST_CASE("strings containing comment markers are literals, not comments") {
  LexState state;
  LexedLine lexed = tokenizeLine("String u = \"http://x\"; // real", 0, state);
  bool sawUrlLiteral = false;
  int commentTokens = 0;
  for (const auto& t : lexed.tokens) {
    if (t.kind == TokenKind::Literal && t.text == "\"http://x\"") sawUrlLiteral = true;
    if (t.kind == TokenKind::CommentText) ++commentTokens;
  }
  CHECK(sawUrlLiteral);
  CHECK(commentTokens == 1);

  LexedLine slashes = tokenizeLine("String s = \"/* not a comment */\";", 1, state);
  for (const auto& t : slashes.tokens) CHECK(t.kind != TokenKind::CommentText);
  CHECK_FALSE(state.inBlockComment);
}

TEST_CASE("character and escaped literals survive") {
  LexState state;
  LexedLine lexed = tokenizeLine("char c = '\\''; String s = \"a\\\"b\";", 0, state);
  int literals = 0;
  for (const auto& t : lexed.tokens) {
    if (t.kind == TokenKind::Literal) ++literals;
  }
  CHECK(literals == 2);
  CHECK_FALSE(lexed.lexError);
}

TEST_CASE("unterminated string sets the error flag but still yields a token") {
  LexState state;
  LexedLine lexed = tokenizeLine("String s = \"oops", 0, state);
  CHECK(lexed.lexError);
  REQUIRE_FALSE(lexed.tokens.empty());
  CHECK(lexed.tokens.back().kind == TokenKind::Literal);
}

TEST_CASE("numeric literal shapes") {
  LexState state;
  LexedLine lexed = tokenizeLine("x = 0x1F + 1_000L + 3.14e-2f + 0b101;", 0, state);
  std::vector<std::string> lits;
  for (const auto& t : lexed.tokens)
    if (t.kind == TokenKind::Literal) lits.push_back(t.text);
  CHECK(lits == std::vector<std::string>{"0x1F", "1_000L", "3.14e-2f", "0b101"});
}

TEST_CASE("word literals and keywords are distinguished from identifiers") {
  LexState state;
  LexedLine lexed = tokenizeLine("boolean ok = true; Object n = null;", 0, state);
  std::vector<std::pair<std::string, TokenKind>> got;
  for (const auto& t : lexed.tokens) got.emplace_back(t.text, t.kind);
  CHECK(std::count(got.begin(), got.end(),
                   std::pair<std::string, TokenKind>{"true", TokenKind::Literal}) == 1);
  CHECK(std::count(got.begin(), got.end(),
                   std::pair<std::string, TokenKind>{"null", TokenKind::Literal}) == 1);
  CHECK(std::count(got.begin(), got.end(),
                   std::pair<std::string, TokenKind>{"boolean", TokenKind::Keyword}) == 1);
  CHECK(std::count(got.begin(), got.end(),
                   std::pair<std::string, TokenKind>{"ok", TokenKind::Identifier}) == 1);
  CHECK(isJavaKeyword("while"));
  CHECK(isJavaKeyword("void"));
  CHECK_FALSE(isJavaKeyword("main"));
}

TEST_CASE("multi-character operators use maximal munch") {
  LexState state;
  LexedLine lexed = tokenizeLine("a >>= b >>> c != d;", 0, state);
  std::vector<std::string> ops;
  for (const auto& t : lexed.tokens)
    if (t.kind == TokenKind::Operator) ops.push_back(t.text);
  CHECK(ops == std::vector<std::string>{">>=", ">>>", "!="});
}

TEST_CASE("line classification: blank, comment-only, code, inline comment") {
  LexState state;
  CHECK(classifyLineKind("   ", 0, state) == LineKind::Blank);
  CHECK(classifyLineKind("", 1, state) == LineKind::Blank);
  CHECK(classifyLineKind("\t \t", 2, state) == LineKind::Blank);
  CHECK(classifyLineKind("// adds two numbers", 3, state) == LineKind::Comment);
  CHECK(classifyLineKind("/* block */", 4, state) == LineKind::Comment);

  LineClass mixed = classifyLine("return a + b; // sum", 5, state);
  CHECK(mixed.kind == LineKind::Code);
  CHECK(mixed.inlineComment);

  LineClass plain = classifyLine("return a + b;", 6, state);
  CHECK(plain.kind == LineKind::Code);
  CHECK_FALSE(plain.inlineComment);
}

TEST_CASE("classification tracks multi-line block comments") {
  LexState state;
  CHECK(classifyLineKind("/**", 0, state) == LineKind::Comment);
  CHECK(state.inBlockComment);
  CHECK(classifyLineKind(" * javadoc text", 1, state) == LineKind::Comment);
  // A truly empty line inside an open block is blank, not comment.
  CHECK(classifyLineKind("", 2, state) == LineKind::Blank);
  CHECK(classifyLineKind(" */", 3, state) == LineKind::Comment);
  CHECK_FALSE(state.inBlockComment);
  // Code resuming after the terminator on the same line counts as code.
  CHECK(classifyLineKind("/* x */ int y;", 4, state) == LineKind::Code);
}

TEST_CASE("code before a block comment terminator on one line is code") {
  LexState state;
  CHECK(classifyLineKind("int a; /* start", 0, state) == LineKind::Code);
  CHECK(state.inBlockComment);
  CHECK(classifyLineKind("end */ int b;", 1, state) == LineKind::Code);
  CHECK_FALSE(state.inBlockComment);
}

TEST_CASE("splitLines handles terminators per the documented rules") {
  CHECK(splitLines("") == std::vector<std::string>{});
  CHECK(splitLines("a") == std::vector<std::string>{"a"});
  CHECK(splitLines("a\n") == std::vector<std::string>{"a"});
  CHECK(splitLines("a\nb") == std::vector<std::string>{"a", "b"});
  CHECK(splitLines("a\nb\n") == std::vector<std::string>{"a", "b"});
  CHECK(splitLines("a\r\nb\r\n") == std::vector<std::string>{"a", "b"});
  CHECK(splitLines("\n\n") == std::vector<std::string>{"", ""});
}

TEST_CASE("tokenizeFile carries state across lines and exposes per-line states") {
  FileLex lex = tokenizeFile("int a; /* c1\nc2 */ int b;\nint c;\n");
  REQUIRE(lex.lines.size() == 3);
  REQUIRE(lex.stateBefore.size() == 4);
  CHECK_FALSE(lex.stateBefore[0].inBlockComment);
  CHECK(lex.stateBefore[1].inBlockComment);
  CHECK_FALSE(lex.stateBefore[2].inBlockComment);
  CHECK_FALSE(lex.stateBefore[3].inBlockComment);
}

TEST_CASE("token stream is a lossless decomposition of each line") {
  const std::vector<std::string> lines = {
      "public static void main(String[] args) {",
      "    int x = 42; // count",
      "\tMap<String, List<Integer>> m = new HashMap<>();",
      "    s += \"a//b\" + 'c' + 0x1p3;",
      "  } else if (a >= b && c != d) {",
      "stuff(a,b , c)  ;   ",
      "@Override",
      "",
      "   \t ",
  };
  for (const auto& line : lines) checkLosslessDecomposition(line);
}

TEST_CASE("lexing is deterministic across repeated runs on random inputs") {
  std::mt19937 rng(20260822u);
  const std::string alphabet =
      " \tabzAZ_$09+-*/=<>!&|;,(){}[]'\"\\/.@%^~?:#";
  std::uniform_int_distribution<std::size_t> pick(0, alphabet.size() - 1);
  std::uniform_int_distribution<int> len(0, 60);
  for (int iter = 0; iter < 500; ++iter) {
    std::string line;
    int n = len(rng);
    for (int i = 0; i < n; ++i) line.push_back(alphabet[pick(rng)]);
    LexState s1, s2;
    LexedLine a = tokenizeLine(line, 0, s1);
    LexedLine b = tokenizeLine(line, 0, s2);
    REQUIRE(a.tokens.size() == b.tokens.size());
    CHECK(s1 == s2);
    for (std::size_t i = 0; i < a.tokens.size(); ++i) {
      CHECK(a.tokens[i].text == b.tokens[i].text);
      CHECK(a.tokens[i].kind == b.tokens[i].kind);
      CHECK(a.tokens[i].column == b.tokens[i].column);
    }
    checkLosslessDecomposition(line);
  }
}
