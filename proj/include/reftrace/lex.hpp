#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace reftrace {

/// Token categories for the line-oriented Java lexer. The lexer is
/// deliberately line-local: multi-line constructs other than block comments
/// (e.g. text blocks) are out of scope and degrade to literal tokens.
enum class TokenKind {
  Identifier,
  Keyword,
  Literal,
  Operator,
  Separator,
  CommentText,
};

const char* tokenKindName(TokenKind kind);

struct Token {
  TokenKind kind;
  std::string text;
  int line = 0;    // 0-based physical line index
  int column = 0;  // 0-based byte offset within the line
};

/// Carry state between consecutive lines of one file. Only block comments
/// span lines; strings and char literals never do in well-formed Java.
struct LexState {
  bool inBlockComment = false;

  bool operator==(const LexState&) const = default;
};

struct LexedLine {
  std::vector<Token> tokens;
  /// True when the line contained an unterminated string or character
  /// literal. The offending tail is still emitted as a literal token so
  /// downstream consumers can fall back to text-level handling.
  bool lexError = false;
};

/// Tokenize a single physical line, consuming and updating the carry state.
LexedLine tokenizeLine(std::string_view line, int lineIndex, LexState& state);

enum class LineKind { Code, Comment, Blank };

struct LineClass {
  LineKind kind = LineKind::Blank;
  /// Set for Code lines that also carry a trailing comment token.
  bool inlineComment = false;
};

/// Classify one line, consuming and updating the carry state exactly as
/// tokenizeLine would.
LineClass classifyLine(std::string_view line, int lineIndex, LexState& state);

/// Convenience form that discards the inline-comment flag.
inline LineKind classifyLineKind(std::string_view line, int lineIndex, LexState& state) {
  return classifyLine(line, lineIndex, state).kind;
}

/// Split source text into physical lines on '\n', tolerating CRLF endings
/// (a trailing '\r' is stripped). A trailing newline does not create an
/// extra empty line; a missing final newline still counts the last line.
std::vector<std::string> splitLines(std::string_view source);

/// Tokenization of a whole file with per-line carry states.
struct FileLex {
  std::vector<LexedLine> lines;
  /// stateBefore[i] is the carry state in effect at the start of line i;
  /// one extra trailing entry holds the state after the final line.
  std::vector<LexState> stateBefore;
};

FileLex tokenizeFile(std::string_view source);

bool isJavaKeyword(std::string_view word);

}  // namespace reftrace
