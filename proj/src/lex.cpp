#include "reftrace/lex.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <unordered_set>

namespace reftrace {

namespace {

const std::unordered_set<std::string_view> kKeywords = {
    "abstract", "assert",   "boolean",    "break",      "byte",
    "case",     "catch",    "char",       "class",      "const",
    "continue", "default",  "do",         "double",     "else",
    "enum",     "extends",  "final",      "finally",    "float",
    "for",      "goto",     "if",         "implements", "import",
    "instanceof", "int",    "interface",  "long",       "native",
    "new",      "package",  "private",    "protected",  "public",
    "return",   "short",    "static",     "strictfp",   "super",
    "switch",   "synchronized", "this",   "throw",      "throws",
    "transient", "try",     "void",       "volatile",   "while",
};

// Word-like literals; lexed as identifiers first, then reclassified.
const std::unordered_set<std::string_view> kWordLiterals = {"true", "false", "null"};

// Multi-character operators, longest first so maximal munch is a plain scan.
constexpr std::array<std::string_view, 26> kMultiOps = {
    ">>>=", "<<=", ">>=", ">>>", "->", "==", ">=", "<=", "!=", "&&",
    "||",   "++",  "--",  "+=",  "-=", "*=", "/=", "&=", "|=", "^=",
    "%=",   "<<",  ">>",  "...", "::", "",
};

bool isSingleOp(char c) {
  switch (c) {
    case '=': case '>': case '<': case '!': case '~': case '?': case ':':
    case '+': case '-': case '*': case '/': case '&': case '|': case '^':
    case '%':
      return true;
    default:
      return false;
  }
}

bool isSeparatorChar(char c) {
  switch (c) {
    case '(': case ')': case '{': case '}': case '[': case ']':
    case ';': case ',': case '.': case '@':
      return true;
    default:
      return false;
  }
}

bool isIdentStart(char c) {
  return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == '$';
}

bool isIdentPart(char c) {
  return isIdentStart(c) || std::isdigit(static_cast<unsigned char>(c));
}

bool isDigit(char c) { return std::isdigit(static_cast<unsigned char>(c)); }

bool isHexDigit(char c) { return std::isxdigit(static_cast<unsigned char>(c)); }

bool isWs(char c) { return c == ' ' || c == '\t' || c == '\f' || c == '\v' || c == '\r'; }

/// Scan a numeric literal starting at `i`; returns one past its end.
std::size_t scanNumber(std::string_view s, std::size_t i) {
  std::size_t n = s.size();
  std::size_t j = i;
  if (s[j] == '0' && j + 1 < n && (s[j + 1] == 'x' || s[j + 1] == 'X')) {
    j += 2;
    while (j < n && (isHexDigit(s[j]) || s[j] == '_')) ++j;
    // Hex floating point (rare): 0x1.8p3
    if (j < n && s[j] == '.') {
      ++j;
      while (j < n && (isHexDigit(s[j]) || s[j] == '_')) ++j;
    }
    if (j < n && (s[j] == 'p' || s[j] == 'P')) {
      ++j;
      if (j < n && (s[j] == '+' || s[j] == '-')) ++j;
      while (j < n && isDigit(s[j])) ++j;
    }
  } else if (s[j] == '0' && j + 1 < n && (s[j + 1] == 'b' || s[j + 1] == 'B') &&
             j + 2 < n && (s[j + 2] == '0' || s[j + 2] == '1')) {
    j += 2;
    while (j < n && (s[j] == '0' || s[j] == '1' || s[j] == '_')) ++j;
  } else {
    while (j < n && (isDigit(s[j]) || s[j] == '_')) ++j;
    if (j < n && s[j] == '.' && j + 1 < n && isDigit(s[j + 1])) {
      ++j;
      while (j < n && (isDigit(s[j]) || s[j] == '_')) ++j;
    } else if (j < n && s[j] == '.' && i != j) {
      // "1." style literal; do not swallow ".foo" member access after it
      // unless a digit or exponent follows — Java allows "1.".
      std::size_t k = j + 1;
      if (k >= n || !isIdentStart(s[k])) ++j;
    }
    if (j < n && (s[j] == 'e' || s[j] == 'E')) {
      std::size_t k = j + 1;
      if (k < n && (s[k] == '+' || s[k] == '-')) ++k;
      if (k < n && isDigit(s[k])) {
        j = k;
        while (j < n && (isDigit(s[j]) || s[j] == '_')) ++j;
      }
    }
  }
  if (j < n && (s[j] == 'l' || s[j] == 'L' || s[j] == 'f' || s[j] == 'F' ||
                s[j] == 'd' || s[j] == 'D')) {
    ++j;
  }
  return j;
}

/// Scan a quoted literal (string or char) starting at the opening quote.
/// Returns one past the closing quote, or npos when unterminated.
std::size_t scanQuoted(std::string_view s, std::size_t i, char quote) {
  std::size_t n = s.size();
  std::size_t j = i + 1;
  while (j < n) {
    if (s[j] == '\\' && j + 1 < n) {
      j += 2;
      continue;
    }
    if (s[j] == quote) return j + 1;
    ++j;
  }
  return std::string_view::npos;
}

}  // namespace

const char* tokenKindName(TokenKind kind) {
  switch (kind) {
    case TokenKind::Identifier: return "identifier";
    case TokenKind::Keyword: return "keyword";
    case TokenKind::Literal: return "literal";
    case TokenKind::Operator: return "operator";
    case TokenKind::Separator: return "separator";
    case TokenKind::CommentText: return "comment";
  }
  return "?";
}

bool isJavaKeyword(std::string_view word) { return kKeywords.contains(word); }

LexedLine tokenizeLine(std::string_view line, int lineIndex, LexState& state) {
  LexedLine out;
  std::size_t n = line.size();
  std::size_t i = 0;

  auto push = [&](TokenKind kind, std::size_t begin, std::size_t end) {
    out.tokens.push_back(Token{kind, std::string(line.substr(begin, end - begin)),
                               lineIndex, static_cast<int>(begin)});
  };

  if (state.inBlockComment) {
    std::size_t close = line.find("*/");
    if (close == std::string_view::npos) {
      // Whitespace-only interior lines carry no comment token: "only
      // whitespace" wins over "inside a comment" when counting blank lines.
      if (line.find_first_not_of(" \t\f\v\r") != std::string_view::npos) {
        push(TokenKind::CommentText, 0, n);
      }
      return out;
    }
    push(TokenKind::CommentText, 0, close + 2);
    state.inBlockComment = false;
    i = close + 2;
  }

  while (i < n) {
    char c = line[i];
    if (isWs(c)) {
      ++i;
      continue;
    }
    if (c == '/' && i + 1 < n && line[i + 1] == '/') {
      push(TokenKind::CommentText, i, n);
      break;
    }
    if (c == '/' && i + 1 < n && line[i + 1] == '*') {
      std::size_t close = line.find("*/", i + 2);
      if (close == std::string_view::npos) {
        push(TokenKind::CommentText, i, n);
        state.inBlockComment = true;
        break;
      }
      push(TokenKind::CommentText, i, close + 2);
      i = close + 2;
      continue;
    }
    if (c == '"' || c == '\'') {
      std::size_t end = scanQuoted(line, i, c);
      if (end == std::string_view::npos) {
        push(TokenKind::Literal, i, n);
        out.lexError = true;
        break;
      }
      push(TokenKind::Literal, i, end);
      i = end;
      continue;
    }
    if (isDigit(c) || (c == '.' && i + 1 < n && isDigit(line[i + 1]))) {
      std::size_t end = scanNumber(line, i);
      push(TokenKind::Literal, i, end);
      i = end;
      continue;
    }
    if (isIdentStart(c)) {
      std::size_t j = i + 1;
      while (j < n && isIdentPart(line[j])) ++j;
      std::string_view word = line.substr(i, j - i);
      TokenKind kind = TokenKind::Identifier;
      if (kKeywords.contains(word)) kind = TokenKind::Keyword;
      else if (kWordLiterals.contains(word)) kind = TokenKind::Literal;
      push(kind, i, j);
      i = j;
      continue;
    }
    bool matched = false;
    for (std::string_view op : kMultiOps) {
      if (op.empty()) break;
      if (line.compare(i, op.size(), op) == 0) {
        push(op == "..." || op == "::" ? TokenKind::Separator : TokenKind::Operator,
             i, i + op.size());
        i += op.size();
        matched = true;
        break;
      }
    }
    if (matched) continue;
    if (isSingleOp(c)) {
      push(TokenKind::Operator, i, i + 1);
      ++i;
      continue;
    }
    if (isSeparatorChar(c)) {
      push(TokenKind::Separator, i, i + 1);
      ++i;
      continue;
    }
    // Unknown byte (unicode identifier bytes, stray backslash, ...): keep it
    // as a one-byte separator so round-trips stay loss-free.
    push(TokenKind::Separator, i, i + 1);
    ++i;
  }
  return out;
}

LineClass classifyLine(std::string_view line, int lineIndex, LexState& state) {
  LexedLine lexed = tokenizeLine(line, lineIndex, state);
  LineClass cls;
  bool hasCode = false;
  bool hasComment = false;
  for (const Token& t : lexed.tokens) {
    if (t.kind == TokenKind::CommentText) hasComment = true;
    else hasCode = true;
  }
  if (hasCode) {
    cls.kind = LineKind::Code;
    // An inline comment is a comment on a code line with code before it on
    // the same line; a continuation "int x = 1; /* which ends a block */"
    // opened earlier starts at column zero and still counts once any code
    // token precedes a comment token.
    bool codeSeen = false;
    for (const Token& t : lexed.tokens) {
      if (t.kind == TokenKind::CommentText) {
        if (codeSeen) {
          cls.inlineComment = true;
          break;
        }
      } else {
        codeSeen = true;
      }
    }
  } else if (hasComment) {
    cls.kind = LineKind::Comment;
  } else {
    cls.kind = LineKind::Blank;
  }
  return cls;
}

std::vector<std::string> splitLines(std::string_view source) {
  std::vector<std::string> lines;
  std::size_t start = 0;
  while (start <= source.size()) {
    std::size_t nl = source.find('\n', start);
    if (nl == std::string_view::npos) {
      if (start < source.size()) {
        std::string_view tail = source.substr(start);
        if (!tail.empty() && tail.back() == '\r') tail.remove_suffix(1);
        lines.emplace_back(tail);
      }
      break;
    }
    std::string_view body = source.substr(start, nl - start);
    if (!body.empty() && body.back() == '\r') body.remove_suffix(1);
    lines.emplace_back(body);
    start = nl + 1;
  }
  return lines;
}

FileLex tokenizeFile(std::string_view source) {
  FileLex out;
  std::vector<std::string> lines = splitLines(source);
  out.lines.reserve(lines.size());
  out.stateBefore.reserve(lines.size() + 1);
  LexState state;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    out.stateBefore.push_back(state);
    out.lines.push_back(tokenizeLine(lines[i], static_cast<int>(i), state));
  }
  out.stateBefore.push_back(state);
  return out;
}

}  // namespace reftrace
