#include "reftrace/classify.hpp"

#include <algorithm>
#include <map>
#include <unordered_set>

#include "reftrace/similarity.hpp"

namespace reftrace {

namespace {

const std::unordered_set<std::string_view> kControlKeywords = {
    "if", "else", "switch", "case", "default", "for", "while", "do",
    "break", "continue", "return", "throw", "try", "catch", "finally",
};

/// Method names treated as data-structure/collection accesses rather than
/// general calls, so `map.get(k)` vs `map.getOrDefault(k, 0)` lands in
/// AccessChange while `parse(x)` vs `read(x)` lands in CallChange.
const std::unordered_set<std::string_view> kCollectionMethods = {
    "get", "set", "put", "add", "remove", "contains", "containsKey",
    "containsValue", "indexOf", "lastIndexOf", "charAt", "push", "pop",
    "peek", "poll", "offer", "offerFirst", "offerLast", "pollFirst",
    "pollLast", "addFirst", "addLast", "removeFirst", "removeLast",
    "getFirst", "getLast", "getOrDefault", "putIfAbsent", "subList",
    "element",
};

bool isControlKeyword(const Token& t) {
  return t.kind == TokenKind::Keyword && kControlKeywords.contains(t.text);
}

struct TokenView {
  std::vector<Token> code;        // non-comment tokens
  std::vector<std::string> comments;  // whitespace-normalized comment texts
};

TokenView viewOf(const LexedLine& lexed) {
  TokenView v;
  for (const Token& t : lexed.tokens) {
    if (t.kind == TokenKind::CommentText) {
      v.comments.push_back(normalizeWhitespace(t.text));
    } else {
      v.code.push_back(t);
    }
  }
  return v;
}

bool sameToken(const Token& a, const Token& b) {
  return a.kind == b.kind && a.text == b.text;
}

bool sameStream(const std::vector<Token>& a, const std::vector<Token>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (!sameToken(a[i], b[i])) return false;
  return true;
}

/// Indices of tokens on each side that are not part of a longest common
/// subsequence of the two streams (compared by kind+text).
std::pair<std::vector<std::size_t>, std::vector<std::size_t>> tokenDiff(
    const std::vector<Token>& a, const std::vector<Token>& b) {
  const std::size_t n = a.size(), m = b.size();
  std::vector<std::vector<int>> dp(n + 1, std::vector<int>(m + 1, 0));
  for (std::size_t i = 1; i <= n; ++i)
    for (std::size_t j = 1; j <= m; ++j)
      dp[i][j] = sameToken(a[i - 1], b[j - 1])
                     ? dp[i - 1][j - 1] + 1
                     : std::max(dp[i - 1][j], dp[i][j - 1]);
  std::vector<bool> inLcsA(n, false), inLcsB(m, false);
  std::size_t i = n, j = m;
  while (i > 0 && j > 0) {
    if (sameToken(a[i - 1], b[j - 1])) {
      inLcsA[i - 1] = inLcsB[j - 1] = true;
      --i, --j;
    } else if (dp[i - 1][j] >= dp[i][j - 1]) {
      --i;
    } else {
      --j;
    }
  }
  std::pair<std::vector<std::size_t>, std::vector<std::size_t>> out;
  for (std::size_t k = 0; k < n; ++k)
    if (!inLcsA[k]) out.first.push_back(k);
  for (std::size_t k = 0; k < m; ++k)
    if (!inLcsB[k]) out.second.push_back(k);
  return out;
}

std::vector<std::string> controlSequence(const std::vector<Token>& code) {
  std::vector<std::string> seq;
  for (const Token& t : code)
    if (isControlKeyword(t)) seq.push_back(t.text);
  return seq;
}

std::vector<std::string> nonControlKeywordSequence(const std::vector<Token>& code) {
  std::vector<std::string> seq;
  for (const Token& t : code)
    if (t.kind == TokenKind::Keyword && !kControlKeywords.contains(t.text))
      seq.push_back(t.text);
  return seq;
}

std::vector<std::string> braceSequence(const std::vector<Token>& code) {
  std::vector<std::string> seq;
  for (const Token& t : code)
    if (t.text == "{" || t.text == "}") seq.push_back(t.text);
  return seq;
}

/// Call sites as "callee/arity" strings, in order. Line-truncated calls get a
/// '+' suffix (arity is a lower bound). `collection` selects the subset used
/// for access detection vs. general call detection.
std::vector<std::string> callSites(const std::vector<Token>& code, bool collection) {
  std::vector<std::string> sites;
  for (std::size_t k = 0; k + 1 < code.size(); ++k) {
    if (code[k].kind != TokenKind::Identifier || code[k + 1].text != "(") continue;
    bool isCollection = kCollectionMethods.contains(code[k].text);
    if (isCollection != collection) continue;
    int depth = 0;
    int commas = 0;
    bool open = true;
    bool empty = true;
    for (std::size_t j = k + 1; j < code.size(); ++j) {
      if (code[j].text == "(") {
        ++depth;
      } else if (code[j].text == ")") {
        if (--depth == 0) {
          open = false;
          break;
        }
        empty = false;
      } else {
        if (depth == 1 && code[j].text == ",") ++commas;
        empty = false;
      }
    }
    int arity = empty ? 0 : commas + 1;
    sites.push_back(code[k].text + "/" + std::to_string(arity) + (open ? "+" : ""));
  }
  return sites;
}

/// Indexing expressions like a[i+1] (and a[i][j]) rendered as token-joined
/// spans. Type uses (String[] x, new int[n]) are not accesses.
std::vector<std::string> indexSpans(const std::vector<Token>& code) {
  std::vector<std::string> spans;
  for (std::size_t k = 0; k + 1 < code.size(); ++k) {
    if (code[k].kind != TokenKind::Identifier || code[k + 1].text != "[") continue;
    if (k > 0 && code[k - 1].text == "new") continue;
    std::string span = code[k].text;
    bool nonEmpty = false;
    bool truncated = false;
    std::size_t j = k + 1;
    while (j < code.size() && code[j].text == "[" && !truncated) {
      int depth = 0;
      for (; j < code.size(); ++j) {
        span += code[j].text;
        if (code[j].text == "[") {
          ++depth;
        } else if (code[j].text == "]") {
          if (--depth == 0) {
            ++j;
            break;
          }
        } else {
          nonEmpty = true;
        }
      }
      truncated = depth != 0;
    }
    if (!nonEmpty) continue;
    spans.push_back(span);
    k = j - 1;
  }
  return spans;
}

/// Member-access chains: root(.member)+ with this/super allowed as roots.
/// A member that is immediately called is excluded from the chain (it is a
/// call site instead), but the receiver prefix still counts: map.get(k)
/// contributes the chain "map".
std::vector<std::string> memberChains(const std::vector<Token>& code) {
  std::vector<std::string> chains;
  auto isRoot = [](const Token& t) {
    return t.kind == TokenKind::Identifier ||
           (t.kind == TokenKind::Keyword && (t.text == "this" || t.text == "super"));
  };
  std::size_t k = 0;
  while (k < code.size()) {
    if (!isRoot(code[k]) || k + 2 >= code.size() || code[k + 1].text != "." ||
        code[k + 2].kind != TokenKind::Identifier) {
      ++k;
      continue;
    }
    std::string chain = code[k].text;
    std::size_t members = 0;
    bool calledTail = false;
    std::size_t j = k;
    while (j + 2 < code.size() && code[j + 1].text == "." &&
           code[j + 2].kind == TokenKind::Identifier) {
      if (j + 3 < code.size() && code[j + 3].text == "(") {
        calledTail = true;  // code[j + 2] is a callee, not a member access
        break;
      }
      chain += "." + code[j + 2].text;
      ++members;
      j += 2;
    }
    if (members > 0 || calledTail) chains.push_back(chain);
    k = j + 1;
  }
  return chains;
}

NodeCategory categoryFor(const std::vector<Token>& code, std::size_t idx) {
  const Token& t = code[idx];
  switch (t.kind) {
    case TokenKind::Keyword:
      return kControlKeywords.contains(t.text) ? NodeCategory::ControlNode
                                               : NodeCategory::DeclarationNode;
    case TokenKind::Literal:
      return NodeCategory::LiteralNode;
    case TokenKind::Operator:
      return NodeCategory::ExpressionNode;
    case TokenKind::Identifier:
      return (idx + 1 < code.size() && code[idx + 1].text == "(")
                 ? NodeCategory::CallNode
                 : NodeCategory::ExpressionNode;
    case TokenKind::Separator:
      return NodeCategory::OtherNode;
    case TokenKind::CommentText:
      return NodeCategory::CommentNode;
  }
  return NodeCategory::OtherNode;
}

}  // namespace

const char* changeTypeName(ChangeType type) {
  switch (type) {
    case ChangeType::Rename: return "Rename";
    case ChangeType::SyntaxOnly: return "SyntaxOnly";
    case ChangeType::CommentChange: return "CommentChange";
    case ChangeType::MixedChange: return "MixedChange";
    case ChangeType::AccessChange: return "AccessChange";
    case ChangeType::CallChange: return "CallChange";
    case ChangeType::ControlChange: return "ControlChange";
    case ChangeType::LiteralChange: return "LiteralChange";
    case ChangeType::OperatorChange: return "OperatorChange";
    case ChangeType::OtherStructuralChange: return "OtherStructuralChange";
  }
  return "?";
}

bool isCodeChange(ChangeType type) {
  switch (type) {
    case ChangeType::AccessChange:
    case ChangeType::CallChange:
    case ChangeType::ControlChange:
    case ChangeType::LiteralChange:
    case ChangeType::OperatorChange:
    case ChangeType::OtherStructuralChange:
      return true;
    default:
      return false;
  }
}

const char* nodeCategoryName(NodeCategory category) {
  switch (category) {
    case NodeCategory::ExpressionNode: return "ExpressionNode";
    case NodeCategory::ControlNode: return "ControlNode";
    case NodeCategory::CallNode: return "CallNode";
    case NodeCategory::LiteralNode: return "LiteralNode";
    case NodeCategory::DeclarationNode: return "DeclarationNode";
    case NodeCategory::CommentNode: return "CommentNode";
    case NodeCategory::OtherNode: return "OtherNode";
  }
  return "?";
}

ChangeRecord classifyChange(const std::string& oldLine, const std::string& newLine,
                            LexState oldState, LexState newState, int oldIndex,
                            int newIndex) {
  ChangeRecord rec;
  rec.oldLine = oldIndex;
  rec.newLine = newIndex;
  rec.oldText = oldLine;
  rec.newText = newLine;
  rec.similarity = lineSimilarity(oldLine, newLine);

  LexedLine lexedOld = tokenizeLine(oldLine, oldIndex, oldState);
  LexedLine lexedNew = tokenizeLine(newLine, newIndex, newState);
  if (lexedOld.lexError || lexedNew.lexError) {
    rec.type = ChangeType::OtherStructuralChange;
    rec.diagnostics = true;
    rec.nodeCategories.insert(NodeCategory::OtherNode);
    return rec;
  }

  TokenView oldView = viewOf(lexedOld);
  TokenView newView = viewOf(lexedNew);

  bool commentFires = oldView.comments != newView.comments;

  // (1) identical code streams: SyntaxOnly or CommentChange.
  if (sameStream(oldView.code, newView.code)) {
    if (!commentFires) {
      rec.type = ChangeType::SyntaxOnly;
      rec.nodeCategories.insert(NodeCategory::OtherNode);
    } else {
      rec.type = ChangeType::CommentChange;
      rec.nodeCategories.insert(NodeCategory::CommentNode);
    }
    return rec;
  }

  bool identFires = false;
  bool identConsistent = true;
  bool literalFires = false, operatorFires = false, controlFires = false;
  bool callFires = false, accessFires = false, otherStructFires = false;

  bool sameShape = oldView.code.size() == newView.code.size();
  if (sameShape) {
    for (std::size_t k = 0; k < oldView.code.size(); ++k)
      if (oldView.code[k].kind != newView.code[k].kind) {
        sameShape = false;
        break;
      }
  }

  if (sameShape) {
    std::map<std::string, std::string> mapping;
    for (std::size_t k = 0; k < oldView.code.size(); ++k) {
      const Token& a = oldView.code[k];
      const Token& b = newView.code[k];
      if (a.text == b.text) continue;
      switch (a.kind) {
        case TokenKind::Identifier: {
          identFires = true;
          rec.renameEntries.emplace_back(a.text, b.text);
          auto [it, added] = mapping.emplace(a.text, b.text);
          if (!added && it->second != b.text) identConsistent = false;
          rec.nodeCategories.insert(categoryFor(oldView.code, k));
          break;
        }
        case TokenKind::Literal:
          literalFires = true;
          rec.nodeCategories.insert(NodeCategory::LiteralNode);
          break;
        case TokenKind::Operator:
          operatorFires = true;
          rec.nodeCategories.insert(NodeCategory::ExpressionNode);
          break;
        case TokenKind::Keyword:
          if (isControlKeyword(a) || isControlKeyword(b)) {
            controlFires = true;
            rec.nodeCategories.insert(NodeCategory::ControlNode);
          } else {
            otherStructFires = true;
            rec.nodeCategories.insert(NodeCategory::DeclarationNode);
          }
          break;
        case TokenKind::Separator:
          otherStructFires = true;
          rec.nodeCategories.insert(NodeCategory::OtherNode);
          break;
        case TokenKind::CommentText:
          break;  // unreachable: comments are not in the code stream
      }
    }
  } else {
    auto [oldDiff, newDiff] = tokenDiff(oldView.code, newView.code);

    controlFires = controlSequence(oldView.code) != controlSequence(newView.code);
    callFires = callSites(oldView.code, false) != callSites(newView.code, false);
    accessFires = callSites(oldView.code, true) != callSites(newView.code, true) ||
                  indexSpans(oldView.code) != indexSpans(newView.code) ||
                  memberChains(oldView.code) != memberChains(newView.code);

    bool allLiterals = !oldDiff.empty() || !newDiff.empty();
    bool allOperators = allLiterals;
    for (std::size_t k : oldDiff) {
      if (oldView.code[k].kind != TokenKind::Literal) allLiterals = false;
      if (oldView.code[k].kind != TokenKind::Operator) allOperators = false;
    }
    for (std::size_t k : newDiff) {
      if (newView.code[k].kind != TokenKind::Literal) allLiterals = false;
      if (newView.code[k].kind != TokenKind::Operator) allOperators = false;
    }
    literalFires = allLiterals;
    operatorFires = allOperators;

    otherStructFires =
        nonControlKeywordSequence(oldView.code) != nonControlKeywordSequence(newView.code) ||
        braceSequence(oldView.code) != braceSequence(newView.code);

    for (std::size_t k : oldDiff) rec.nodeCategories.insert(categoryFor(oldView.code, k));
    for (std::size_t k : newDiff) rec.nodeCategories.insert(categoryFor(newView.code, k));

    if (!controlFires && !callFires && !accessFires && !literalFires &&
        !operatorFires && !otherStructFires) {
      otherStructFires = true;  // residual structural difference
    }
  }

  if (commentFires) rec.nodeCategories.insert(NodeCategory::CommentNode);

  int fired = (commentFires ? 1 : 0) + (identFires ? 1 : 0) + (literalFires ? 1 : 0) +
              (operatorFires ? 1 : 0) + (controlFires ? 1 : 0) + (callFires ? 1 : 0) +
              (accessFires ? 1 : 0) + (otherStructFires ? 1 : 0);

  if (identFires && identConsistent && fired == 1) {
    rec.type = ChangeType::Rename;
  } else if (fired >= 2) {
    rec.type = ChangeType::MixedChange;
  } else if (controlFires) {
    rec.type = ChangeType::ControlChange;
  } else if (callFires) {
    rec.type = ChangeType::CallChange;
  } else if (accessFires) {
    rec.type = ChangeType::AccessChange;
  } else if (literalFires) {
    rec.type = ChangeType::LiteralChange;
  } else if (operatorFires) {
    rec.type = ChangeType::OperatorChange;
  } else {
    // Residual, including inconsistent identifier-only substitutions.
    rec.type = ChangeType::OtherStructuralChange;
  }
  if (rec.nodeCategories.empty()) rec.nodeCategories.insert(NodeCategory::OtherNode);
  return rec;
}

}  // namespace reftrace
