#include "reftrace/variants.hpp"

#include <algorithm>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include <json.hpp>

#include "reftrace/declarations.hpp"
#include "reftrace/lex.hpp"

namespace reftrace {

namespace {

/// Methods whose names carry external meaning (entry point, JDK overrides);
/// renaming them would change observable behavior.
const std::unordered_set<std::string_view> kExemptMethods = {
    "main", "toString", "equals", "hashCode", "compareTo", "compare",
    "clone", "finalize", "run", "call", "iterator", "hasNext", "next",
    "close",
};

bool endsWithNewline(std::string_view source) {
  return !source.empty() && source.back() == '\n';
}

std::string joinLines(const std::vector<std::string>& lines, bool trailingNewline) {
  std::string out;
  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (i) out += '\n';
    out += lines[i];
  }
  if (trailingNewline && !lines.empty()) out += '\n';
  return out;
}

/// Rebuild one line, substituting token texts where the callback returns a
/// replacement. Bytes between tokens are preserved verbatim.
template <typename Replace>
std::string rebuildLine(const std::string& line, const std::vector<Token>& tokens,
                        Replace&& replace) {
  std::string out;
  std::size_t cursor = 0;
  for (std::size_t t = 0; t < tokens.size(); ++t) {
    const Token& tok = tokens[t];
    std::size_t begin = static_cast<std::size_t>(tok.column);
    out += line.substr(cursor, begin - cursor);
    out += replace(t, tok);
    cursor = begin + tok.text.size();
  }
  out += line.substr(cursor);
  return out;
}

std::string rightTrimmed(std::string s) {
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t')) s.pop_back();
  return s;
}

bool isBlankText(const std::string& s) {
  return s.find_first_not_of(" \t\f\v\r") == std::string::npos;
}

}  // namespace

const char* variantName(VariantId id) {
  switch (id) {
    case VariantId::Original: return "Original";
    case VariantId::Meaningless: return "Meaningless";
    case VariantId::NoComment: return "NoComment";
  }
  return "?";
}

std::optional<VariantId> variantFromName(std::string_view name) {
  if (name == "Original") return VariantId::Original;
  if (name == "Meaningless") return VariantId::Meaningless;
  if (name == "NoComment") return VariantId::NoComment;
  return std::nullopt;
}

std::string renameTableToJson(const RenameTable& table) {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [original, entry] : table.entries) {
    j[original] = {{"replacement", entry.replacement}, {"kind", entry.kind}};
  }
  return j.dump(2) + "\n";
}

RenameTable renameTableFromJson(const std::string& text) {
  RenameTable table;
  nlohmann::json j = nlohmann::json::parse(text);
  for (auto it = j.begin(); it != j.end(); ++it) {
    table.entries[it.key()] = RenameEntry{it.value().at("replacement"),
                                          it.value().at("kind")};
  }
  return table;
}

MeaninglessResult makeMeaningless(std::string_view source) {
  DeclarationIndex index = extractDeclarations(source);

  struct Slot {
    int line;
    int column;
    std::string name;
    std::string kind;
    std::string typeName;  // for variables/parameters
  };

  RenameTable table;
  std::set<std::string> replacements;
  auto assign = [&](const std::vector<Slot>& slots, const char* prefix) {
    int counter = 0;
    for (const Slot& slot : slots) {
      if (table.entries.contains(slot.name)) continue;
      std::string replacement = prefix + std::to_string(++counter);
      table.entries[slot.name] = RenameEntry{replacement, slot.kind};
      replacements.insert(std::move(replacement));
    }
  };

  std::vector<Slot> classSlots;
  for (const ClassDecl& c : index.classes)
    classSlots.push_back(Slot{c.line, c.column, c.name, "class", {}});
  std::sort(classSlots.begin(), classSlots.end(), [](const Slot& a, const Slot& b) {
    return std::tie(a.line, a.column) < std::tie(b.line, b.column);
  });
  assign(classSlots, "C");

  std::set<std::string> classNames;
  for (const ClassDecl& c : index.classes) classNames.insert(c.name);

  std::vector<Slot> methodSlots;
  for (const MethodDecl& m : index.methods) {
    if (kExemptMethods.contains(m.name)) continue;
    methodSlots.push_back(Slot{m.line, m.column, m.name, "method", {}});
  }
  std::sort(methodSlots.begin(), methodSlots.end(), [](const Slot& a, const Slot& b) {
    return std::tie(a.line, a.column) < std::tie(b.line, b.column);
  });
  assign(methodSlots, "m");

  std::vector<Slot> valueSlots;
  std::unordered_map<std::string, std::string> valueTypes;
  for (const VariableDecl& v : index.variables) {
    valueSlots.push_back(Slot{v.line, v.column, v.name, "variable", v.typeName});
    valueTypes.emplace(v.name, v.typeName);
  }
  for (const ParameterDecl& p : index.parameters) {
    valueSlots.push_back(Slot{p.line, p.column, p.name, "parameter", p.typeName});
    valueTypes.emplace(p.name, p.typeName);
  }
  std::sort(valueSlots.begin(), valueSlots.end(), [](const Slot& a, const Slot& b) {
    return std::tie(a.line, a.column) < std::tie(b.line, b.column);
  });
  assign(valueSlots, "v");

  // Apply the table line by line, preserving all bytes outside identifier
  // and comment tokens.
  std::vector<std::string> lines = splitLines(source);
  FileLex lexed = tokenizeFile(source);

  // Member accesses are renamed only when the receiver is clearly one of
  // ours: this/super, a declared class, or a value whose declared type is a
  // declared class. Anything else (library call chains) is left untouched.
  auto chainRootAllowed = [&](const std::vector<Token>& toks, std::size_t dotPos) {
    // toks[dotPos] is '.' or '::'; walk left over ident(.ident)* to the root.
    std::size_t k = dotPos;
    while (k >= 1) {
      const Token& left = toks[k - 1];
      if (k >= 2 && (toks[k - 2].text == "." || toks[k - 2].text == "::") &&
          left.kind == TokenKind::Identifier) {
        k -= 2;
        continue;
      }
      if (left.kind == TokenKind::Keyword &&
          (left.text == "this" || left.text == "super"))
        return true;
      if (left.kind == TokenKind::Identifier) {
        if (classNames.contains(left.text)) return true;
        auto it = valueTypes.find(left.text);
        return it != valueTypes.end() && classNames.contains(it->second);
      }
      return false;
    }
    return false;
  };

  int commentBlock = 0;
  bool blockOpen = false;
  std::string currentPlaceholder;

  std::vector<std::string> outLines;
  outLines.reserve(lines.size());
  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::vector<Token>& tokens = lexed.lines[li].tokens;

    // Non-comment tokens of this line, parallel index for context lookups.
    std::vector<Token> code;
    std::vector<std::size_t> codePos(tokens.size(), 0);
    for (std::size_t t = 0; t < tokens.size(); ++t) {
      if (tokens[t].kind != TokenKind::CommentText) {
        codePos[t] = code.size();
        code.push_back(tokens[t]);
      }
    }

    std::string rebuilt = rebuildLine(lines[li], tokens, [&](std::size_t t,
                                                             const Token& tok)
                                                             -> std::string {
      if (tok.kind == TokenKind::CommentText) {
        bool continuation = blockOpen;
        if (!continuation) {
          ++commentBlock;
          currentPlaceholder = "c" + std::to_string(commentBlock);
        }
        const std::string& text = tok.text;
        bool closes = text.size() >= 2 && text.ends_with("*/");
        if (text.starts_with("//")) return "// " + currentPlaceholder;
        if (continuation) {
          blockOpen = !closes;
          return closes ? currentPlaceholder + " */" : currentPlaceholder;
        }
        bool javadoc = text.starts_with("/**") && text != "/**/";
        const char* open = javadoc ? "/** " : "/* ";
        if (closes) return open + currentPlaceholder + " */";
        blockOpen = true;
        return open + currentPlaceholder;
      }
      if (tok.kind != TokenKind::Identifier) return tok.text;

      auto entry = table.entries.find(tok.text);
      bool renamed = entry != table.entries.end();
      if (renamed) {
        std::size_t c = codePos[t];
        if (c > 0 && (code[c - 1].text == "." || code[c - 1].text == "::")) {
          renamed = chainRootAllowed(code, c - 1);
        }
      }
      if (renamed) return entry->second.replacement;
      if (replacements.contains(tok.text)) throw RenameCollisionError(tok.text);
      return tok.text;
    });
    outLines.push_back(std::move(rebuilt));
  }

  MeaninglessResult result;
  result.source = joinLines(outLines, endsWithNewline(source));
  result.table = std::move(table);
  return result;
}

std::string stripComments(std::string_view source) {
  std::vector<std::string> lines = splitLines(source);
  FileLex lexed = tokenizeFile(source);

  enum class Fate { Keep, RemovedComment };
  std::vector<Fate> fates(lines.size(), Fate::Keep);
  std::vector<std::string> texts(lines.size());

  for (std::size_t li = 0; li < lines.size(); ++li) {
    const std::vector<Token>& tokens = lexed.lines[li].tokens;
    bool hasCode = false;
    bool hasComment = false;
    for (const Token& t : tokens) {
      if (t.kind == TokenKind::CommentText) hasComment = true;
      else hasCode = true;
    }
    if (!hasComment) {
      texts[li] = lines[li];
      continue;
    }
    if (!hasCode) {
      // Comment-only; interior whitespace-only lines of a block comment have
      // no tokens and fall into the hasComment==false branch above, but they
      // still belong to the removed block — handled below via the blank rule.
      fates[li] = Fate::RemovedComment;
      continue;
    }
    std::string rebuilt = rebuildLine(lines[li], tokens,
                                      [](std::size_t, const Token& tok) -> std::string {
                                        return tok.kind == TokenKind::CommentText
                                                   ? std::string()
                                                   : tok.text;
                                      });
    texts[li] = rightTrimmed(std::move(rebuilt));
  }

  // Emit, replacing a removed run that separates two non-blank lines with a
  // single blank line (only when no blank line is already adjacent).
  std::vector<std::string> out;
  out.reserve(lines.size());
  std::size_t li = 0;
  while (li < lines.size()) {
    if (fates[li] == Fate::Keep) {
      out.push_back(texts[li]);
      ++li;
      continue;
    }
    std::size_t runEnd = li;
    while (runEnd < lines.size() && fates[runEnd] == Fate::RemovedComment) ++runEnd;
    bool prevSolid = !out.empty() && !isBlankText(out.back());
    bool nextSolid = runEnd < lines.size() && fates[runEnd] == Fate::Keep &&
                     !isBlankText(texts[runEnd]);
    if (prevSolid && nextSolid) out.push_back("");
    li = runEnd;
  }

  return joinLines(out, endsWithNewline(source));
}

std::string applyRenames(std::string_view source,
                         const std::map<std::string, std::string>& mapping) {
  std::vector<std::string> lines = splitLines(source);
  FileLex lexed = tokenizeFile(source);
  std::vector<std::string> out;
  out.reserve(lines.size());
  for (std::size_t li = 0; li < lines.size(); ++li) {
    out.push_back(rebuildLine(lines[li], lexed.lines[li].tokens,
                              [&](std::size_t, const Token& tok) -> std::string {
                                if (tok.kind != TokenKind::Identifier) return tok.text;
                                auto it = mapping.find(tok.text);
                                return it == mapping.end() ? tok.text : it->second;
                              }));
  }
  return joinLines(out, endsWithNewline(source));
}

}  // namespace reftrace
