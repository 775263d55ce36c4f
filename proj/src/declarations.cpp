#include "reftrace/declarations.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <unordered_set>

#include "reftrace/lex.hpp"

namespace reftrace {

namespace {

const std::unordered_set<std::string_view> kPrimitiveTypes = {
    "boolean", "byte", "char", "short", "int", "long", "float", "double", "void",
};

bool isTypeish(const Token& p) {
  if (p.kind == TokenKind::Identifier) return true;
  if (p.kind == TokenKind::Keyword) return kPrimitiveTypes.contains(p.text);
  if (p.kind == TokenKind::Operator)
    return p.text == ">" || p.text == ">>" || p.text == ">>>";
  if (p.kind == TokenKind::Separator)
    return p.text == "]" || p.text == "...";
  return false;
}

bool isDeclTerminator(const Token& n) {
  return n.text == "=" || n.text == ";" || n.text == ":" || n.text == ",";
}

struct Ctx {
  enum Kind { Class, Method, Block } kind;
  std::string name;
};

/// Best-effort simple base type for the declaration whose name sits at
/// `namePos`: walks left over array brackets and generic arguments to the
/// underlying identifier or primitive keyword.
std::string baseTypeBefore(const std::vector<Token>& toks, std::size_t namePos) {
  if (namePos == 0) return {};
  std::size_t k = namePos - 1;
  auto text = [&](std::size_t i) -> const std::string& { return toks[i].text; };
  while (true) {
    if (text(k) == "]" || text(k) == "[") {
      if (k == 0) return {};
      --k;
      continue;
    }
    if (text(k) == ">" || text(k) == ">>" || text(k) == ">>>") {
      int depth = 0;
      while (true) {
        if (text(k) == ">") depth += 1;
        else if (text(k) == ">>") depth += 2;
        else if (text(k) == ">>>") depth += 3;
        else if (text(k) == "<") depth -= 1;
        if (depth <= 0 || k == 0) break;
        --k;
      }
      if (k == 0) return {};
      --k;
      continue;
    }
    break;
  }
  const Token& t = toks[k];
  if (t.kind == TokenKind::Identifier) return t.text;
  if (t.kind == TokenKind::Keyword && kPrimitiveTypes.contains(t.text)) return t.text;
  return {};
}

}  // namespace

DeclarationIndex extractDeclarations(std::string_view source) {
  DeclarationIndex index;
  FileLex lexed = tokenizeFile(source);

  std::vector<Token> toks;
  for (const LexedLine& line : lexed.lines) {
    for (const Token& t : line.tokens) {
      if (t.kind != TokenKind::CommentText) toks.push_back(t);
    }
  }
  const std::size_t n = toks.size();

  auto at = [&](std::size_t i) -> const Token* {
    return i < n ? &toks[i] : nullptr;
  };

  std::vector<Ctx> stack;
  std::optional<std::string> pendingClass;
  // Token index of a '{' that opens a detected method body -> method name.
  std::map<std::size_t, std::string> methodBodyBrace;
  // Parameters live inside detected signature spans; the general variable
  // rule must not re-record them.
  std::size_t suppressVarsThrough = 0;

  auto currentScope = [&]() -> std::string {
    bool sawBlock = false;
    for (auto it = stack.rbegin(); it != stack.rend(); ++it) {
      if (it->kind == Ctx::Method) return "local:" + it->name;
      if (it->kind == Ctx::Class)
        return (sawBlock ? "init:" : "field:") + it->name;
      sawBlock = true;
    }
    return "file";
  };

  // Scan a parameter list starting at the '(' token; returns the index of the
  // matching ')' (or n when unbalanced) and appends parameter names.
  auto scanParams = [&](std::size_t open, const std::string& method,
                        bool record) -> std::size_t {
    int paren = 0;
    int angle = 0;
    std::size_t lastIdent = n;
    std::size_t i = open;
    for (; i < n; ++i) {
      const Token& t = toks[i];
      if (t.text == "(") {
        ++paren;
      } else if (t.text == ")") {
        --paren;
        if (paren == 0) break;
      } else if (paren == 1) {
        if (t.text == "<") ++angle;
        else if (t.text == ">") angle = std::max(0, angle - 1);
        else if (t.text == ">>") angle = std::max(0, angle - 2);
        else if (t.text == ">>>") angle = std::max(0, angle - 3);
        else if (t.kind == TokenKind::Identifier) lastIdent = i;
        if (t.text == "," && angle == 0 && lastIdent != n && record) {
          index.parameters.push_back(ParameterDecl{toks[lastIdent].text, method,
                                                   baseTypeBefore(toks, lastIdent),
                                                   toks[lastIdent].line,
                                                   toks[lastIdent].column});
          lastIdent = n;
        }
      }
    }
    if (record && lastIdent != n && i < n) {
      index.parameters.push_back(ParameterDecl{toks[lastIdent].text, method,
                                               baseTypeBefore(toks, lastIdent),
                                               toks[lastIdent].line,
                                               toks[lastIdent].column});
    }
    return i;
  };

  for (std::size_t i = 0; i < n; ++i) {
    const Token& t = toks[i];

    if (t.kind == TokenKind::Keyword &&
        (t.text == "class" || t.text == "interface" || t.text == "enum")) {
      // ".class" literals must not shadow a declaration.
      if (i > 0 && toks[i - 1].text == ".") continue;
      if (const Token* name = at(i + 1); name && name->kind == TokenKind::Identifier) {
        index.classes.push_back(ClassDecl{name->text, name->line, name->column});
        pendingClass = name->text;
      }
      continue;
    }

    if (t.kind == TokenKind::Keyword && t.text == "catch") {
      // catch (A | B e) — the last identifier before ')' is the variable.
      if (const Token* open = at(i + 1); open && open->text == "(") {
        std::size_t close = i + 2;
        std::size_t lastIdent = n;
        int depth = 1;
        for (; close < n && depth > 0; ++close) {
          if (toks[close].text == "(") ++depth;
          else if (toks[close].text == ")") --depth;
          else if (toks[close].kind == TokenKind::Identifier) lastIdent = close;
        }
        if (lastIdent != n) {
          index.variables.push_back(VariableDecl{toks[lastIdent].text,
                                                 currentScope(),
                                                 baseTypeBefore(toks, lastIdent),
                                                 toks[lastIdent].line,
                                                 toks[lastIdent].column});
        }
      }
      continue;
    }

    if (t.text == "{" && t.kind == TokenKind::Separator) {
      if (auto it = methodBodyBrace.find(i); it != methodBodyBrace.end()) {
        stack.push_back(Ctx{Ctx::Method, it->second});
      } else if (pendingClass) {
        stack.push_back(Ctx{Ctx::Class, *pendingClass});
        pendingClass.reset();
      } else {
        stack.push_back(Ctx{Ctx::Block, ""});
      }
      continue;
    }
    if (t.text == "}" && t.kind == TokenKind::Separator) {
      if (stack.empty()) index.structuralError = true;
      else stack.pop_back();
      continue;
    }

    if (t.text == "(" && i > 0) {
      const Token& name = toks[i - 1];
      if (name.kind != TokenKind::Identifier) continue;
      const Ctx* cls = stack.empty() ? nullptr : &stack.back();
      if (!cls || cls->kind != Ctx::Class) continue;
      if (i < 2) continue;
      const Token& prev = toks[i - 2];
      bool headOk = false;
      if (prev.text == "." || prev.text == "::") {
        // a.b(x) — member call, never a declaration head.
      } else if (isTypeish(prev)) {
        // "int foo(", "List<X> foo(", "String[] foo(", "java.util.List foo(".
        headOk = true;
      } else if (name.text == cls->name &&
                 (prev.text == "public" || prev.text == "private" ||
                  prev.text == "protected" || prev.text == "{" ||
                  prev.text == "}" || prev.text == ";")) {
        headOk = true;  // constructor
      }
      if (!headOk) continue;

      std::size_t close = scanParams(i, name.text, /*record=*/false);
      if (close >= n) continue;
      // Skip an optional throws clause: throws A, b.c.D, ...
      std::size_t j = close + 1;
      if (const Token* kw = at(j); kw && kw->text == "throws") {
        ++j;
        while (const Token* tk = at(j)) {
          if (tk->kind == TokenKind::Identifier || tk->text == "." || tk->text == ",")
            ++j;
          else
            break;
        }
      }
      const Token* body = at(j);
      if (!body || body->text != "{") continue;

      index.methods.push_back(MethodDecl{name.text, name.line, name.column});
      scanParams(i, name.text, /*record=*/true);
      methodBodyBrace[j] = name.text;
      suppressVarsThrough = std::max(suppressVarsThrough, close);
      continue;
    }

    if (t.kind == TokenKind::Identifier && i > 0) {
      if (i <= suppressVarsThrough) continue;
      const Token* next = at(i + 1);
      if (!next || !isDeclTerminator(*next)) continue;
      const Token& prev = toks[i - 1];
      if (!isTypeish(prev)) continue;
      // The type of "x.y z" style declarations: ensure the previous identifier
      // is not itself a call/member tail like "a.b c" — a qualified type is
      // fine, both parse the same lexically, so accept.
      std::string scope = currentScope();
      std::string typeName = baseTypeBefore(toks, i);
      index.variables.push_back(VariableDecl{t.text, scope, typeName, t.line,
                                             t.column});

      // Walk a declarator list: int a = f(x), b, c = 2;
      std::size_t j = i + 1;
      while (j < n) {
        if (toks[j].text == ";") break;
        if (toks[j].text == ",") {
          const Token* id = at(j + 1);
          const Token* after = at(j + 2);
          if (id && id->kind == TokenKind::Identifier && after &&
              isDeclTerminator(*after) && after->text != ":") {
            index.variables.push_back(VariableDecl{id->text, scope, typeName,
                                                   id->line, id->column});
            j += 2;
            continue;
          }
          ++j;
          continue;
        }
        // Skip balanced bracket content inside initializers.
        int paren = 0, bracket = 0, brace = 0;
        bool moved = false;
        do {
          const std::string& s = toks[j].text;
          if (s == "(") ++paren;
          else if (s == ")") --paren;
          else if (s == "[") ++bracket;
          else if (s == "]") --bracket;
          else if (s == "{") ++brace;
          else if (s == "}") --brace;
          ++j;
          moved = true;
          if (paren <= 0 && bracket <= 0 && brace <= 0) break;
        } while (j < n);
        if (!moved) ++j;
        if (paren < 0) break;  // the ')' of an enclosing for-header
      }
      continue;
    }
  }

  if (!stack.empty()) index.structuralError = true;
  return index;
}

}  // namespace reftrace
