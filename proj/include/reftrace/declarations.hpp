#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace reftrace {

/// Heuristic declaration index for one Java source file. This is a lexical
/// approximation, not a parse: it recognizes the declaration shapes that
/// occur in ordinary method-style code and degrades gracefully elsewhere.

struct ClassDecl {
  std::string name;
  int line = 0;
  int column = 0;
};

struct MethodDecl {
  std::string name;
  int line = 0;  // line of the method name in the signature
  int column = 0;
};

struct VariableDecl {
  std::string name;
  std::string scope;  // "field:<Class>", "local:<method>" or "init:<Class>"
  std::string typeName;  // simple base type name ("int", "List", ...), best effort
  int line = 0;
  int column = 0;
};

struct ParameterDecl {
  std::string name;
  std::string method;  // owning method name
  std::string typeName;
  int line = 0;
  int column = 0;
};

struct DeclarationIndex {
  std::vector<ClassDecl> classes;
  std::vector<MethodDecl> methods;
  std::vector<VariableDecl> variables;
  std::vector<ParameterDecl> parameters;
  /// Unbalanced braces were seen; the index is a best-effort partial result.
  bool structuralError = false;
};

DeclarationIndex extractDeclarations(std::string_view source);

}  // namespace reftrace
