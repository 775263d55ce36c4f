#pragma once

#include <array>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include "reftrace/lex.hpp"

namespace reftrace {

enum class ChangeType {
  Rename,
  SyntaxOnly,
  CommentChange,
  MixedChange,
  AccessChange,
  CallChange,
  ControlChange,
  LiteralChange,
  OperatorChange,
  OtherStructuralChange,
};

/// Report/CSV column order.
inline constexpr std::array<ChangeType, 10> kAllChangeTypes = {
    ChangeType::Rename,        ChangeType::SyntaxOnly,
    ChangeType::CommentChange, ChangeType::MixedChange,
    ChangeType::AccessChange,  ChangeType::CallChange,
    ChangeType::ControlChange, ChangeType::LiteralChange,
    ChangeType::OperatorChange, ChangeType::OtherStructuralChange,
};

const char* changeTypeName(ChangeType type);

/// The six subtypes aggregated as CodeChange in report groupings.
bool isCodeChange(ChangeType type);

enum class NodeCategory {
  ExpressionNode,
  ControlNode,
  CallNode,
  LiteralNode,
  DeclarationNode,
  CommentNode,
  OtherNode,
};

const char* nodeCategoryName(NodeCategory category);

struct ChangeRecord {
  int oldLine = -1;
  int newLine = -1;
  std::string oldText;
  std::string newText;
  ChangeType type = ChangeType::OtherStructuralChange;
  double similarity = 0.0;
  std::set<NodeCategory> nodeCategories;
  /// (old identifier, new identifier) pairs; non-empty whenever type is
  /// Rename, and also populated for identifier substitutions inside a
  /// MixedChange. Each instance is a separate entry (no dedup).
  std::vector<std::pair<std::string, std::string>> renameEntries;
  /// Set when a lexical failure forced the fallback classification.
  bool diagnostics = false;
};

/// Classify one changed pair. The carry states are the lexical states in
/// effect at the start of the old/new line within their respective files.
ChangeRecord classifyChange(const std::string& oldLine, const std::string& newLine,
                            LexState oldState, LexState newState, int oldIndex,
                            int newIndex);

}  // namespace reftrace
