#pragma once

#include <array>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace reftrace {

enum class VariantId { Original, Meaningless, NoComment };

inline constexpr std::array<VariantId, 3> kAllVariants = {
    VariantId::Original, VariantId::Meaningless, VariantId::NoComment};

const char* variantName(VariantId id);
std::optional<VariantId> variantFromName(std::string_view name);

struct RenameEntry {
  std::string replacement;
  std::string kind;  // "class", "method", "variable" or "parameter"

  bool operator==(const RenameEntry&) const = default;
};

struct RenameTable {
  std::map<std::string, RenameEntry> entries;  // original -> replacement

  bool operator==(const RenameTable&) const = default;
};

std::string renameTableToJson(const RenameTable& table);
RenameTable renameTableFromJson(const std::string& text);

/// Raised when the deterministic scheme would make an untouched identifier
/// collide with a freshly assigned replacement name.
class RenameCollisionError : public std::runtime_error {
 public:
  explicit RenameCollisionError(const std::string& identifier)
      : std::runtime_error("rename collision on identifier '" + identifier + "'"),
        identifier_(identifier) {}
  const std::string& identifier() const { return identifier_; }

 private:
  std::string identifier_;
};

struct MeaninglessResult {
  std::string source;
  RenameTable table;
};

/// Meaningless variant: classes renamed C1.., methods m1.., variables and
/// parameters share the v1.. sequence in declaration order; comment content
/// replaced by per-block cK placeholders. Line count and per-line token-kind
/// structure are preserved.
MeaninglessResult makeMeaningless(std::string_view source);

/// NoComment variant: comment-only lines removed (a block separating two
/// non-blank lines leaves one blank line behind), inline comments stripped
/// with the code portion right-trimmed. The code token stream is unchanged.
std::string stripComments(std::string_view source);

/// Token-level rename of every identifier occurrence found in `mapping`.
/// No scoping rules; used for inverse-table verification.
std::string applyRenames(std::string_view source,
                         const std::map<std::string, std::string>& mapping);

}  // namespace reftrace
