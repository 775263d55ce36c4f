#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace reftrace {

/// Quote a CSV field if it contains a delimiter, quote or newline.
std::string csvEscape(std::string_view field);

/// Join pre-escaped-or-plain fields into one CSV line (no trailing newline).
std::string csvRow(const std::vector<std::string>& fields);

/// Split one CSV line honoring double-quote escaping.
std::vector<std::string> csvSplit(std::string_view line);

/// Fixed-precision float formatting used by every report writer, so output
/// is byte-stable across platforms and runs.
std::string formatFixed(double value);    // %.6f
std::string formatCompact(double value);  // %.6g (p-values)

}  // namespace reftrace
