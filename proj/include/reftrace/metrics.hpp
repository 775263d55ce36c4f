#pragma once

#include <string_view>

namespace reftrace {

/// Per-file line and declaration counts. Line counting uses physical lines;
/// a code line that carries a trailing comment counts as code and is
/// additionally tallied in inlineComments.
struct AbsoluteMetrics {
  int total = 0;
  int code = 0;
  int comment = 0;
  int inlineComments = 0;
  int empty = 0;
  int methods = 0;

  bool operator==(const AbsoluteMetrics&) const = default;
};

AbsoluteMetrics computeAbsoluteMetrics(std::string_view source);

/// Element-wise difference a - b, used for version-delta reporting.
AbsoluteMetrics metricsDelta(const AbsoluteMetrics& a, const AbsoluteMetrics& b);

}  // namespace reftrace
