#include "reftrace/metrics.hpp"

#include "reftrace/declarations.hpp"
#include "reftrace/lex.hpp"

namespace reftrace {

AbsoluteMetrics computeAbsoluteMetrics(std::string_view source) {
  AbsoluteMetrics m;
  LexState state;
  int lineIndex = 0;
  for (const std::string& line : splitLines(source)) {
    LineClass cls = classifyLine(line, lineIndex++, state);
    ++m.total;
    switch (cls.kind) {
      case LineKind::Code:
        ++m.code;
        if (cls.inlineComment) ++m.inlineComments;
        break;
      case LineKind::Comment:
        ++m.comment;
        break;
      case LineKind::Blank:
        ++m.empty;
        break;
    }
  }
  m.methods = static_cast<int>(extractDeclarations(source).methods.size());
  return m;
}

AbsoluteMetrics metricsDelta(const AbsoluteMetrics& a, const AbsoluteMetrics& b) {
  AbsoluteMetrics d;
  d.total = a.total - b.total;
  d.code = a.code - b.code;
  d.comment = a.comment - b.comment;
  d.inlineComments = a.inlineComments - b.inlineComments;
  d.empty = a.empty - b.empty;
  d.methods = a.methods - b.methods;
  return d;
}

}  // namespace reftrace
