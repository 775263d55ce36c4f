#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace reftrace {

/// Collapse runs of whitespace to single spaces and trim both ends.
std::string normalizeWhitespace(std::string_view text);

/// Length of the longest common subsequence of two byte strings.
/// Bit-parallel (word-packed) implementation; O(ceil(|a|/64) * |b|).
std::size_t lcsLength(std::string_view a, std::string_view b);

/// Dice-style line similarity over whitespace-normalized text:
/// 2*LCS(a', b') / (|a'| + |b'|); two empty lines compare as 1.
double lineSimilarity(std::string_view a, std::string_view b);

}  // namespace reftrace
