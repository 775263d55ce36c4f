#include "reftrace/similarity.hpp"

#include <array>
#include <bit>
#include <cctype>
#include <cstdint>
#include <vector>

namespace reftrace {

std::string normalizeWhitespace(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  bool pendingSpace = false;
  for (char c : text) {
    if (std::isspace(static_cast<unsigned char>(c))) {
      pendingSpace = !out.empty();
    } else {
      if (pendingSpace) out += ' ';
      pendingSpace = false;
      out += c;
    }
  }
  return out;
}

std::size_t lcsLength(std::string_view a, std::string_view b) {
  if (a.empty() || b.empty()) return 0;
  // Keep the bit rows keyed on the shorter string.
  if (a.size() > b.size()) std::swap(a, b);

  const std::size_t m = a.size();
  const std::size_t words = (m + 63) / 64;

  // Match masks: bit i of row[c] set when a[i] == c.
  std::array<std::vector<std::uint64_t>, 256> masks;
  for (std::size_t i = 0; i < m; ++i) {
    auto& row = masks[static_cast<unsigned char>(a[i])];
    if (row.empty()) row.assign(words, 0);
    row[i / 64] |= std::uint64_t{1} << (i % 64);
  }
  static const std::vector<std::uint64_t> kZeroRow;

  // Hyyrö's bit-parallel LCS recurrence: V starts all-ones; per text char,
  // U = V & M[c]; V' = (V + U) | (V - U); zero bits of V count the LCS.
  std::vector<std::uint64_t> v(words, ~std::uint64_t{0});
  std::vector<std::uint64_t> u(words), sum(words), diff(words);
  if (m % 64 != 0) v[words - 1] = (std::uint64_t{1} << (m % 64)) - 1;
  const std::uint64_t tailMask = v[words - 1];

  for (char cb : b) {
    const auto& row = masks[static_cast<unsigned char>(cb)];
    const std::vector<std::uint64_t>& mrow = row.empty() ? kZeroRow : row;
    if (mrow.empty()) continue;  // no matches: U = 0, V unchanged

    unsigned carry = 0;   // for V + U
    unsigned borrow = 0;  // for V - U
    for (std::size_t w = 0; w < words; ++w) {
      u[w] = v[w] & mrow[w];
      std::uint64_t s = v[w] + u[w];
      unsigned c1 = s < v[w];
      std::uint64_t s2 = s + carry;
      unsigned c2 = s2 < s;
      sum[w] = s2;
      carry = c1 | c2;

      std::uint64_t d = v[w] - u[w];
      unsigned b1 = v[w] < u[w];
      std::uint64_t d2 = d - borrow;
      unsigned b2 = d < borrow;
      diff[w] = d2;
      borrow = b1 | b2;
    }
    for (std::size_t w = 0; w < words; ++w) v[w] = sum[w] | diff[w];
    v[words - 1] &= tailMask;
  }

  std::size_t ones = 0;
  for (std::uint64_t w : v) ones += static_cast<std::size_t>(std::popcount(w));
  return m - ones;
}

double lineSimilarity(std::string_view a, std::string_view b) {
  std::string na = normalizeWhitespace(a);
  std::string nb = normalizeWhitespace(b);
  if (na.empty() && nb.empty()) return 1.0;
  std::size_t lcs = lcsLength(na, nb);
  return 2.0 * static_cast<double>(lcs) /
         static_cast<double>(na.size() + nb.size());
}

}  // namespace reftrace
