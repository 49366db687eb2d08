#pragma once

// Small-set combinatorics shared by every module: sorted index subsets,
// lexicographic enumeration and ranking, and bitmask helpers.
//
// All subsets are sorted vectors of 0-based indices. Enumeration order is
// lexicographic on the sorted elements everywhere in the library, which also
// fixes the Plücker coordinate layout.

#include <algorithm>
#include <bit>
#include <cstdint>
#include <limits>
#include <numeric>
#include <stdexcept>
#include <type_traits>
#include <string>
#include <vector>

namespace lrmc {

using Subset = std::vector<int>;
using RowMask = std::uint64_t;

inline constexpr int kMaxRows = 64;

inline std::uint64_t binomial(int n, int k) {
  if (k < 0 || n < 0 || k > n) return 0;
  k = std::min(k, n - k);
  unsigned __int128 acc = 1;
  for (int i = 1; i <= k; ++i) {
    acc = acc * static_cast<unsigned>(n - k + i) / static_cast<unsigned>(i);
    if (acc > std::numeric_limits<std::uint64_t>::max())
      throw std::overflow_error("binomial coefficient overflows 64 bits");
  }
  return static_cast<std::uint64_t>(acc);
}

inline RowMask to_mask(const Subset& s) {
  RowMask mask = 0;
  for (int i : s) mask |= RowMask{1} << i;
  return mask;
}

inline Subset from_mask(RowMask mask) {
  Subset out;
  out.reserve(static_cast<std::size_t>(std::popcount(mask)));
  while (mask) {
    out.push_back(std::countr_zero(mask));
    mask &= mask - 1;
  }
  return out;
}

inline int mask_size(RowMask mask) { return std::popcount(mask); }

inline RowMask full_mask(int m) {
  return m >= 64 ? ~RowMask{0} : (RowMask{1} << m) - 1;
}

inline Subset iota_subset(int begin, int end) {
  Subset s(static_cast<std::size_t>(std::max(0, end - begin)));
  std::iota(s.begin(), s.end(), begin);
  return s;
}

/// Advances `idx` (positions into a ground set of size n) to the next k-subset
/// in lexicographic order. Returns false after the last one.
inline bool next_combination(std::vector<int>& idx, int n) {
  const int k = static_cast<int>(idx.size());
  int i = k - 1;
  while (i >= 0 && idx[static_cast<std::size_t>(i)] == n - k + i) --i;
  if (i < 0) return false;
  ++idx[static_cast<std::size_t>(i)];
  for (int j = i + 1; j < k; ++j)
    idx[static_cast<std::size_t>(j)] = idx[static_cast<std::size_t>(j - 1)] + 1;
  return true;
}

/// Calls f(const Subset&) for every size-k subset of `ground` (taken in the
/// given order) in lexicographic order of positions. f may return bool; a
/// false return stops the enumeration.
template <class F>
void for_each_combination(const Subset& ground, int k, F&& f) {
  const int n = static_cast<int>(ground.size());
  if (k < 0 || k > n) return;
  std::vector<int> idx = iota_subset(0, k);
  Subset pick(static_cast<std::size_t>(k));
  do {
    for (int t = 0; t < k; ++t)
      pick[static_cast<std::size_t>(t)] = ground[static_cast<std::size_t>(idx[static_cast<std::size_t>(t)])];
    if constexpr (std::is_same_v<std::invoke_result_t<F&, const Subset&>, bool>) {
      if (!f(static_cast<const Subset&>(pick))) return;
    } else {
      f(static_cast<const Subset&>(pick));
    }
  } while (next_combination(idx, n));
}

/// All size-k subsets of `ground` in lexicographic order; empty when the
/// ground set is too small.
inline std::vector<Subset> combinations(Subset ground, int k) {
  std::sort(ground.begin(), ground.end());
  std::vector<Subset> out;
  if (k < 0 || k > static_cast<int>(ground.size())) return out;
  out.reserve(binomial(static_cast<int>(ground.size()), k));
  for_each_combination(ground, k, [&](const Subset& s) { out.push_back(s); });
  return out;
}

/// Position of the sorted k-subset `s` of {0..m-1} in lexicographic order.
inline std::size_t subset_rank(const Subset& s, int m) {
  const int k = static_cast<int>(s.size());
  std::uint64_t rank = 0;
  int prev = -1;
  for (int i = 0; i < k; ++i) {
    const int c = s[static_cast<std::size_t>(i)];
    for (int j = prev + 1; j < c; ++j) rank += binomial(m - 1 - j, k - 1 - i);
    prev = c;
  }
  return static_cast<std::size_t>(rank);
}

/// Inverse of subset_rank.
inline Subset subset_unrank(std::size_t rank, int m, int k) {
  Subset s;
  s.reserve(static_cast<std::size_t>(k));
  std::uint64_t remaining = rank;
  int next = 0;
  for (int i = 0; i < k; ++i) {
    for (int c = next;; ++c) {
      const std::uint64_t block = binomial(m - 1 - c, k - 1 - i);
      if (remaining < block) {
        s.push_back(c);
        next = c + 1;
        break;
      }
      remaining -= block;
    }
  }
  return s;
}

inline Subset complement(const Subset& s, int m) {
  Subset out;
  out.reserve(static_cast<std::size_t>(m) - s.size());
  std::size_t p = 0;
  for (int i = 0; i < m; ++i) {
    if (p < s.size() && s[p] == i)
      ++p;
    else
      out.push_back(i);
  }
  return out;
}

/// Sign of the permutation that sorts the concatenation (s, [m] \ s).
inline int shuffle_sign(const Subset& s) {
  long inversions = 0;
  for (std::size_t i = 0; i < s.size(); ++i) inversions += s[i] - static_cast<long>(i);
  return inversions % 2 == 0 ? 1 : -1;
}

inline Subset without(const Subset& s, std::size_t pos) {
  Subset out;
  out.reserve(s.size() - 1);
  for (std::size_t i = 0; i < s.size(); ++i)
    if (i != pos) out.push_back(s[i]);
  return out;
}

inline bool is_sorted_subset(const Subset& s, int m) {
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] < 0 || s[i] >= m) return false;
    if (i > 0 && s[i - 1] >= s[i]) return false;
  }
  return true;
}

/// 1-based rendering, e.g. "{1,2,4}".
inline std::string format_subset(const Subset& s) {
  std::string out = "{";
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (i) out += ',';
    out += std::to_string(s[i] + 1);
  }
  out += '}';
  return out;
}

inline Subset to_one_based(Subset s) {
  for (int& i : s) ++i;
  return s;
}

}  // namespace lrmc
