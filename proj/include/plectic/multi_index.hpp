#pragma once

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <string>
#include <vector>

namespace plectic {

/// Strictly increasing index sets over {0..n-1}, n <= 8, stored as bitmasks.
/// Subsets of a fixed size k are enumerated in lexicographic order and
/// ranked through a lookup table.
class MultiIndex {
 public:
  using Mask = std::uint32_t;

  static const std::vector<Mask>& list(int n, int k) {
    static const std::vector<Mask> empty;
    if (k < 0 || k > n) return empty;
    return table(n, k).masks;
  }
  static int count(int n, int k) { return static_cast<int>(list(n, k).size()); }
  static int rank(int n, Mask mask) { return table(n, std::popcount(mask)).rank[mask]; }

  static std::vector<int> indices(Mask mask) {
    std::vector<int> out;
    for (int i = 0; mask != 0; ++i, mask >>= 1)
      if (mask & 1U) out.push_back(i);
    return out;
  }

  /// Sign of moving index j to the front of the sorted set `mask` (j not in mask).
  static int insert_sign(Mask mask, int j) {
    return (std::popcount(mask & ((Mask{1} << j) - 1U)) & 1) ? -1 : 1;
  }

  /// Sign of the shuffle that lists S then T (disjoint) in sorted order.
  static int shuffle_sign(Mask s, Mask t) {
    int inv = 0;
    for (Mask rest = s; rest != 0; rest &= rest - 1U) {
      const int i = std::countr_zero(rest);
      inv += std::popcount(t & ((Mask{1} << i) - 1U));
    }
    return (inv & 1) ? -1 : 1;
  }

  /// Position of index j inside the sorted set `mask`.
  static int position(Mask mask, int j) { return std::popcount(mask & ((Mask{1} << j) - 1U)); }

  static std::string to_string(Mask mask) {
    std::string s;
    for (int i : indices(mask)) {
      if (!s.empty()) s += ',';
      s += std::to_string(i);
    }
    return s;
  }

 private:
  struct Table {
    std::vector<Mask> masks;
    std::array<int, 256> rank{};
  };

  static const Table& table(int n, int k) {
    static const auto tables = [] {
      std::array<std::array<Table, 9>, 9> t;
      for (int nn = 0; nn <= 8; ++nn) {
        for (Mask m = 0; m < (Mask{1} << nn); ++m) t[nn][std::popcount(m)].masks.push_back(m);
        for (int kk = 0; kk <= nn; ++kk) {
          auto& tab = t[nn][kk];
          // Lexicographic order on the sorted index tuples.
          std::sort(tab.masks.begin(), tab.masks.end(), [](Mask a, Mask b) { return indices(a) < indices(b); });
          tab.rank.fill(-1);
          for (std::size_t r = 0; r < tab.masks.size(); ++r) tab.rank[tab.masks[r]] = static_cast<int>(r);
        }
      }
      return t;
    }();
    return tables[static_cast<std::size_t>(n)][static_cast<std::size_t>(k)];
  }
};

inline int binomial(int n, int k) {
  if (k < 0 || k > n) return 0;
  int r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

}  // namespace plectic
