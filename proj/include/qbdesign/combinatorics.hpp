#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

namespace qbdesign {

constexpr std::int64_t binomial(std::int64_t n, std::int64_t k) {
  if (k < 0 || n < 0 || k > n) return 0;
  if (k > n - k) k = n - k;
  std::int64_t r = 1;
  for (std::int64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

/// Advance `c` (sorted, values in [0, n)) to the next k-subset in
/// lexicographic order. Returns false after the last one.
inline bool next_combination(std::vector<int>& c, int n) {
  const int k = static_cast<int>(c.size());
  int i = k - 1;
  while (i >= 0 && c[i] == n - k + i) --i;
  if (i < 0) return false;
  ++c[i];
  for (int j = i + 1; j < k; ++j) c[j] = c[j - 1] + 1;
  return true;
}

/// Call fn(const std::vector<int>&) for every k-subset of {0..n-1} in
/// lexicographic order.
template <class Fn>
void for_each_combination(int n, int k, Fn&& fn) {
  if (k < 0 || k > n) return;
  std::vector<int> c(k);
  for (int i = 0; i < k; ++i) c[i] = i;
  do {
    fn(static_cast<const std::vector<int>&>(c));
  } while (next_combination(c, n));
}

/// Lexicographic rank of a sorted k-subset of {0..n-1}.
inline std::int64_t combination_rank(const int* c, int k, int n) {
  std::int64_t rank = 0;
  int prev = -1;
  for (int i = 0; i < k; ++i) {
    for (int v = prev + 1; v < c[i]; ++v) rank += binomial(n - 1 - v, k - 1 - i);
    prev = c[i];
  }
  return rank;
}

}  // namespace qbdesign
