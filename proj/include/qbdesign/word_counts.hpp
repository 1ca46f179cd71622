#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qbdesign/design.hpp"

namespace qbdesign {

/// Exact generalized word counts. s[k-1] = S_k = sum over k-subsets of J_s^2;
/// b_k = S_k / N^2 is derived on demand so storage keeps the fixed N^2 denominator.
struct WordCounts {
  std::size_t runs = 0;
  std::size_t factors = 0;
  std::vector<std::int64_t> s;

  std::size_t k_max() const { return s.size(); }
  std::int64_t denominator() const {
    return static_cast<std::int64_t>(runs) * static_cast<std::int64_t>(runs);
  }
  /// S_k, or 0 when k exceeds k_max (no subsets of that size were counted).
  std::int64_t S(std::size_t k) const { return k >= 1 && k <= s.size() ? s[k - 1] : 0; }
  Rational b_exact(std::size_t k) const { return Rational(S(k), denominator()); }
  double b(std::size_t k) const {
    return static_cast<double>(S(k)) / static_cast<double>(denominator());
  }

  friend bool operator==(const WordCounts&, const WordCounts&) = default;
};

/// J_s = sum_i prod_{j in s} x_ij. Factor indices are 0-based.
std::int64_t j_characteristic(const Design& d, std::span<const int> subset);

WordCounts word_counts(const Design& d, std::size_t k_max);
/// k_max = min(4, m).
WordCounts word_counts(const Design& d);

/// One line per subset in lexicographic order:
/// "s1,s2,...,sk J=<int> R=<J^2>/<N^2>", factors 1-based.
std::string word_count_dump(const Design& d, std::size_t k);

/// Word counts implied by an X^T X listing (first order: k <= 2, second order:
/// k <= min(4, m)). Every listing entry is a J-characteristic of the symmetric
/// difference of its two terms; throws InconsistentInfo if two entries that
/// should carry the same J disagree or the diagonal is not N.
WordCounts implied_word_counts(const InfoMatrix& im, std::size_t factors);

}  // namespace qbdesign
