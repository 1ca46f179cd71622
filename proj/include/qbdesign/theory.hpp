#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include "qbdesign/design.hpp"

namespace qbdesign {

struct BalanceInterval {
  Rational lo, hi;
  std::size_t non_level_balanced = 0;
  std::size_t level_balanced = 0;
};

struct BalanceIntervals {
  std::size_t runs = 0;
  std::size_t factors = 0;
  std::size_t K = 0;
  std::vector<Rational> endpoints;  // alpha_0 = 0 < ... < alpha_K = 1
  std::vector<BalanceInterval> intervals;

  /// 1-based interval holding pi1, taking (lo, hi] (the first interval is (0, hi]).
  std::size_t locate(double pi1) const;
  std::size_t locate(const Rational& pi1) const;
};

/// Interval k (1-based) has k-1 non-level-balanced factors; endpoints
/// alpha_k = 1/(2m+2-4k). Throws BadCongruence unless N = 2 mod 4.
BalanceIntervals balance_intervals(std::size_t runs, std::size_t factors);

/// Q_B of a design whose main-effect information matrix has the two-block
/// form with n1 level-balanced columns:
/// [4 pi (m - n1) + 4 pi^2 ((m - n1)^2 + n1^2 - m)] / N^2.
template <class T>
T qb_block_value(std::size_t runs, std::size_t factors, std::size_t n1, const T& pi1) {
  const auto m = static_cast<std::int64_t>(factors);
  const auto l = static_cast<std::int64_t>(n1);
  const auto n = static_cast<std::int64_t>(runs);
  const T u = T(m - l);
  return (T(4) * pi1 * u + T(4) * pi1 * pi1 * (u * u + T(l * l) - T(m))) / T(n * n);
}

/// Whether n1 lies in the range for which the block form is attainable:
/// ceil(m/2) <= n1 <= m.
bool lemma_feasible(std::size_t factors, std::size_t n1);

/// argmin over n1 = 0..m of qb_block_value; ties resolve to the larger n1.
std::size_t optimal_level_balanced(std::size_t runs, std::size_t factors, const Rational& pi1);
std::size_t optimal_level_balanced(std::size_t runs, std::size_t factors, double pi1);

enum class BlockSign { Either, Plus, Minus, Mixed };
const char* to_string(BlockSign s);

struct PatternViolation {
  std::size_t i = 0, j = 0;  // info-matrix indices, 0 = intercept
  std::int64_t a = 0;
  std::int64_t expected_abs = 0;
};

struct PatternReport {
  bool matches = false;
  std::size_t n1 = 0;  // level-balanced group size
  std::vector<std::size_t> level_balanced;  // 0-based factors in the balanced group
  std::vector<std::size_t> unbalanced;
  BlockSign balanced_sign = BlockSign::Either;
  BlockSign unbalanced_sign = BlockSign::Either;  // includes the intercept row
  std::vector<PatternViolation> violations;
};

/// Checks the two-block main-effect form. Columns are grouped by the parity
/// of their count of +1 entries; within a group every off-diagonal entry must
/// have magnitude 2 and across groups it must be 0. The intercept joins the
/// group of unbalanced columns. Only main-effect rows of `im` are used.
PatternReport verify_block_pattern(const InfoMatrix& im);
PatternReport verify_block_pattern(const Design& d);

/// Stored interval table for the saturated case N = 10, m = 9.
struct SaturatedTable {
  std::size_t runs = 10;
  std::size_t factors = 9;
  std::vector<Rational> endpoints;
  std::vector<std::size_t> level_balanced;  // per interval

  std::size_t level_balanced_for(double pi1) const;
};

const SaturatedTable& saturated_n10_m9();

}  // namespace qbdesign
