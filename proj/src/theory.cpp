#include "qbdesign/theory.hpp"

#include <boost/rational.hpp>

#include "qbdesign/error.hpp"

namespace qbdesign {

namespace {

void require_congruence(std::size_t runs) {
  if (runs % 4 != 2)
    throw BadCongruence("N = " + std::to_string(runs) + " is not 2 mod 4");
}

}  // namespace

std::size_t BalanceIntervals::locate(const Rational& pi1) const {
  for (std::size_t k = 1; k + 1 < endpoints.size(); ++k)
    if (pi1 <= endpoints[k]) return k;
  return endpoints.size() - 1;
}

std::size_t BalanceIntervals::locate(double pi1) const {
  for (std::size_t k = 1; k + 1 < endpoints.size(); ++k)
    if (pi1 <= boost::rational_cast<double>(endpoints[k])) return k;
  return endpoints.size() - 1;
}

BalanceIntervals balance_intervals(std::size_t runs, std::size_t factors) {
  require_congruence(runs);
  if (factors < 1 || factors > runs - 1)
    throw InvalidArgument("m must lie in 1..N-1");
  BalanceIntervals bi;
  bi.runs = runs;
  bi.factors = factors;
  bi.K = factors % 2 ? (factors + 1) / 2 : factors / 2 + 1;
  const auto m = static_cast<std::int64_t>(factors);
  bi.endpoints.push_back(Rational(0));
  for (std::size_t k = 1; k < bi.K; ++k)
    bi.endpoints.push_back(Rational(1, 2 * m + 2 - 4 * static_cast<std::int64_t>(k)));
  bi.endpoints.push_back(Rational(1));
  for (std::size_t k = 1; k <= bi.K; ++k)
    bi.intervals.push_back({bi.endpoints[k - 1], bi.endpoints[k], k - 1, factors - k + 1});
  return bi;
}

bool lemma_feasible(std::size_t factors, std::size_t n1) {
  return n1 <= factors && 2 * n1 >= factors;
}

std::size_t optimal_level_balanced(std::size_t runs, std::size_t factors, const Rational& pi1) {
  std::size_t best = factors;
  Rational best_v = qb_block_value(runs, factors, factors, pi1);
  for (std::size_t n1 = factors; n1-- > 0;) {
    Rational v = qb_block_value(runs, factors, n1, pi1);
    if (v < best_v) {
      best_v = v;
      best = n1;
    }
  }
  return best;
}

std::size_t optimal_level_balanced(std::size_t runs, std::size_t factors, double pi1) {
  std::size_t best = factors;
  double best_v = qb_block_value(runs, factors, factors, pi1);
  for (std::size_t n1 = factors; n1-- > 0;) {
    double v = qb_block_value(runs, factors, n1, pi1);
    if (v < best_v) {
      best_v = v;
      best = n1;
    }
  }
  return best;
}

const char* to_string(BlockSign s) {
  switch (s) {
    case BlockSign::Either: return "either";
    case BlockSign::Plus: return "+2";
    case BlockSign::Minus: return "-2";
    case BlockSign::Mixed: return "mixed";
  }
  return "?";
}

namespace {

void note_sign(BlockSign& s, std::int64_t a) {
  BlockSign here = a > 0 ? BlockSign::Plus : BlockSign::Minus;
  if (s == BlockSign::Either)
    s = here;
  else if (s != here)
    s = BlockSign::Mixed;
}

}  // namespace

PatternReport verify_block_pattern(const InfoMatrix& im) {
  require_congruence(im.runs());
  const auto n = static_cast<std::int64_t>(im.runs());
  // info-matrix index of each main effect
  std::vector<std::size_t> idx;
  for (std::size_t t = 0; t < im.terms().size(); ++t)
    if (!im.terms()[t].is_interaction()) idx.push_back(t + 1);

  PatternReport rep;
  // group 1: balanced parity (odd count of +1); group 0: intercept parity
  std::vector<int> group(idx.size());
  for (std::size_t f = 0; f < idx.size(); ++f) {
    const std::int64_t plus = (n + im(0, idx[f])) / 2;
    group[f] = plus % 2 != 0 ? 1 : 0;
    (group[f] ? rep.level_balanced : rep.unbalanced).push_back(f);
  }
  rep.n1 = rep.level_balanced.size();

  auto check = [&](std::size_t i, std::size_t j, bool same) {
    const std::int64_t a = im(i, j);
    const std::int64_t want = same ? 2 : 0;
    if ((a < 0 ? -a : a) != want) rep.violations.push_back({i, j, a, want});
  };
  for (std::size_t f = 0; f < idx.size(); ++f) {
    const bool same = group[f] == 0;
    check(0, idx[f], same);
    if (same && im(0, idx[f]) != 0) note_sign(rep.unbalanced_sign, im(0, idx[f]));
  }
  for (std::size_t f = 0; f < idx.size(); ++f) {
    for (std::size_t g = f + 1; g < idx.size(); ++g) {
      const bool same = group[f] == group[g];
      check(idx[f], idx[g], same);
      const std::int64_t a = im(idx[f], idx[g]);
      if (same && a != 0) note_sign(group[f] ? rep.balanced_sign : rep.unbalanced_sign, a);
    }
  }
  rep.matches = rep.violations.empty();
  return rep;
}

PatternReport verify_block_pattern(const Design& d) {
  require_congruence(d.runs());
  return verify_block_pattern(information_matrix(d, ModelOrder::FirstOrder));
}

std::size_t SaturatedTable::level_balanced_for(double pi1) const {
  for (std::size_t k = 1; k + 1 < endpoints.size(); ++k)
    if (pi1 <= boost::rational_cast<double>(endpoints[k])) return level_balanced[k - 1];
  return level_balanced.back();
}

const SaturatedTable& saturated_n10_m9() {
  static const SaturatedTable t{
      10, 9,
      {Rational(0), Rational(1, 16), Rational(1, 12), Rational(1, 8), Rational(1, 4), Rational(1)},
      {9, 8, 7, 6, 5}};
  return t;
}

}  // namespace qbdesign
