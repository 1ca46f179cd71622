#include "qbdesign/word_counts.hpp"

#include <algorithm>
#include <map>
#include <sstream>

#include "qbdesign/combinatorics.hpp"
#include "qbdesign/error.hpp"

namespace qbdesign {

std::int64_t j_characteristic(const Design& d, std::span<const int> subset) {
  if (subset.empty()) throw BadSubset("subset is empty");
  std::vector<int> seen;
  for (int j : subset) {
    if (j < 0 || static_cast<std::size_t>(j) >= d.factors())
      throw BadSubset("factor index " + std::to_string(j + 1) + " out of range");
    if (std::find(seen.begin(), seen.end(), j) != seen.end())
      throw BadSubset("factor index " + std::to_string(j + 1) + " repeated");
    seen.push_back(j);
  }
  std::int64_t total = 0;
  for (std::size_t i = 0; i < d.runs(); ++i) {
    int p = 1;
    for (int j : subset) p *= d(i, j);
    total += p;
  }
  return total;
}

namespace {

// Depth-first walk over subsets in lexicographic order carrying the running
// row product, so each subset costs O(N).
void accumulate(const Design& d, std::size_t k_max, int start, std::size_t depth,
                std::vector<int>& prod, std::vector<std::int64_t>& s) {
  const std::size_t n = d.runs();
  const int m = static_cast<int>(d.factors());
  std::vector<int> next(n);
  for (int j = start; j < m; ++j) {
    std::int64_t js = 0;
    for (std::size_t i = 0; i < n; ++i) {
      next[i] = prod[i] * d(i, j);
      js += next[i];
    }
    s[depth] += js * js;
    if (depth + 1 < k_max) accumulate(d, k_max, j + 1, depth + 1, next, s);
  }
}

}  // namespace

WordCounts word_counts(const Design& d, std::size_t k_max) {
  if (k_max < 1 || k_max > d.factors())
    throw InvalidArgument("k_max must lie in 1..m");
  WordCounts w{d.runs(), d.factors(), std::vector<std::int64_t>(k_max, 0)};
  std::vector<int> ones(d.runs(), 1);
  accumulate(d, k_max, 0, 0, ones, w.s);
  return w;
}

WordCounts word_counts(const Design& d) {
  return word_counts(d, std::min<std::size_t>(4, d.factors()));
}

std::string word_count_dump(const Design& d, std::size_t k) {
  if (k < 1 || k > d.factors()) throw InvalidArgument("k must lie in 1..m");
  std::ostringstream out;
  const auto n2 = static_cast<std::int64_t>(d.runs() * d.runs());
  for_each_combination(static_cast<int>(d.factors()), static_cast<int>(k),
                       [&](const std::vector<int>& c) {
                         std::int64_t j = j_characteristic(d, c);
                         for (std::size_t t = 0; t < c.size(); ++t)
                           out << (t ? "," : "") << c[t] + 1;
                         out << " J=" << j << " R=" << j * j << "/" << n2 << "\n";
                       });
  return out.str();
}

WordCounts implied_word_counts(const InfoMatrix& im, std::size_t factors) {
  if (factors > 63) throw TooLarge("too many factors for subset masks");
  const auto& terms = im.terms();
  const std::size_t p = im.size();
  auto mask = [&](std::size_t idx) -> std::uint64_t {
    if (idx == 0) return 0;
    const Term& t = terms[idx - 1];
    if (t.first < 0 || static_cast<std::size_t>(t.first) >= factors ||
        (t.is_interaction() && static_cast<std::size_t>(t.second) >= factors))
      throw DimensionMismatch("listing terms exceed the factor count");
    std::uint64_t v = std::uint64_t{1} << t.first;
    if (t.is_interaction()) v |= std::uint64_t{1} << t.second;
    return v;
  };

  const auto n = static_cast<std::int64_t>(im.runs());
  std::map<std::uint64_t, std::int64_t> js;
  for (std::size_t r = 0; r < p; ++r) {
    for (std::size_t c = 0; c < p; ++c) {
      std::int64_t a = im(r, c);
      if (a != im(c, r))
        throw InconsistentInfo("listing is not symmetric at (" + std::to_string(r) + "," +
                               std::to_string(c) + ")");
      std::uint64_t s = mask(r) ^ mask(c);
      if (s == 0) {
        if (a != n)
          throw InconsistentInfo("entry (" + std::to_string(r) + "," + std::to_string(c) +
                                 ") should equal N");
        continue;
      }
      auto [it, fresh] = js.emplace(s, a);
      if (!fresh && it->second != a)
        throw InconsistentInfo("entries for the same factor subset disagree at (" +
                               std::to_string(r) + "," + std::to_string(c) + ")");
    }
  }

  bool second = std::any_of(terms.begin(), terms.end(),
                            [](const Term& t) { return t.is_interaction(); });
  std::size_t k_max = second ? std::min<std::size_t>(4, factors) : std::min<std::size_t>(2, factors);
  WordCounts w{im.runs(), factors, std::vector<std::int64_t>(k_max, 0)};
  std::vector<std::int64_t> seen(k_max, 0);
  for (const auto& [s, j] : js) {
    auto k = static_cast<std::size_t>(__builtin_popcountll(s));
    if (k > k_max) continue;
    w.s[k - 1] += j * j;
    ++seen[k - 1];
  }
  for (std::size_t k = 1; k <= k_max; ++k) {
    if (seen[k - 1] != binomial(static_cast<std::int64_t>(factors), static_cast<std::int64_t>(k)))
      throw InconsistentInfo("listing does not determine every " + std::to_string(k) +
                             "-factor J-characteristic");
  }
  return w;
}

}  // namespace qbdesign
