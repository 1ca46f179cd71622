#pragma once

#include <algorithm>
#include <cstdint>
#include <fstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_int.hpp>

#include "qbdesign/design.hpp"
#include "qbdesign/fixtures.hpp"
#include "qbdesign/rng.hpp"

namespace qbtest {

using qbdesign::Design;
using qbdesign::Rational;
using BigQ = boost::multiprecision::cpp_rational;

// 2^k full factorial, optionally replicated; run r has factor j = bit j of r.
inline Design full_factorial(std::size_t k, std::size_t reps = 1) {
  std::vector<std::vector<int>> rows;
  for (std::size_t rep = 0; rep < reps; ++rep)
    for (std::size_t r = 0; r < (std::size_t{1} << k); ++r) {
      std::vector<int> row;
      for (std::size_t j = 0; j < k; ++j) row.push_back((r >> j) & 1 ? 1 : -1);
      rows.push_back(row);
    }
  return Design::from_rows(rows);
}

inline std::vector<std::vector<int>> rows_of(const Design& d) {
  std::vector<std::vector<int>> rows(d.runs(), std::vector<int>(d.factors()));
  for (std::size_t i = 0; i < d.runs(); ++i)
    for (std::size_t j = 0; j < d.factors(); ++j) rows[i][j] = d(i, j);
  return rows;
}

inline std::vector<std::vector<std::int64_t>> read_listing(const std::string& file) {
  std::ifstream in(qbdesign::fixture_dir() + "/" + file);
  return qbdesign::read_int_matrix(in);
}

// Small deterministic shuffles for property tests.
inline std::vector<std::size_t> permutation(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  qbdesign::SplitMix64 g(seed);
  for (std::size_t i = n; i > 1; --i) std::swap(p[i - 1], p[g.next() % i]);
  return p;
}

inline Design permute_rows(const Design& d, const std::vector<std::size_t>& p) {
  auto rows = rows_of(d);
  std::vector<std::vector<int>> out;
  for (std::size_t i : p) out.push_back(rows[i]);
  return Design::from_rows(out);
}

inline Design negate_column(const Design& d, std::size_t j) {
  auto rows = rows_of(d);
  for (auto& r : rows) r[j] = -r[j];
  return Design::from_rows(rows);
}

// Brute-force sum of (J_s/N)^2 over k-subsets straight from the definition.
inline Rational brute_b(const Design& d, std::size_t k) {
  const std::size_t m = d.factors();
  std::int64_t total = 0;
  for (std::uint32_t mask = 0; mask < (1u << m); ++mask) {
    if (static_cast<std::size_t>(__builtin_popcount(mask)) != k) continue;
    std::int64_t j = 0;
    for (std::size_t i = 0; i < d.runs(); ++i) {
      int p = 1;
      for (std::size_t f = 0; f < m; ++f)
        if (mask & (1u << f)) p *= d(i, f);
      j += p;
    }
    total += j * j;
  }
  const auto n = static_cast<std::int64_t>(d.runs());
  return Rational(total, n * n);
}

// Exact A_s: p / (N tr(M^-1)) with M = D'D - D'1 1'D / N, by Gauss-Jordan
// over arbitrary-precision rationals. Returns -1 when M is singular.
inline BigQ exact_as(const Design& d, const std::vector<qbdesign::Term>& terms) {
  const std::size_t p = terms.size(), n = d.runs();
  std::vector<std::vector<int>> col(p, std::vector<int>(n));
  for (std::size_t c = 0; c < p; ++c)
    for (std::size_t i = 0; i < n; ++i) {
      int v = d(i, terms[c].first);
      if (terms[c].is_interaction()) v *= d(i, terms[c].second);
      col[c][i] = v;
    }
  std::vector<std::vector<BigQ>> a(p, std::vector<BigQ>(2 * p));
  for (std::size_t r = 0; r < p; ++r) {
    for (std::size_t c = 0; c < p; ++c) {
      long dot = 0, sr = 0, sc = 0;
      for (std::size_t i = 0; i < n; ++i) {
        dot += col[r][i] * col[c][i];
        sr += col[r][i];
        sc += col[c][i];
      }
      a[r][c] = BigQ(dot) - BigQ(sr * sc) / BigQ(static_cast<long>(n));
    }
    a[r][p + r] = 1;
  }
  for (std::size_t c = 0; c < p; ++c) {
    std::size_t piv = c;
    while (piv < p && a[piv][c] == 0) ++piv;
    if (piv == p) return BigQ(-1);
    std::swap(a[c], a[piv]);
    const BigQ inv = BigQ(1) / a[c][c];
    for (auto& v : a[c]) v *= inv;
    for (std::size_t r = 0; r < p; ++r) {
      if (r == c || a[r][c] == 0) continue;
      const BigQ f = a[r][c];
      for (std::size_t k = 0; k < 2 * p; ++k) a[r][k] -= f * a[c][k];
    }
  }
  BigQ tr = 0;
  for (std::size_t r = 0; r < p; ++r) tr += a[r][p + r];
  return BigQ(static_cast<long>(p)) / (BigQ(static_cast<long>(n)) * tr);
}

}  // namespace qbtest
