#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <boost/rational.hpp>

namespace qbdesign {

using Rational = boost::rational<std::int64_t>;

std::string to_string(const Rational& r);

enum class ModelOrder { FirstOrder = 1, SecondOrder = 2 };

/// N x m matrix of +/-1 run settings. Immutable once built.
class Design {
 public:
  Design(std::size_t runs, std::size_t factors, std::vector<std::int8_t> entries);

  static Design from_rows(const std::vector<std::vector<int>>& rows);

  std::size_t runs() const { return runs_; }
  std::size_t factors() const { return factors_; }

  int operator()(std::size_t run, std::size_t factor) const {
    return x_[run * factors_ + factor];
  }

  /// Row-major entries.
  std::span<const std::int8_t> entries() const { return x_; }

  /// Copy with entry (run, factor) negated.
  Design flipped(std::size_t run, std::size_t factor) const;

  /// Copy keeping the listed factor columns (0-based) in the given order.
  Design select_factors(std::span<const std::size_t> columns) const;

  /// Column sum of factor j.
  int column_sum(std::size_t factor) const;

  friend bool operator==(const Design&, const Design&) = default;

 private:
  std::size_t runs_;
  std::size_t factors_;
  std::vector<std::int8_t> x_;
};

/// A model term: a main effect (second < 0) or a two-factor interaction.
/// Factor indices are 0-based.
struct Term {
  int first = 0;
  int second = -1;

  static Term main(int factor) { return {factor, -1}; }
  static Term interaction(int a, int b) { return {a < b ? a : b, a < b ? b : a}; }

  bool is_interaction() const { return second >= 0; }
  int order() const { return is_interaction() ? 2 : 1; }
  bool shares_factor(const Term& o) const;

  friend bool operator==(const Term&, const Term&) = default;
};

/// Label such as "A" or "AB" for factors < 26, otherwise "x3" / "x3:x7".
std::string term_label(const Term& t);

/// Non-intercept terms of the maximal model: mains 0..m-1, then interactions
/// (0,1),(0,2),...,(m-2,m-1).
std::vector<Term> model_terms(std::size_t factors, ModelOrder order);

/// Number of non-intercept terms v.
std::size_t model_size(std::size_t factors, ModelOrder order);

/// Model matrix with an explicit intercept column first. Stored column-major.
class ModelMatrix {
 public:
  ModelMatrix(std::size_t runs, std::vector<Term> terms, std::vector<std::int8_t> columns);

  std::size_t runs() const { return runs_; }
  /// v + 1 columns including the intercept.
  std::size_t cols() const { return terms_.size() + 1; }
  const std::vector<Term>& terms() const { return terms_; }

  std::span<const std::int8_t> column(std::size_t c) const {
    return {data_.data() + c * runs_, runs_};
  }
  int operator()(std::size_t run, std::size_t col) const { return data_[col * runs_ + run]; }

 private:
  std::size_t runs_;
  std::vector<Term> terms_;
  std::vector<std::int8_t> data_;
};

/// X^T X over (intercept, terms...). Index 0 is the intercept.
class InfoMatrix {
 public:
  InfoMatrix(std::size_t runs, std::vector<Term> terms, std::vector<std::int64_t> values);

  /// Build from a printed (v+1)x(v+1) listing; N is read from entry (0,0).
  static InfoMatrix from_listing(std::size_t factors, ModelOrder order,
                                 const std::vector<std::vector<std::int64_t>>& rows);

  std::size_t runs() const { return runs_; }
  std::size_t size() const { return terms_.size() + 1; }
  const std::vector<Term>& terms() const { return terms_; }

  std::int64_t operator()(std::size_t i, std::size_t j) const { return a_[i * size() + j]; }

  friend bool operator==(const InfoMatrix&, const InfoMatrix&) = default;

 private:
  std::size_t runs_;
  std::vector<Term> terms_;
  std::vector<std::int64_t> a_;
};

Design parse_design(std::istream& in);
Design parse_design(std::string_view text);
Design read_design_file(const std::string& path);

/// One run per line, single-space separated "1" / "-1".
std::string serialize_design(const Design& d);
void write_design_file(const Design& d, const std::string& path);

ModelMatrix model_matrix(const Design& d, ModelOrder order);
InfoMatrix information_matrix(const ModelMatrix& mm);
InfoMatrix information_matrix(const Design& d, ModelOrder order);

/// Plain integer matrix reader (whitespace separated, one row per line).
std::vector<std::vector<std::int64_t>> read_int_matrix(std::istream& in);

/// Entries i.i.d. uniform on {-1,+1} from a SplitMix64 stream seeded with `seed`.
Design random_design(std::size_t runs, std::size_t factors, std::uint64_t seed);

struct BalanceProfile {
  std::vector<int> imbalance;  ///< |column sum| per factor
  std::size_t balanced = 0;
  std::size_t unbalanced = 0;
};

BalanceProfile balance_profile(const Design& d);

}  // namespace qbdesign
