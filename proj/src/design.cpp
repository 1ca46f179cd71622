#include "qbdesign/design.hpp"

#include <algorithm>
#include <cctype>
#include <fstream>
#include <sstream>

#include "qbdesign/error.hpp"
#include "qbdesign/rng.hpp"

namespace qbdesign {

std::string to_string(const Rational& r) {
  if (r.denominator() == 1) return std::to_string(r.numerator());
  return std::to_string(r.numerator()) + "/" + std::to_string(r.denominator());
}

Design::Design(std::size_t runs, std::size_t factors, std::vector<std::int8_t> entries)
    : runs_(runs), factors_(factors), x_(std::move(entries)) {
  if (runs < 2) throw InvalidArgument("design needs at least 2 runs");
  if (factors < 1) throw InvalidArgument("design needs at least 1 factor");
  if (x_.size() != runs * factors) throw DimensionMismatch("entry count does not match N*m");
  for (std::size_t k = 0; k < x_.size(); ++k) {
    if (x_[k] != 1 && x_[k] != -1) {
      throw ParseError(ParseError::Kind::NonBinaryEntry, k / factors + 1, k % factors + 1,
                       "entry is not +1 or -1");
    }
  }
}

Design Design::from_rows(const std::vector<std::vector<int>>& rows) {
  if (rows.empty()) throw ParseError(ParseError::Kind::Empty, 0, 0, "design has no rows");
  const std::size_t m = rows.front().size();
  std::vector<std::int8_t> x;
  x.reserve(rows.size() * m);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i].size() != m) {
      throw ParseError(ParseError::Kind::RaggedRows, i + 1, 0, "row lengths differ");
    }
    for (std::size_t j = 0; j < m; ++j) {
      int v = rows[i][j];
      if (v != 1 && v != -1) {
        throw ParseError(ParseError::Kind::NonBinaryEntry, i + 1, j + 1,
                         "entry at row " + std::to_string(i + 1) + ", column " +
                             std::to_string(j + 1) + " is not +1 or -1");
      }
      x.push_back(static_cast<std::int8_t>(v));
    }
  }
  return Design(rows.size(), m, std::move(x));
}

Design Design::flipped(std::size_t run, std::size_t factor) const {
  if (run >= runs_ || factor >= factors_) throw InvalidArgument("flip index out of range");
  Design d = *this;
  d.x_[run * factors_ + factor] = static_cast<std::int8_t>(-d.x_[run * factors_ + factor]);
  return d;
}

Design Design::select_factors(std::span<const std::size_t> columns) const {
  if (columns.empty()) throw InvalidArgument("no columns selected");
  std::vector<std::int8_t> x;
  x.reserve(runs_ * columns.size());
  for (std::size_t i = 0; i < runs_; ++i) {
    for (std::size_t c : columns) {
      if (c >= factors_) throw BadSubset("column index out of range");
      x.push_back(x_[i * factors_ + c]);
    }
  }
  return Design(runs_, columns.size(), std::move(x));
}

int Design::column_sum(std::size_t factor) const {
  int s = 0;
  for (std::size_t i = 0; i < runs_; ++i) s += x_[i * factors_ + factor];
  return s;
}

bool Term::shares_factor(const Term& o) const {
  auto has = [&](int f) { return f >= 0 && (f == o.first || f == o.second); };
  return has(first) || has(second);
}

std::string term_label(const Term& t) {
  auto one = [](int f) -> std::string {
    if (f < 26) return std::string(1, static_cast<char>('A' + f));
    return "x" + std::to_string(f + 1);
  };
  if (!t.is_interaction()) return one(t.first);
  if (t.second < 26) return one(t.first) + one(t.second);
  return one(t.first) + ":" + one(t.second);
}

std::vector<Term> model_terms(std::size_t factors, ModelOrder order) {
  std::vector<Term> terms;
  const int m = static_cast<int>(factors);
  for (int j = 0; j < m; ++j) terms.push_back(Term::main(j));
  if (order == ModelOrder::SecondOrder) {
    for (int a = 0; a < m; ++a)
      for (int b = a + 1; b < m; ++b) terms.push_back(Term::interaction(a, b));
  }
  return terms;
}

std::size_t model_size(std::size_t factors, ModelOrder order) {
  return order == ModelOrder::FirstOrder ? factors : factors + factors * (factors - 1) / 2;
}

ModelMatrix::ModelMatrix(std::size_t runs, std::vector<Term> terms,
                         std::vector<std::int8_t> columns)
    : runs_(runs), terms_(std::move(terms)), data_(std::move(columns)) {
  if (data_.size() != runs_ * (terms_.size() + 1))
    throw DimensionMismatch("model matrix storage does not match N*(v+1)");
}

InfoMatrix::InfoMatrix(std::size_t runs, std::vector<Term> terms,
                       std::vector<std::int64_t> values)
    : runs_(runs), terms_(std::move(terms)), a_(std::move(values)) {
  if (a_.size() != size() * size()) throw DimensionMismatch("info matrix is not (v+1)^2");
}

InfoMatrix InfoMatrix::from_listing(std::size_t factors, ModelOrder order,
                                    const std::vector<std::vector<std::int64_t>>& rows) {
  auto terms = model_terms(factors, order);
  const std::size_t n = terms.size() + 1;
  if (rows.size() != n)
    throw DimensionMismatch("listing has " + std::to_string(rows.size()) + " rows, expected " +
                            std::to_string(n));
  std::vector<std::int64_t> a;
  a.reserve(n * n);
  for (const auto& r : rows) {
    if (r.size() != n) throw DimensionMismatch("listing row has wrong length");
    a.insert(a.end(), r.begin(), r.end());
  }
  if (a[0] < 2) throw InvalidArgument("listing entry (0,0) must be the run count");
  const auto runs = static_cast<std::size_t>(a[0]);
  return InfoMatrix(runs, std::move(terms), std::move(a));
}

namespace {

bool is_numeric_token(const std::string& tok) {
  std::size_t k = 0;
  if (k < tok.size() && (tok[k] == '+' || tok[k] == '-')) ++k;
  if (k == tok.size()) return false;
  for (; k < tok.size(); ++k)
    if (!std::isdigit(static_cast<unsigned char>(tok[k])) && tok[k] != '.') return false;
  return true;
}

std::vector<std::string> split_tokens(const std::string& line) {
  std::string s = line;
  std::replace(s.begin(), s.end(), ',', ' ');
  std::istringstream ss(s);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

}  // namespace

Design parse_design(std::istream& in) {
  std::vector<std::vector<int>> rows;
  std::string line;
  bool first = true;
  std::size_t row_no = 0;
  while (std::getline(in, line)) {
    auto toks = split_tokens(line);
    if (toks.empty()) continue;
    // a single leading line with any non-numeric token is a header of labels
    if (first) {
      first = false;
      if (!std::all_of(toks.begin(), toks.end(), is_numeric_token)) continue;
    }
    ++row_no;
    std::vector<int> row;
    for (std::size_t j = 0; j < toks.size(); ++j) {
      const auto& t = toks[j];
      if (t == "1" || t == "+1") {
        row.push_back(1);
      } else if (t == "-1") {
        row.push_back(-1);
      } else if (is_numeric_token(t)) {
        throw ParseError(ParseError::Kind::NonBinaryEntry, row_no, j + 1,
                         "entry '" + t + "' at row " + std::to_string(row_no) + ", column " +
                             std::to_string(j + 1) + " is not +1 or -1");
      } else {
        throw ParseError(ParseError::Kind::BadToken, row_no, j + 1,
                         "unreadable token '" + t + "' at row " + std::to_string(row_no));
      }
    }
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw ParseError(ParseError::Kind::RaggedRows, row_no, 0,
                       "row " + std::to_string(row_no) + " has " + std::to_string(row.size()) +
                           " entries, expected " + std::to_string(rows.front().size()));
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(ParseError::Kind::Empty, 0, 0, "design has no rows");
  return Design::from_rows(rows);
}

Design parse_design(std::string_view text) {
  std::istringstream ss{std::string(text)};
  return parse_design(ss);
}

Design read_design_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open design file: " + path);
  return parse_design(in);
}

std::string serialize_design(const Design& d) {
  std::string out;
  for (std::size_t i = 0; i < d.runs(); ++i) {
    for (std::size_t j = 0; j < d.factors(); ++j) {
      if (j) out += ' ';
      out += d(i, j) > 0 ? "1" : "-1";
    }
    out += '\n';
  }
  return out;
}

void write_design_file(const Design& d, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw InvalidArgument("cannot write design file: " + path);
  out << serialize_design(d);
}

ModelMatrix model_matrix(const Design& d, ModelOrder order) {
  auto terms = model_terms(d.factors(), order);
  const std::size_t n = d.runs();
  std::vector<std::int8_t> data(n * (terms.size() + 1));
  std::fill_n(data.begin(), n, std::int8_t{1});
  for (std::size_t c = 0; c < terms.size(); ++c) {
    const Term& t = terms[c];
    std::int8_t* col = data.data() + (c + 1) * n;
    for (std::size_t i = 0; i < n; ++i) {
      int v = d(i, t.first);
      if (t.is_interaction()) v *= d(i, t.second);
      col[i] = static_cast<std::int8_t>(v);
    }
  }
  return ModelMatrix(n, std::move(terms), std::move(data));
}

InfoMatrix information_matrix(const ModelMatrix& mm) {
  const std::size_t p = mm.cols();
  const std::size_t n = mm.runs();
  std::vector<std::int64_t> a(p * p);
  for (std::size_t r = 0; r < p; ++r) {
    auto cr = mm.column(r);
    for (std::size_t c = r; c < p; ++c) {
      auto cc = mm.column(c);
      std::int64_t s = 0;
      for (std::size_t i = 0; i < n; ++i) s += cr[i] * cc[i];
      a[r * p + c] = s;
      a[c * p + r] = s;
    }
  }
  return InfoMatrix(n, mm.terms(), std::move(a));
}

InfoMatrix information_matrix(const Design& d, ModelOrder order) {
  return information_matrix(model_matrix(d, order));
}

std::vector<std::vector<std::int64_t>> read_int_matrix(std::istream& in) {
  std::vector<std::vector<std::int64_t>> rows;
  std::string line;
  std::size_t row_no = 0;
  while (std::getline(in, line)) {
    auto toks = split_tokens(line);
    if (toks.empty()) continue;
    ++row_no;
    std::vector<std::int64_t> row;
    for (std::size_t j = 0; j < toks.size(); ++j) {
      try {
        std::size_t used = 0;
        long long v = std::stoll(toks[j], &used);
        if (used != toks[j].size()) throw std::invalid_argument("trailing");
        row.push_back(v);
      } catch (const std::exception&) {
        throw ParseError(ParseError::Kind::BadToken, row_no, j + 1,
                         "bad integer '" + toks[j] + "'");
      }
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw ParseError(ParseError::Kind::Empty, 0, 0, "matrix has no rows");
  return rows;
}

Design random_design(std::size_t runs, std::size_t factors, std::uint64_t seed) {
  SplitMix64 rng(seed);
  std::vector<std::int8_t> x(runs * factors);
  for (auto& v : x) v = (rng.next() >> 63) ? std::int8_t{1} : std::int8_t{-1};
  return Design(runs, factors, std::move(x));
}

BalanceProfile balance_profile(const Design& d) {
  BalanceProfile bp;
  for (std::size_t j = 0; j < d.factors(); ++j) {
    int s = d.column_sum(j);
    bp.imbalance.push_back(s < 0 ? -s : s);
    if (s == 0)
      ++bp.balanced;
    else
      ++bp.unbalanced;
  }
  return bp;
}

}  // namespace qbdesign
