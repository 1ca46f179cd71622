#include "qbdesign/criteria.hpp"

#include <cmath>

#include <Eigen/Dense>

#include "qbdesign/combinatorics.hpp"
#include "qbdesign/error.hpp"

namespace qbdesign {

void Prior::validate() const {
  auto ok = [](double v) { return v >= 0.0 && v <= 1.0; };
  if (!ok(pi1)) throw InvalidArgument("pi1 must lie in [0, 1]");
  if (!ok(pi2)) throw InvalidArgument("pi2 must lie in [0, 1]");
}

PairClass classify_pair(const Term& a, const std::optional<Term>& b) {
  if (!b) return a.is_interaction() ? PairClass::InteractionIntercept : PairClass::MainIntercept;
  const int na = a.order(), nb = b->order();
  const bool shared = a.shares_factor(*b);
  if (na == 1 && nb == 1) return PairClass::MainMain;
  if (na == 2 && nb == 2)
    return shared ? PairClass::InteractionInteractionShared
                  : PairClass::InteractionInteractionDisjoint;
  return shared ? PairClass::MainInteractionShared : PairClass::MainInteractionDisjoint;
}

double xi_for(const XiWeights& xi, PairClass c) {
  switch (c) {
    case PairClass::MainIntercept: return xi.xi10;
    case PairClass::MainMain: return xi.xi20;
    case PairClass::InteractionIntercept:
    case PairClass::MainInteractionShared: return xi.xi21;
    case PairClass::MainInteractionDisjoint: return xi.xi31;
    case PairClass::InteractionInteractionShared: return xi.xi32;
    case PairClass::InteractionInteractionDisjoint: return xi.xi42;
  }
  return 0.0;
}

XiWeights xi_weights(const Prior& p, std::size_t m) {
  p.validate();
  if (m < 1) throw InvalidArgument("m must be positive");
  const double a = p.pi1;
  const double q = p.order == ModelOrder::SecondOrder ? p.pi2 : 0.0;
  XiWeights xi;
  xi.xi10 = a;
  xi.xi20 = a * a;
  xi.xi21 = a * a * q;
  xi.xi31 = a * a * a * q;
  xi.xi32 = a * a * a * q * q;
  xi.xi42 = a * a * a * a * q * q;
  return xi;
}

namespace {

std::size_t interaction_index(std::size_t m, int a, int b) {
  // position of (a,b), a<b, among the lexicographic pairs, offset past the mains
  return m + static_cast<std::size_t>(combination_rank(std::array<int, 2>{a, b}.data(), 2,
                                                       static_cast<int>(m)));
}

}  // namespace

PriorSums prior_sums_oracle(std::size_t m, const Prior& p) {
  p.validate();
  const bool second = p.order == ModelOrder::SecondOrder;
  if (m < 1) throw InvalidArgument("m must be positive");
  if ((!second && m > 12) || (second && m > 6))
    throw TooLarge("model space too large to enumerate for m = " + std::to_string(m));

  PriorSums ps;
  ps.terms = model_terms(m, p.order);
  const std::size_t v = ps.terms.size();
  ps.p0.assign(v, 0.0);
  ps.p.assign(v * v, 0.0);

  std::vector<std::size_t> in_model;
  for (std::uint32_t fmask = 0; fmask < (1u << m); ++fmask) {
    std::vector<int> mains;
    for (std::size_t j = 0; j < m; ++j)
      if (fmask & (1u << j)) mains.push_back(static_cast<int>(j));
    const std::size_t a = mains.size();
    const double base = std::pow(p.pi1, static_cast<double>(a)) *
                        std::pow(1.0 - p.pi1, static_cast<double>(m - a));
    std::vector<std::size_t> pairs;
    if (second)
      for (std::size_t x = 0; x < a; ++x)
        for (std::size_t y = x + 1; y < a; ++y)
          pairs.push_back(interaction_index(m, mains[x], mains[y]));
    const std::size_t c2 = pairs.size();
    for (std::uint64_t imask = 0; imask < (std::uint64_t{1} << c2); ++imask) {
      const int a2 = __builtin_popcountll(imask);
      double prob = base;
      if (second)
        prob *= std::pow(p.pi2, a2) * std::pow(1.0 - p.pi2, static_cast<double>(c2 - a2));
      ps.total += prob;
      if (prob == 0.0) continue;
      in_model.clear();
      for (int j : mains) in_model.push_back(static_cast<std::size_t>(j));
      for (std::size_t t = 0; t < c2; ++t)
        if (imask & (std::uint64_t{1} << t)) in_model.push_back(pairs[t]);
      for (std::size_t x : in_model) {
        ps.p0[x] += prob;
        for (std::size_t y : in_model)
          if (x != y) ps.p[x * v + y] += prob;
      }
    }
  }
  return ps;
}

PriorSums closed_form_prior_sums(std::size_t m, const Prior& p) {
  const XiWeights xi = xi_weights(p, m);
  PriorSums ps;
  ps.terms = model_terms(m, p.order);
  const std::size_t v = ps.terms.size();
  ps.p0.resize(v);
  ps.p.assign(v * v, 0.0);
  ps.total = 1.0;
  for (std::size_t i = 0; i < v; ++i) {
    ps.p0[i] = xi_for(xi, classify_pair(ps.terms[i], std::nullopt));
    for (std::size_t j = 0; j < v; ++j)
      if (i != j) ps.p[i * v + j] = xi_for(xi, classify_pair(ps.terms[i], ps.terms[j]));
  }
  return ps;
}

std::array<double, 4> qb_coefficients(const Prior& p, std::size_t m) {
  const double a = p.pi1;
  const double q = p.order == ModelOrder::SecondOrder ? p.pi2 : 0.0;
  const double md = static_cast<double>(m);
  return {a + 2.0 * (md - 1.0) * a * a * q,
          2.0 * a * a + a * a * q + 2.0 * (md - 2.0) * a * a * a * q * q,
          6.0 * a * a * a * q,
          6.0 * a * a * a * a * q * q};
}

std::array<Rational, 4> qb_coefficients_exact(const Rational& a, const Rational& q,
                                              std::size_t m) {
  const auto mi = static_cast<std::int64_t>(m);
  return {a + 2 * (mi - 1) * a * a * q, 2 * a * a + a * a * q + 2 * (mi - 2) * a * a * a * q * q,
          6 * a * a * a * q, 6 * a * a * a * a * q * q};
}

double qb_from_counts(const WordCounts& w, const std::array<double, 4>& c) {
  double total = 0.0;
  for (std::size_t k = 1; k <= 4; ++k)
    if (c[k - 1] != 0.0) total += c[k - 1] * w.b(k);
  return total;
}

double qb_first_order(const WordCounts& w, double pi1) {
  if (w.k_max() < 2 && w.factors >= 2) throw InvalidArgument("first-order Q_B needs b_1 and b_2");
  return qb_from_counts(w, qb_coefficients(Prior{pi1, 0.0, ModelOrder::FirstOrder}, w.factors));
}

double qb_second_order(const WordCounts& w, const Prior& p, std::size_t m) {
  if (w.k_max() < std::min<std::size_t>(4, m))
    throw InvalidArgument("second-order Q_B needs b_1..b_4");
  Prior q = p;
  q.order = ModelOrder::SecondOrder;
  return qb_from_counts(w, qb_coefficients(q, m));
}

double qb(const WordCounts& w, const Prior& p) {
  return p.order == ModelOrder::FirstOrder ? qb_first_order(w, p.pi1)
                                           : qb_second_order(w, p, w.factors);
}

Rational qb_exact(const WordCounts& w, const Rational& pi1, const Rational& pi2) {
  auto c = qb_coefficients_exact(pi1, pi2, w.factors);
  Rational total = 0;
  for (std::size_t k = 1; k <= 4; ++k) total += c[k - 1] * w.b_exact(k);
  return total;
}

double qb_general(const InfoMatrix& im, const PriorSums& ps) {
  if (im.terms() != ps.terms) throw DimensionMismatch("prior sums and info matrix terms differ");
  const std::size_t v = ps.size();
  const double n2 = static_cast<double>(im.runs()) * static_cast<double>(im.runs());
  double total = 0.0;
  for (std::size_t i = 0; i < v; ++i) {
    const double a0 = static_cast<double>(im(i + 1, 0));
    total += ps.p0[i] * a0 * a0 / n2;
    for (std::size_t j = 0; j < v; ++j) {
      if (i == j) continue;
      const double a = static_cast<double>(im(i + 1, j + 1));
      total += ps.pij(i, j) * a * a / n2;
    }
  }
  return total;
}

Es2Result es2(const Design& d) {
  if (d.factors() < 2) throw InvalidArgument("E(s^2) needs at least two factors");
  WordCounts w = word_counts(d, 2);
  const auto pairs = binomial(static_cast<std::int64_t>(d.factors()), 2);
  return {w.S(1) == 0, static_cast<double>(w.S(2)) / static_cast<double>(pairs)};
}

Rational ue_s2(const Design& d) {
  WordCounts w = word_counts(d, std::min<std::size_t>(2, d.factors()));
  return w.b_exact(1) + w.b_exact(2);
}

namespace {

std::optional<double> as_from_centered(const Eigen::MatrixXd& m, std::size_t runs) {
  const auto p = m.rows();
  if (p == 0) return std::nullopt;
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(m, Eigen::EigenvaluesOnly);
  const auto& ev = es.eigenvalues();
  const double lmax = ev.maxCoeff();
  const double lmin = ev.minCoeff();
  if (!(lmax > 0.0) || lmin <= kSingularRcond * lmax) return std::nullopt;
  double tr = 0.0;
  for (Eigen::Index k = 0; k < p; ++k) tr += 1.0 / ev[k];
  return static_cast<double>(p) / (static_cast<double>(runs) * tr);
}

}  // namespace

std::optional<double> as_efficiency(const InfoMatrix& im, std::span<const std::size_t> cols) {
  const auto p = static_cast<Eigen::Index>(cols.size());
  const double n = static_cast<double>(im.runs());
  Eigen::MatrixXd m(p, p);
  for (Eigen::Index r = 0; r < p; ++r) {
    for (Eigen::Index c = 0; c < p; ++c) {
      const std::size_t i = cols[r], j = cols[c];
      if (i == 0 || j == 0 || i >= im.size() || j >= im.size())
        throw BadSubset("A_s columns must index non-intercept terms");
      m(r, c) = static_cast<double>(im(i, j)) -
                static_cast<double>(im(i, 0)) * static_cast<double>(im(0, j)) / n;
    }
  }
  return as_from_centered(m, im.runs());
}

std::optional<double> as_efficiency(const Design& d, std::span<const Term> terms) {
  std::vector<std::int8_t> data(d.runs() * (terms.size() + 1), 1);
  for (std::size_t c = 0; c < terms.size(); ++c) {
    const Term& t = terms[c];
    if (t.first < 0 || static_cast<std::size_t>(t.first) >= d.factors() ||
        (t.is_interaction() && static_cast<std::size_t>(t.second) >= d.factors()))
      throw BadSubset("term refers to a missing factor");
    for (std::size_t i = 0; i < d.runs(); ++i) {
      int v = d(i, t.first);
      if (t.is_interaction()) v *= d(i, t.second);
      data[(c + 1) * d.runs() + i] = static_cast<std::int8_t>(v);
    }
  }
  InfoMatrix im = information_matrix(
      ModelMatrix(d.runs(), std::vector<Term>(terms.begin(), terms.end()), std::move(data)));
  std::vector<std::size_t> cols(terms.size());
  for (std::size_t c = 0; c < cols.size(); ++c) cols[c] = c + 1;
  return as_efficiency(im, cols);
}

std::optional<double> as_efficiency_main(const Design& d) {
  auto terms = model_terms(d.factors(), ModelOrder::FirstOrder);
  return as_efficiency(d, terms);
}

std::optional<Rational> first_order_tie_point(const WordCounts& a, const WordCounts& b) {
  // pi (b1a - b1b) + 2 pi^2 (b2a - b2b) = 0
  const Rational d1 = a.b_exact(1) - b.b_exact(1);
  const Rational d2 = a.b_exact(2) - b.b_exact(2);
  if (d2 == Rational(0)) return std::nullopt;
  const Rational pi = -d1 / (2 * d2);
  if (pi <= Rational(0) || pi > Rational(1)) return std::nullopt;
  return pi;
}

}  // namespace qbdesign
