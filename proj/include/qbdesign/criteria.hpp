#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "qbdesign/design.hpp"
#include "qbdesign/word_counts.hpp"

namespace qbdesign {

struct Prior {
  double pi1 = 0.0;
  double pi2 = 0.0;  // ignored for FirstOrder
  ModelOrder order = ModelOrder::FirstOrder;

  /// Throws InvalidArgument unless both probabilities lie in [0, 1].
  void validate() const;
};

/// Prior sums by term-pair class (see classify_pair).
struct XiWeights {
  double xi10 = 0, xi20 = 0, xi21 = 0, xi31 = 0, xi32 = 0, xi42 = 0;
};

enum class PairClass {
  MainIntercept,         // xi10
  MainMain,              // xi20
  InteractionIntercept,  // xi21
  MainInteractionShared, // xi21
  MainInteractionDisjoint,        // xi31
  InteractionInteractionShared,   // xi32
  InteractionInteractionDisjoint  // xi42
};

/// Class of the pair (a, b); pass std::nullopt for the intercept.
PairClass classify_pair(const Term& a, const std::optional<Term>& b);
double xi_for(const XiWeights& xi, PairClass c);

/// p0[i]: prior mass of models containing term i. pij(i,j): mass of models
/// containing both i and j. Terms ordered as model_terms().
struct PriorSums {
  std::vector<Term> terms;
  std::vector<double> p0;
  std::vector<double> p;  // v x v row-major, diagonal unused
  double total = 0.0;     // mass of the whole model space (oracle only)

  std::size_t size() const { return terms.size(); }
  double pij(std::size_t i, std::size_t j) const { return p[i * terms.size() + j]; }
};

XiWeights xi_weights(const Prior& p, std::size_t m);

/// Exhaustive enumeration of every marginality-respecting submodel.
/// Throws TooLarge for m > 12 (first order) or m > 6 (second order).
PriorSums prior_sums_oracle(std::size_t m, const Prior& p);

/// Prior sums filled in from the xi closed forms.
PriorSums closed_form_prior_sums(std::size_t m, const Prior& p);

/// Coefficients c_1..c_4 of Q_B = sum_k c_k b_k. First order uses pi2 = 0
/// in the same expressions, which leaves (pi1, 2 pi1^2, 0, 0).
std::array<double, 4> qb_coefficients(const Prior& p, std::size_t m);
std::array<Rational, 4> qb_coefficients_exact(const Rational& pi1, const Rational& pi2,
                                              std::size_t m);

double qb_from_counts(const WordCounts& w, const std::array<double, 4>& c);
double qb_first_order(const WordCounts& w, double pi1);
double qb_second_order(const WordCounts& w, const Prior& p, std::size_t m);
/// Dispatch on p.order.
double qb(const WordCounts& w, const Prior& p);
/// N^2-free exact value for rational priors.
Rational qb_exact(const WordCounts& w, const Rational& pi1, const Rational& pi2);

/// sum_i p_i0 a_i0^2/N^2 + sum_{i != j} p_ij a_ij^2/N^2.
double qb_general(const InfoMatrix& im, const PriorSums& ps);

struct Es2Result {
  bool b1_zero = false;
  double value = 0.0;  // S_2 / C(m,2)
};

Es2Result es2(const Design& d);
Rational ue_s2(const Design& d);

/// Reciprocal-condition cutoff below which D'Q0D is treated as singular.
inline constexpr double kSingularRcond = 1e-10;

/// p / (N tr((D'Q0D)^-1)) for the given non-intercept terms; nullopt when the
/// model is not estimable.
std::optional<double> as_efficiency(const Design& d, std::span<const Term> terms);
/// Same, reading D'D and D'1 from an information matrix. `cols` index into
/// im (1-based, 0 is the intercept).
std::optional<double> as_efficiency(const InfoMatrix& im, std::span<const std::size_t> cols);
/// Main-effects model over all factors.
std::optional<double> as_efficiency_main(const Design& d);

/// Nonzero pi1 where the first-order Q_B of two designs coincide, if the
/// crossing lies in (0, 1].
std::optional<Rational> first_order_tie_point(const WordCounts& a, const WordCounts& b);

}  // namespace qbdesign
