// One PASS/FAIL line per acceptance criterion; exit status is nonzero if any fails.

#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "qbdesign/criteria.hpp"
#include "qbdesign/design.hpp"
#include "qbdesign/error.hpp"
#include "qbdesign/fixtures.hpp"
#include "qbdesign/optimizer.hpp"
#include "qbdesign/projection.hpp"
#include "qbdesign/rng.hpp"
#include "qbdesign/theory.hpp"
#include "qbdesign/word_counts.hpp"
#include "support.hpp"

using namespace qbdesign;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void fail(const std::string& s) {
    pass = false;
    notes.push_back(s);
  }
  void note(const std::string& s) { notes.push_back(s); }
};

std::string fmt(double v, int prec = 6) {
  std::ostringstream s;
  s.precision(prec);
  s << v;
  return s.str();
}

std::string fixed3(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f", v);
  return buf;
}

using Expected = std::vector<std::pair<std::size_t, Rational>>;

Outcome word_count_fixtures() {
  Outcome o;
  auto expect = [&](const std::string& id, const Expected& want) {
    WordCounts w = load_fixture(id).word_counts();
    for (const auto& [k, v] : want)
      if (w.b_exact(k) != v)
        o.fail(id + " b" + std::to_string(k) + "=" + to_string(w.b_exact(k)) + " expected " +
               to_string(v));
  };
  expect("supp1.d1", {{1, Rational(0)}, {2, Rational(8, 3)}});
  expect("supp1.d2", {{1, Rational(2, 9)}, {2, Rational(19, 9)}});
  expect("supp1.d3", {{1, Rational(1, 3)}, {2, Rational(2)}});
  expect("table3.first", {{1, Rational(0)}, {2, Rational(0)}, {3, Rational(4, 9)}, {4, Rational(1, 9)}});
  expect("table3.second",
         {{1, Rational(1, 9)}, {2, Rational(0)}, {3, Rational(1, 9)}, {4, Rational(1, 9)}});
  expect("had16.proj1", {{3, Rational(0)}, {4, Rational(3)}});
  expect("had16.proj2", {{3, Rational(1, 2)}, {4, Rational(2)}});
  expect("had16.proj3", {{3, Rational(1)}, {4, Rational(1)}});
  expect("had16.proj4", {{3, Rational(5, 4)}, {4, Rational(3, 4)}});
  expect("had16.proj5", {{3, Rational(2)}, {4, Rational(1)}});
  return o;
}

Outcome xtx_reproduction() {
  Outcome o;
  std::size_t exact = 0, listing_only = 0;
  for (const auto& id : fixture_ids()) {
    Fixture f = load_fixture(id);
    if (!f.expected_xtx) continue;
    if (f.design) {
      if (xtx_exact_match(f))
        ++exact;
      else
        o.fail(id + " differs from its printed listing");
      continue;
    }
    // listing without a design: every entry must be a consistent J value and
    // the implied counts must equal the printed ones
    try {
      WordCounts w = implied_word_counts(*f.expected_xtx, f.factors());
      for (std::size_t k = 1; k <= 4; ++k)
        if (f.expected_b[k - 1] && w.b_exact(k) != *f.expected_b[k - 1])
          o.fail(id + " implied b" + std::to_string(k) + "=" + to_string(w.b_exact(k)));
      ++listing_only;
    } catch (const Error& e) {
      o.fail(id + ": " + e.what());
    }
  }
  o.note(std::to_string(exact) + " design listings exact, " + std::to_string(listing_only) +
         " listing-only tables consistent");
  return o;
}

Outcome sweep_crossovers() {
  Outcome o;
  std::vector<WordCounts> w{word_counts(fixture_design("supp1.d1")),
                            word_counts(fixture_design("supp1.d2")),
                            word_counts(fixture_design("supp1.d3"))};
  std::vector<double> changes;
  std::size_t prev = 99;
  for (int i = 100; i <= 800; ++i) {
    const double p = i / 1000.0;
    std::size_t best = 0;
    for (std::size_t d = 1; d < w.size(); ++d)
      if (qb_first_order(w[d], p) < qb_first_order(w[best], p)) best = d;
    if (prev != 99 && best != prev) changes.push_back(p - 0.0005);
    prev = best;
  }
  if (changes.size() != 2) {
    o.fail(std::to_string(changes.size()) + " argmin changes");
  } else {
    if (std::fabs(changes[0] - 0.2) > 0.001) o.fail("first change at " + fmt(changes[0]));
    if (std::fabs(changes[1] - 0.5) > 0.001) o.fail("second change at " + fmt(changes[1]));
    o.note("changes at " + fmt(changes[0]) + " and " + fmt(changes[1]));
  }
  // 10 pi^2 = 2 pi in exact arithmetic: the N^2-scaled difference of d2 and d1
  const Rational p(1, 5);
  const Rational diff = qb_exact(w[1], p, Rational(0)) - qb_exact(w[0], p, Rational(0));
  const Rational poly = (Rational(2) * p - Rational(10) * p * p) / Rational(9);
  if (diff != Rational(0) || poly != Rational(0)) o.fail("exact tie at 1/5 not reproduced");
  auto tie = first_order_tie_point(w[0], w[1]);
  if (!tie || *tie != p) o.fail("tie point solver");
  return o;
}

Outcome xi_oracle() {
  Outcome o;
  double worst = 0, worst_total = 0;
  for (std::size_t m = 3; m <= 5; ++m)
    for (int a = 0; a <= 10; ++a)
      for (int b = 0; b <= 10; ++b) {
        const Prior p{a / 10.0, b / 10.0, ModelOrder::SecondOrder};
        PriorSums ps = prior_sums_oracle(m, p);
        const XiWeights xi = xi_weights(p, m);
        worst_total = std::max(worst_total, std::fabs(ps.total - 1.0));
        for (std::size_t i = 0; i < ps.size(); ++i) {
          worst = std::max(worst, std::fabs(ps.p0[i] - xi_for(xi, classify_pair(ps.terms[i], std::nullopt))));
          for (std::size_t j = 0; j < ps.size(); ++j)
            if (i != j)
              worst = std::max(worst, std::fabs(ps.pij(i, j) -
                                                xi_for(xi, classify_pair(ps.terms[i], ps.terms[j]))));
        }
      }
  if (worst > 1e-12) o.fail("max prior-sum error " + fmt(worst));
  if (worst_total > 1e-12) o.fail("max total error " + fmt(worst_total));
  o.note("max |oracle - closed form| = " + fmt(worst, 3) + ", max |total - 1| = " + fmt(worst_total, 3));
  return o;
}

Outcome general_form() {
  Outcome o;
  SplitMix64 g(31);
  double worst = 0;
  for (int order = 1; order <= 2; ++order)
    for (int trial = 0; trial < 20; ++trial) {
      const std::size_t n = 2 + g.next() % 11, m = 1 + g.next() % 5;
      Design d = random_design(n, m, g.next());
      const double a = (g.next() % 1001) / 1000.0, b = (g.next() % 1001) / 1000.0;
      const Prior p{a, order == 2 ? b : 0.0, order == 2 ? ModelOrder::SecondOrder : ModelOrder::FirstOrder};
      const double general = qb_general(information_matrix(d, p.order), prior_sums_oracle(m, p));
      const WordCounts w = word_counts(d);
      const double closed = order == 1 ? qb_first_order(w, a) : qb_second_order(w, p, m);
      worst = std::max(worst, std::fabs(general - closed));
    }
  if (worst > 1e-12) o.fail("max difference " + fmt(worst));
  o.note("max difference " + fmt(worst, 3));
  return o;
}

Outcome interval_table() {
  Outcome o;
  BalanceIntervals bi = balance_intervals(14, 12);
  const std::vector<Rational> interior{Rational(1, 22), Rational(1, 18), Rational(1, 14),
                                       Rational(1, 10), Rational(1, 6),  Rational(1, 2)};
  if (std::vector<Rational>(bi.endpoints.begin() + 1, bi.endpoints.end() - 1) != interior)
    o.fail("N=14, m=12 endpoints differ");
  std::size_t points = 0;
  for (std::size_t n = 6; n <= 30; n += 4)
    for (std::size_t m = 1; m < n; ++m)
      for (const auto& iv : balance_intervals(n, m).intervals)
        for (int t = 1; t <= 5; ++t) {
          const Rational p = iv.lo + (iv.hi - iv.lo) * Rational(t, 6);
          std::size_t best = m;
          for (std::size_t n1 = m; n1-- > 0;)
            if (qb_block_value(n, m, n1, p) < qb_block_value(n, m, best, p)) best = n1;
          ++points;
          if (best != iv.level_balanced)
            o.fail("N=" + std::to_string(n) + " m=" + std::to_string(m) + " pi1=" + to_string(p));
        }
  o.note(std::to_string(points) + " interior points checked");
  return o;
}

Outcome optimizer_attainment() {
  Outcome o;
  auto run = [](std::size_t n, std::size_t m, double pi1, std::size_t restarts) {
    OptimizerConfig cfg;
    cfg.runs = n;
    cfg.factors = m;
    cfg.prior = Prior{pi1, 0.0, ModelOrder::FirstOrder};
    cfg.restarts = restarts;
    cfg.seed = 1;
    cfg.threads = 0;
    return multi_restart(cfg);
  };
  {
    OptResult r = run(12, 14, 0.1, 200);
    const double ref = qb_first_order(word_counts(fixture_design("supp1.d1")), 0.1);
    if (!(r.qb <= ref + 1e-12)) o.fail("(a) QB " + fmt(r.qb) + " > " + fmt(ref));
    o.note("(a) QB=" + fmt(r.qb) + " ref=" + fmt(ref));
  }
  {
    OptResult r = run(12, 14, 0.6, 200);
    const double ref = qb_first_order(word_counts(fixture_design("supp1.d3")), 0.6);
    if (!(r.qb <= ref + 1e-12)) o.fail("(b) QB " + fmt(r.qb) + " > " + fmt(ref));
    const Rational ue = r.word_counts.b_exact(1) + r.word_counts.b_exact(2);
    if (ue != Rational(7, 3)) o.fail("(b) b1+b2=" + to_string(ue));
    o.note("(b) QB=" + fmt(r.qb) + " b1+b2=" + to_string(ue));
  }
  {
    OptResult r = run(10, 9, 0.3, 500);
    if (r.n_level_balanced != 5) o.fail("(c) level-balanced " + std::to_string(r.n_level_balanced));
    if (!r.as || *r.as < 0.8 - 1e-9) o.fail("(c) A_s " + (r.as ? fmt(*r.as) : std::string("none")));
    o.note("(c) level_balanced=" + std::to_string(r.n_level_balanced) +
           " As=" + (r.as ? fmt(*r.as) : std::string("none")));
  }
  {
    OptResult r = run(14, 12, 0.3, 500);
    PatternReport rep = verify_block_pattern(r.best);
    const std::size_t non_lb = 12 - rep.n1;
    if (!rep.matches) o.fail("(d) block pattern does not match");
    if (non_lb != 5) o.fail("(d) " + std::to_string(non_lb) + " non-level-balanced");
    o.note("(d) pattern=" + std::string(rep.matches ? "match" : "mismatch") +
           " non_level_balanced=" + std::to_string(non_lb));
  }
  o.note("seed=1");
  return o;
}

struct Cell {
  const char* as;
  std::int64_t no_est;
};

// Printed rows for t = 1.. per f, design order d1, d3, d6.
const std::vector<std::vector<std::array<Cell, 3>>>& printed_table() {
  static const std::vector<std::vector<std::array<Cell, 3>>> t{
      {{{{"1.000", 0}, {"0.950", 3}, {"0.971", 0}}},
       {{{"1.000", 0}, {"0.950", 3}, {"0.958", 0}}},
       {{{"1.000", 0}, {"0.950", 1}, {"0.950", 0}}}},
      {{{{"1.000", 0}, {"0.900", 9}, {"0.951", 0}}},
       {{{"0.960", 9}, {"0.827", 39}, {"0.911", 0}}},
       {{{"0.880", 36}, {"0.770", 69}, {"0.877", 0}}},
       {{{"0.800", 45}, {"0.733", 60}, {"0.847", 0}}},
       {{{"0.800", 18}, {"0.733", 24}, {"0.821", 0}}},
       {{{"0.800", 3}, {"0.733", 4}, {"0.800", 0}}}},
      {{{{"1.000", 0}, {"0.850", 9}, {"0.933", 0}}},
       {{{"0.933", 18}, {"0.711", 78}, {"0.872", 0}}},
       {{{"0.800", 144}, {"0.579", 303}, {"0.811", 4}}},
       {{{"0.614", 486}, {"0.455", 687}, {"0.750", 29}}},
       {{{"0.405", 900}, {"0.343", 993}, {"0.684", 90}}},
       {{{"0.210", 996}, {"0.253", 941}, {"0.611", 155}}},
       {{{"0.067", 672}, {"0.193", 581}, {"0.527", 160}}},
       {{{"0.000", 270}, {"0.167", 225}, {"0.428", 99}}},
       {{{"0.000", 60}, {"0.167", 50}, {"0.309", 34}}},
       {{{"0.000", 6}, {"0.167", 5}, {"0.167", 5}}}},
      {{{{"1.000", 0}, {"0.800", 3}, {"0.918", 0}}},
       {{{"0.914", 9}, {"0.600", 42}, {"0.835", 0}}},
       {{{"0.747", 115}, {"0.418", 265}, {"0.745", 10}}},
       {{{"0.527", 645}, {"0.266", 1002}, {"0.641", 115}}},
       {{{"0.304", 2091}, {"0.152", 2547}, {"0.517", 603}}},
       {{{"0.128", 4365}, {"0.075", 4628}, {"0.378", 1873}}},
       {{{"0.030", 6243}, {"0.031", 6237}, {"0.235", 3775}}},
       {{{"0.000", 6435}, {"0.009", 6375}, {"0.111", 5115}}},
       {{{"0.000", 5005}, {"0.002", 4997}, {"0.030", 4717}}}}};
  return t;
}

Outcome projection_table() {
  Outcome o;
  const char* ids[3] = {"supp4.d1", "supp4.d3", "supp4.d6"};
  std::size_t cells = 0;
  for (std::size_t d = 0; d < 3; ++d) {
    ProjectionReport r = projection_report(fixture_design(ids[d]), {3, 4, 5, 6}, 10, 0);
    for (std::size_t fi = 0; fi < 4; ++fi) {
      const std::size_t f = fi + 3;
      const auto& rows = printed_table()[fi];
      for (std::size_t ti = 0; ti < rows.size(); ++ti) {
        const Cell& want = rows[ti][d];
        const ProjectionRow* got = r.find(f, ti + 1);
        ++cells;
        if (!got) {
          o.fail(std::string(ids[d]) + " missing f=" + std::to_string(f));
          continue;
        }
        if (fixed3(got->mean_as) != want.as || got->no_est != want.no_est)
          o.fail(std::string(ids[d]) + " f=" + std::to_string(f) + " t=" + std::to_string(ti + 1) +
                 " got (" + fixed3(got->mean_as) + "," + std::to_string(got->no_est) + ")");
      }
    }
  }
  o.note(std::to_string(cells) + " cells compared");
  return o;
}

Outcome local_optimality() {
  Outcome o;
  SplitMix64 g(77);
  std::size_t flips = 0;
  double worst = 0;
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 6 + g.next() % 11, m = 3 + g.next() % 8;
    const bool second = trial % 2;
    const Prior p{0.05 + (g.next() % 900) / 1000.0, second ? (g.next() % 1001) / 1000.0 : 0.0,
                  second ? ModelOrder::SecondOrder : ModelOrder::FirstOrder};
    OptimizerConfig cfg;
    cfg.runs = n;
    cfg.factors = m;
    cfg.prior = p;
    cfg.restarts = 3;
    cfg.seed = g.next();
    OptResult r = multi_restart(cfg);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < m; ++j) {
        ++flips;
        if (qb_delta(r.best, i, j, p) < -cfg.epsilon)
          o.fail("improving flip in output " + std::to_string(trial));
      }
  }
  for (int trial = 0; trial < 10000; ++trial) {
    const std::size_t n = 4 + g.next() % 13, m = 2 + g.next() % 9;
    Design d = random_design(n, m, g.next());
    const bool second = g.next() % 2;
    const Prior p{(g.next() % 1001) / 1000.0, second ? (g.next() % 1001) / 1000.0 : 0.0,
                  second ? ModelOrder::SecondOrder : ModelOrder::FirstOrder};
    const std::size_t i = g.next() % n, j = g.next() % m;
    const double full = qb(word_counts(d.flipped(i, j)), p) - qb(word_counts(d), p);
    worst = std::max(worst, std::fabs(qb_delta(d, i, j, p) - full));
  }
  if (worst > 1e-10) o.fail("max delta error " + fmt(worst));
  o.note(std::to_string(flips) + " flips checked, max delta error " + fmt(worst, 3));
  return o;
}

Outcome invariance() {
  Outcome o;
  SplitMix64 g(4242);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = 2 + g.next() % 19, m = 1 + g.next() % 10;
    Design d = random_design(n, m, g.next());
    const auto s = word_counts(d).s;
    if (word_counts(qbtest::permute_rows(d, qbtest::permutation(n, g.next()))).s != s)
      o.fail("row permutation, design " + std::to_string(trial));
    if (word_counts(d.select_factors(qbtest::permutation(m, g.next()))).s != s)
      o.fail("column permutation, design " + std::to_string(trial));
    if (word_counts(qbtest::negate_column(d, g.next() % m)).s != s)
      o.fail("sign switch, design " + std::to_string(trial));
  }
  return o;
}

}  // namespace

int main() {
  const std::vector<std::function<Outcome()>> criteria{
      word_count_fixtures, xtx_reproduction, sweep_crossovers, xi_oracle,        general_form,
      interval_table,       optimizer_attainment, projection_table, local_optimality, invariance};
  int failed = 0;
  for (std::size_t c = 0; c < criteria.size(); ++c) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[c]();
    } catch (const std::exception& e) {
      o.fail(std::string("exception: ") + e.what());
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("criterion %zu: %s (%.2fs)", c + 1, o.pass ? "PASS" : "FAIL", secs);
    for (const auto& n : o.notes) std::printf("; %s", n.c_str());
    std::printf("\n");
    std::fflush(stdout);
    failed += !o.pass;
  }
  return failed ? 1 : 0;
}
