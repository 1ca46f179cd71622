#include "commands.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "qbdesign/criteria.hpp"
#include "qbdesign/error.hpp"
#include "qbdesign/fixtures.hpp"
#include "qbdesign/optimizer.hpp"
#include "qbdesign/projection.hpp"
#include "qbdesign/theory.hpp"
#include "qbdesign/word_counts.hpp"

namespace qbdesign::cli {

namespace {

ModelOrder to_order(int o) {
  if (o == 1) return ModelOrder::FirstOrder;
  if (o == 2) return ModelOrder::SecondOrder;
  throw InvalidArgument("order must be 1 or 2");
}

// 6 significant digits, or 3 decimals in table mode.
struct Num {
  double v;
  bool table;
};
std::ostream& operator<<(std::ostream& os, Num n) {
  std::ios::fmtflags f = os.flags();
  std::streamsize p = os.precision();
  if (n.table)
    os << std::fixed << std::setprecision(3) << n.v;
  else
    os << std::defaultfloat << std::setprecision(6) << n.v;
  os.flags(f);
  os.precision(p);
  return os;
}

std::string name_of(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') return arg.substr(1);
  auto slash = arg.find_last_of('/');
  std::string base = slash == std::string::npos ? arg : arg.substr(slash + 1);
  auto dot = base.find_last_of('.');
  return dot == std::string::npos ? base : base.substr(0, dot);
}

void print_counts(std::ostream& out, const WordCounts& w, bool table) {
  for (std::size_t k = 1; k <= w.k_max(); ++k)
    out << "b" << k << "=" << to_string(w.b_exact(k)) << " (" << Num{w.b(k), table} << ")\n";
}

void print_as(std::ostream& out, const std::optional<double>& as, bool table) {
  out << "As=";
  if (as)
    out << Num{*as, table};
  else
    out << "non-estimable";
  out << "\n";
}

}  // namespace

Design load_design_arg(const std::string& arg) {
  if (!arg.empty() && arg[0] == '@') return fixture_design(arg.substr(1));
  return read_design_file(arg);
}

std::size_t resolve_threads(std::optional<std::size_t> flag) {
  if (flag) return *flag;
  if (const char* env = std::getenv("QBDESIGN_THREADS"); env && *env) {
    try {
      return static_cast<std::size_t>(std::stoul(env));
    } catch (const std::exception&) {
      throw InvalidArgument(std::string("QBDESIGN_THREADS is not a count: ") + env);
    }
  }
  return 0;
}

int cmd_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const Design d = load_design_arg(a.design);
  const Prior p{a.pi1, a.pi2, to_order(a.order)};
  p.validate();
  const WordCounts w = word_counts(d);
  const BalanceProfile bp = balance_profile(d);
  out << "N=" << d.runs() << " m=" << d.factors() << "\n";
  out << "level_balanced=" << bp.balanced << " unbalanced=" << bp.unbalanced << " imbalance=";
  for (std::size_t j = 0; j < bp.imbalance.size(); ++j) out << (j ? "," : "") << bp.imbalance[j];
  out << "\n";
  print_counts(out, w, a.table);
  out << "QB=" << Num{qb(w, p), a.table} << "\n";
  if (d.factors() >= 2) {
    const Es2Result e = es2(d);
    out << "Es2=" << Num{e.value, a.table} << " b1_zero=" << (e.b1_zero ? "true" : "false") << "\n";
  }
  const Rational ue = ue_s2(d);
  out << "UEs2=" << to_string(ue) << " (" << Num{boost::rational_cast<double>(ue), a.table} << ")\n";
  print_as(out, as_efficiency_main(d), a.table);
  if (a.dump_k) out << word_count_dump(d, *a.dump_k);
  return 0;
}

int cmd_optimize(const OptimizeArgs& a, std::ostream& out) {
  OptimizerConfig cfg;
  cfg.runs = a.runs;
  cfg.factors = a.factors;
  cfg.prior = Prior{a.pi1, a.pi2, to_order(a.order)};
  cfg.restarts = a.restarts;
  cfg.seed = a.seed;
  cfg.max_stale_sweeps = a.stale;
  cfg.epsilon = a.epsilon;
  cfg.tiebreak_as = a.tiebreak_as;
  cfg.threads = a.threads;
  const OptResult r = multi_restart(cfg, a.log ? &out : nullptr);
  if (!a.output.empty()) write_design_file(r.best, a.output);
  out << "N=" << a.runs << " m=" << a.factors << " order=" << a.order << " restarts=" << a.restarts
      << " seed=" << a.seed << "\n";
  out << "best_restart=" << r.best_restart << " QB=" << Num{r.qb, a.table} << "\n";
  print_counts(out, r.word_counts, a.table);
  out << "level_balanced=" << r.n_level_balanced << "\n";
  print_as(out, r.as, a.table);
  if (a.output.empty()) out << serialize_design(r.best);
  return 0;
}

int cmd_sweep(const SweepArgs& a, std::ostream& out) {
  if (a.designs.size() < 2) throw InvalidArgument("sweep needs at least two designs");
  if (!(a.lo >= 0.0 && a.lo < a.hi && a.hi <= 1.0)) throw InvalidArgument("need 0 <= lo < hi <= 1");
  if (!(a.step > 0.0)) throw InvalidArgument("step must be positive");
  const ModelOrder order = to_order(a.order);

  std::vector<std::string> names;
  std::vector<WordCounts> counts;
  for (const auto& s : a.designs) {
    names.push_back(name_of(s));
    counts.push_back(word_counts(load_design_arg(s)));
  }

  out << "pi1";
  for (const auto& n : names) out << ",qb_" << n;
  for (const auto& n : names) out << ",eff_" << n;
  out << ",argmin\n";

  const auto steps = static_cast<long>(std::floor((a.hi - a.lo) / a.step + 1e-9));
  std::vector<std::string> crossings;
  long prev_arg = -1;
  double prev_pi = 0.0;
  std::vector<double> q(counts.size());
  for (long k = 0; k <= steps; ++k) {
    const double pi = a.lo + static_cast<double>(k) * a.step;
    const Prior p{pi, a.pi2, order};
    for (std::size_t i = 0; i < counts.size(); ++i) q[i] = qb(counts[i], p);
    const auto arg = static_cast<long>(std::min_element(q.begin(), q.end()) - q.begin());
    const double best = q[arg];
    out << Num{pi, a.table};
    for (double v : q) out << "," << Num{v, a.table};
    for (double v : q) out << "," << Num{v > 0.0 ? best / v : 1.0, a.table};
    out << "," << names[arg] << "\n";
    if (prev_arg >= 0 && arg != prev_arg) {
      std::ostringstream c;
      c << "# crossover pi1=" << Num{(prev_pi + pi) / 2, a.table} << " " << names[prev_arg]
        << " -> " << names[arg];
      if (order == ModelOrder::FirstOrder) {
        if (auto t = first_order_tie_point(counts[prev_arg], counts[arg]))
          c << " exact=" << to_string(*t);
      }
      crossings.push_back(c.str());
    }
    prev_arg = arg;
    prev_pi = pi;
  }
  for (const auto& c : crossings) out << c << "\n";
  return 0;
}

int cmd_project(const ProjectArgs& a, std::ostream& out) {
  const Design d = load_design_arg(a.design);
  std::vector<std::size_t> f = a.f;
  if (f.empty())
    for (std::size_t k = 1; k <= d.factors(); ++k) f.push_back(k);
  out << projection_csv(projection_report(d, f, a.t_max, a.threads));
  return 0;
}

int cmd_theory(const TheoryArgs& a, std::ostream& out) {
  if (a.runs % 4 != 2) throw BadCongruence("N = " + std::to_string(a.runs) + " is not 2 mod 4");
  if (a.factors) {
    const BalanceIntervals bi = balance_intervals(a.runs, *a.factors);
    out << "N=" << a.runs << " m=" << *a.factors << " K=" << bi.K << "\n";
    out << "interval,lo,hi,level_balanced,non_level_balanced\n";
    for (std::size_t k = 0; k < bi.intervals.size(); ++k) {
      const auto& iv = bi.intervals[k];
      out << k + 1 << "," << to_string(iv.lo) << "," << to_string(iv.hi) << ","
          << iv.level_balanced << "," << iv.non_level_balanced << "\n";
    }
    if (a.pi1) {
      if (!(*a.pi1 > 0.0 && *a.pi1 <= 1.0)) throw InvalidArgument("pi1 must lie in (0, 1]");
      const std::size_t k = bi.locate(*a.pi1);
      const std::size_t n1 = bi.intervals[k - 1].level_balanced;
      out << "pi1=" << Num{*a.pi1, a.table} << " interval=" << k << " level_balanced=" << n1
          << " non_level_balanced=" << *a.factors - n1
          << " qb=" << Num{qb_block_value(a.runs, *a.factors, n1, *a.pi1), a.table} << "\n";
    }
  }
  if (!a.design.empty()) {
    const Design d = load_design_arg(a.design);
    const PatternReport rep = verify_block_pattern(d);
    out << "pattern=" << (rep.matches ? "match" : "mismatch") << " n1=" << rep.n1
        << " balanced_sign=" << to_string(rep.balanced_sign)
        << " unbalanced_sign=" << to_string(rep.unbalanced_sign) << "\n";
    for (const auto& v : rep.violations) {
      auto lab = [&](std::size_t i) { return i == 0 ? std::string("1") : std::to_string(i); };
      out << "violation " << lab(v.i) << "," << lab(v.j) << " a=" << v.a
          << " expected=+-" << v.expected_abs << "\n";
    }
  }
  return 0;
}

int cmd_fixtures_list(std::ostream& out) {
  for (const auto& id : fixture_ids()) {
    const Fixture f = load_fixture(id);
    out << id;
    if (f.design) out << " " << f.design->runs() << "x" << f.design->factors();
    else out << " listing-only";
    out << " \"" << f.source << "\"\n";
  }
  return 0;
}

int cmd_fixtures_check(const std::vector<std::string>& ids, std::ostream& out) {
  std::vector<std::string> todo = ids.empty() ? fixture_ids() : ids;
  int failed = 0;
  for (const auto& id : todo) {
    const FixtureCheck c = check_fixture(load_fixture(id));
    out << (c.ok() ? "ok   " : "FAIL ") << id << "\n";
    for (const auto& it : c.items)
      out << "     " << (it.ok ? "ok   " : "FAIL ") << it.name << ": " << it.detail << "\n";
    failed += !c.ok();
  }
  out << todo.size() - static_cast<std::size_t>(failed) << "/" << todo.size() << " fixtures ok\n";
  return failed ? 1 : 0;
}

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Q_B evaluation and construction of two-level screening designs", "qbdesign"};
  app.require_subcommand(1);
  app.fallthrough();
  std::optional<std::size_t> threads;
  app.add_option("--threads", threads, "worker threads (default: QBDESIGN_THREADS, else all cores)");

  EvaluateArgs ev;
  auto* e = app.add_subcommand("evaluate", "criteria for one design");
  e->add_option("design", ev.design, "design file, or @fixture-id")->required();
  e->add_option("--order", ev.order, "maximal model order (1 or 2)");
  e->add_option("--pi1", ev.pi1);
  e->add_option("--pi2", ev.pi2);
  e->add_flag("--table", ev.table, "3-decimal output");
  std::size_t dump_k = 0;
  auto* ed = e->add_option("--dump", dump_k, "list J and R for every k-subset");

  OptimizeArgs op;
  auto* o = app.add_subcommand("optimize", "multi-restart coordinate exchange");
  o->add_option("--runs", op.runs)->required();
  o->add_option("--factors", op.factors)->required();
  o->add_option("--order", op.order);
  o->add_option("--pi1", op.pi1);
  o->add_option("--pi2", op.pi2);
  o->add_option("--restarts", op.restarts);
  o->add_option("--seed", op.seed);
  o->add_option("--stale", op.stale, "stale sweeps before stopping (T)");
  o->add_option("--epsilon", op.epsilon);
  o->add_flag("!--no-tiebreak", op.tiebreak_as, "skip the A_s tie-break");
  o->add_option("--output", op.output, "write the best design here");
  o->add_flag("--log", op.log, "print one line per restart");
  o->add_flag("--table", op.table);

  SweepArgs sw;
  auto* s = app.add_subcommand("sweep", "Q_B over a pi1 grid for several designs");
  s->add_option("designs", sw.designs)->required();
  s->add_option("--lo", sw.lo);
  s->add_option("--hi", sw.hi);
  s->add_option("--step", sw.step);
  s->add_option("--order", sw.order);
  s->add_option("--pi2", sw.pi2);
  s->add_flag("--table", sw.table);

  ProjectArgs pr;
  std::size_t t_max = 0;
  auto* p = app.add_subcommand("project", "projection A_s and estimability report");
  p->add_option("design", pr.design)->required();
  p->add_option("--f", pr.f, "projection sizes")->delimiter(',');
  auto* tmo = p->add_option("--tmax", t_max, "largest interaction count");

  TheoryArgs th;
  std::size_t th_factors = 0;
  double th_pi1 = 0.0;
  auto* t = app.add_subcommand("theory", "level-balance intervals and block-pattern check");
  t->add_option("--runs", th.runs)->required();
  auto* tf = t->add_option("--factors", th_factors);
  auto* tp = t->add_option("--pi1", th_pi1);
  t->add_option("--design", th.design);
  t->add_flag("--table", th.table);

  std::vector<std::string> fx_ids;
  auto* fx = app.add_subcommand("fixtures", "bundled design corpus");
  fx->require_subcommand(1);
  fx->add_subcommand("list", "list fixture ids");
  auto* fc = fx->add_subcommand("check", "verify fixtures against their expectations");
  fc->add_option("ids", fx_ids);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& ex) {
    return app.exit(ex, out, err);
  }

  try {
    const std::size_t nthreads = resolve_threads(threads);
    if (*e) {
      if (*ed) ev.dump_k = dump_k;
      return cmd_evaluate(ev, out);
    }
    if (*o) {
      op.threads = nthreads;
      return cmd_optimize(op, out);
    }
    if (*s) return cmd_sweep(sw, out);
    if (*p) {
      if (*tmo) pr.t_max = t_max;
      pr.threads = nthreads;
      return cmd_project(pr, out);
    }
    if (*t) {
      if (*tf) th.factors = th_factors;
      if (*tp) th.pi1 = th_pi1;
      return cmd_theory(th, out);
    }
    if (*fx) {
      if (fx->got_subcommand("list")) return cmd_fixtures_list(out);
      return cmd_fixtures_check(fx_ids, out);
    }
  } catch (const ParseError& ex) {
    const char* kind = "parse";
    switch (ex.kind()) {
      case ParseError::Kind::NonBinaryEntry: kind = "NonBinaryEntry"; break;
      case ParseError::Kind::RaggedRows: kind = "RaggedRows"; break;
      case ParseError::Kind::Empty: kind = "Empty"; break;
      case ParseError::Kind::BadToken: kind = "BadToken"; break;
    }
    err << "error: " << kind << ": " << ex.what() << "\n";
    return 2;
  } catch (const BadCongruence& ex) {
    err << "error: BadCongruence: " << ex.what() << "\n";
    return 3;
  } catch (const Error& ex) {
    err << "error: " << ex.what() << "\n";
    return 1;
  }
  return 1;
}

}  // namespace qbdesign::cli
