#include "qbdesign/optimizer.hpp"

#include <algorithm>
#include <atomic>
#include <cassert>
#include <ostream>
#include <thread>

#include "qbdesign/combinatorics.hpp"
#include "qbdesign/error.hpp"
#include "qbdesign/rng.hpp"

namespace qbdesign {

void OptimizerConfig::validate() const {
  if (runs < 2) throw InvalidArgument("runs must be at least 2");
  if (factors < 1) throw InvalidArgument("factors must be at least 1");
  if (restarts < 1) throw InvalidArgument("restarts must be at least 1");
  if (max_stale_sweeps < 1) throw InvalidArgument("T must be at least 1");
  if (!(epsilon >= 0.0)) throw InvalidArgument("epsilon must be nonnegative");
  prior.validate();
}

ExchangeState::ExchangeState(const Design& d, const Prior& p)
    : n_(d.runs()),
      m_(d.factors()),
      k_max_(std::min<std::size_t>(p.order == ModelOrder::SecondOrder ? 4 : 2, d.factors())),
      prior_(p),
      c_(qb_coefficients(p, d.factors())),
      x_(d.entries().begin(), d.entries().end()),
      members_(d.factors()) {
  for (std::size_t k = 1; k <= k_max_; ++k) {
    for_each_combination(static_cast<int>(m_), static_cast<int>(k), [&](const std::vector<int>& s) {
      const auto idx = static_cast<std::uint32_t>(subsets_.size());
      std::int64_t js = 0;
      for (std::size_t i = 0; i < n_; ++i) {
        int pr = 1;
        for (int f : s) pr *= x(i, f);
        js += pr;
      }
      subsets_.push_back(s);
      j_.push_back(js);
      s_[k - 1] += js * js;
      for (int f : s) {
        Member mb{static_cast<std::uint32_t>(k), idx, 0, {0, 0, 0}};
        for (int g : s)
          if (g != f) mb.others[mb.nothers++] = static_cast<std::uint8_t>(g);
        members_[f].push_back(mb);
      }
    });
  }
}

double ExchangeState::delta(std::size_t i, std::size_t j) const {
  // Flipping x_ij maps J_s to J_s - 2 p_s for every s containing j, where p_s
  // is the current row product over s, so S_k moves by 4 sum (1 - p_s J_s).
  std::array<std::int64_t, 4> ds{};
  const int xij = x(i, j);
  const std::int8_t* row = x_.data() + i * m_;
  for (const Member& mb : members_[j]) {
    int pr = xij;
    for (std::uint8_t t = 0; t < mb.nothers; ++t) pr *= row[mb.others[t]];
    ds[mb.k - 1] += 1 - pr * j_[mb.idx];
  }
  const double n2 = static_cast<double>(n_) * static_cast<double>(n_);
  double total = 0.0;
  for (std::size_t k = 0; k < 4; ++k)
    if (c_[k] != 0.0) total += c_[k] * static_cast<double>(4 * ds[k]) / n2;
  return total;
}

void ExchangeState::flip(std::size_t i, std::size_t j) {
  const int xij = x(i, j);
  const std::int8_t* row = x_.data() + i * m_;
  for (const Member& mb : members_[j]) {
    int pr = xij;
    for (std::uint8_t t = 0; t < mb.nothers; ++t) pr *= row[mb.others[t]];
    std::int64_t& js = j_[mb.idx];
    const std::int64_t nj = js - 2 * pr;
    s_[mb.k - 1] += nj * nj - js * js;
    js = nj;
  }
  x_[i * m_ + j] = static_cast<std::int8_t>(-xij);
}

WordCounts ExchangeState::counts() const {
  return WordCounts{n_, m_, std::vector<std::int64_t>(s_.begin(), s_.begin() + k_max_)};
}

double ExchangeState::qb() const { return qb_from_counts(counts(), c_); }

Design ExchangeState::design() const { return Design(n_, m_, x_); }

bool ExchangeState::consistent() const {
  std::array<std::int64_t, 4> s{};
  for (std::size_t t = 0; t < subsets_.size(); ++t) {
    std::int64_t js = 0;
    for (std::size_t i = 0; i < n_; ++i) {
      int pr = 1;
      for (int f : subsets_[t]) pr *= x(i, f);
      js += pr;
    }
    if (js != j_[t]) return false;
    s[subsets_[t].size() - 1] += js * js;
  }
  return s == s_;
}

double qb_delta(const Design& d, std::size_t i, std::size_t j, const Prior& p) {
  if (i >= d.runs() || j >= d.factors()) throw InvalidArgument("flip index out of range");
  return ExchangeState(d, p).delta(i, j);
}

ExchangeResult coordinate_exchange(const Design& start, const Prior& p,
                                   std::size_t max_stale_sweeps, double epsilon) {
  p.validate();
  if (max_stale_sweeps < 1) throw InvalidArgument("T must be at least 1");
  ExchangeState st(start, p);
  std::size_t sweeps = 0, stale = 0;
  while (stale < max_stale_sweeps) {
    bool improved = false;
    for (std::size_t i = 0; i < st.runs(); ++i) {
      for (std::size_t j = 0; j < st.factors(); ++j) {
        if (st.delta(i, j) < -epsilon) {
          st.flip(i, j);
          improved = true;
          assert(st.consistent());
        }
      }
    }
    ++sweeps;
    stale = improved ? 0 : stale + 1;
  }
  return {st.design(), st.qb(), sweeps};
}

std::uint64_t restart_seed(std::uint64_t base, std::size_t index) {
  return SplitMix64::at(base, index);
}

OptResult multi_restart(const OptimizerConfig& cfg, std::ostream* log) {
  cfg.validate();
  struct Slot {
    std::optional<Design> design;
    RestartRecord rec;
  };
  std::vector<Slot> slots(cfg.restarts);
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t r = next++; r < cfg.restarts; r = next++) {
      const std::uint64_t seed = restart_seed(cfg.seed, r);
      Design start = random_design(cfg.runs, cfg.factors, seed);
      const double q0 = ExchangeState(start, cfg.prior).qb();
      ExchangeResult ex = coordinate_exchange(start, cfg.prior, cfg.max_stale_sweeps, cfg.epsilon);
      slots[r].rec = RestartRecord{r, seed, q0, ex.qb, ex.sweeps};
      slots[r].design = std::move(ex.design);
    }
  };
  std::size_t threads = cfg.threads ? cfg.threads : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min(threads, cfg.restarts);
  if (threads <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  double best_q = slots[0].rec.qb;
  for (const auto& s : slots) best_q = std::min(best_q, s.rec.qb);

  // Candidates within 1e-9 of the minimum; ties go to larger A_s, then lower index.
  std::size_t best = cfg.restarts;
  std::optional<double> best_as;
  for (std::size_t r = 0; r < cfg.restarts; ++r) {
    if (slots[r].rec.qb > best_q + 1e-9) continue;
    if (best == cfg.restarts) {
      best = r;
      if (cfg.tiebreak_as) best_as = as_efficiency_main(*slots[r].design);
      if (!cfg.tiebreak_as) break;
      continue;
    }
    std::optional<double> a = as_efficiency_main(*slots[r].design);
    if (a && (!best_as || *a > *best_as + 1e-12)) {
      best = r;
      best_as = a;
    }
  }

  if (log) {
    for (const auto& s : slots)
      *log << "restart=" << s.rec.index << " seed=" << s.rec.seed << " qb=" << s.rec.qb
           << " sweeps=" << s.rec.sweeps << "\n";
  }

  OptResult res{*slots[best].design, slots[best].rec.qb, {}, {}, 0, best, std::nullopt};
  res.word_counts = word_counts(res.best);
  res.n_level_balanced = balance_profile(res.best).balanced;
  res.as = cfg.tiebreak_as ? best_as : as_efficiency_main(res.best);
  res.restart_log.reserve(slots.size());
  for (const auto& s : slots) res.restart_log.push_back(s.rec);
  return res;
}

}  // namespace qbdesign
