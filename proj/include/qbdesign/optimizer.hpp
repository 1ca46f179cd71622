#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <vector>

#include "qbdesign/criteria.hpp"
#include "qbdesign/design.hpp"
#include "qbdesign/word_counts.hpp"

namespace qbdesign {

struct OptimizerConfig {
  std::size_t runs = 0;
  std::size_t factors = 0;
  Prior prior;
  std::size_t restarts = 100;
  std::uint64_t seed = 1;
  std::size_t max_stale_sweeps = 2;  // T
  double epsilon = 1e-9;
  bool tiebreak_as = true;
  std::size_t threads = 1;  // 0 = hardware concurrency

  void validate() const;
};

struct RestartRecord {
  std::size_t index = 0;
  std::uint64_t seed = 0;
  double initial_qb = 0.0;
  double qb = 0.0;
  std::size_t sweeps = 0;

  friend bool operator==(const RestartRecord&, const RestartRecord&) = default;
};

struct OptResult {
  Design best;
  double qb = 0.0;
  WordCounts word_counts;
  std::vector<RestartRecord> restart_log;
  std::size_t n_level_balanced = 0;
  std::size_t best_restart = 0;
  std::optional<double> as;  // main-effects A_s of `best`
};

/// Cached J-characteristics for every factor subset of size <= k_max, with
/// O(#subsets containing j) evaluation and application of single flips.
class ExchangeState {
 public:
  ExchangeState(const Design& d, const Prior& p);

  std::size_t runs() const { return n_; }
  std::size_t factors() const { return m_; }

  /// Q_B after flipping (i, j) minus Q_B now.
  double delta(std::size_t i, std::size_t j) const;
  void flip(std::size_t i, std::size_t j);

  double qb() const;
  WordCounts counts() const;
  Design design() const;

  /// Cached J values agree with a fresh computation.
  bool consistent() const;

 private:
  struct Member {
    std::uint32_t k;
    std::uint32_t idx;
    std::uint8_t nothers;
    std::uint8_t others[3];
  };

  int x(std::size_t i, std::size_t j) const { return x_[i * m_ + j]; }

  std::size_t n_, m_, k_max_;
  Prior prior_;
  std::array<double, 4> c_;
  std::vector<std::int8_t> x_;
  std::vector<std::int64_t> j_;             // J_s for all subsets, grouped by size
  std::vector<std::vector<int>> subsets_;   // factor lists matching j_
  std::vector<std::vector<Member>> members_;  // per factor
  std::array<std::int64_t, 4> s_{};         // S_1..S_4
};

double qb_delta(const Design& d, std::size_t i, std::size_t j, const Prior& p);

struct ExchangeResult {
  Design design;
  double qb = 0.0;
  std::size_t sweeps = 0;
};

/// Row-major first-improvement sweeps; a flip is taken iff it lowers Q_B by
/// more than epsilon. Stops after `max_stale_sweeps` sweeps in a row without
/// an accepted flip.
ExchangeResult coordinate_exchange(const Design& start, const Prior& p,
                                   std::size_t max_stale_sweeps = 2, double epsilon = 1e-9);

/// Seed used for restart `index`.
std::uint64_t restart_seed(std::uint64_t base, std::size_t index);

/// Writes "restart=<k> seed=<s> qb=<v> sweeps=<n>" per restart to `log` when given.
OptResult multi_restart(const OptimizerConfig& cfg, std::ostream* log = nullptr);

}  // namespace qbdesign
