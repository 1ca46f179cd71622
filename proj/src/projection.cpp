#include "qbdesign/projection.hpp"

#include <algorithm>
#include <atomic>
#include <iomanip>
#include <sstream>
#include <thread>

#include "qbdesign/combinatorics.hpp"
#include "qbdesign/criteria.hpp"
#include "qbdesign/error.hpp"

namespace qbdesign {

namespace {

struct Kahan {
  double sum = 0.0, c = 0.0;
  void add(double x) {
    const double y = x - c;
    const double t = sum + y;
    c = (t - sum) - y;
    sum = t;
  }
};

struct SubsetTally {
  std::vector<Kahan> as;
  std::vector<std::int64_t> no_est;
};

}  // namespace

const ProjectionRow* ProjectionReport::find(std::size_t f, std::size_t t) const {
  for (const auto& r : rows)
    if (r.f == f && r.t == t) return &r;
  return nullptr;
}

ProjectionReport projection_report(const Design& d, const std::vector<std::size_t>& f_values,
                                   std::optional<std::size_t> t_max, std::size_t threads) {
  const std::size_t m = d.factors();
  const InfoMatrix im = information_matrix(d, ModelOrder::SecondOrder);
  auto pair_col = [m](int a, int b) {
    const std::array<int, 2> c{a, b};
    return 1 + m + static_cast<std::size_t>(combination_rank(c.data(), 2, static_cast<int>(m)));
  };

  ProjectionReport rep;
  for (std::size_t f : f_values) {
    if (f < 1 || f > m) throw InvalidArgument("projection size must lie in 1..m");
    const std::size_t pairs = f * (f - 1) / 2;
    const std::size_t tt = std::min(pairs, t_max.value_or(pairs));

    std::vector<std::vector<int>> subsets;
    for_each_combination(static_cast<int>(m), static_cast<int>(f),
                         [&](const std::vector<int>& s) { subsets.push_back(s); });

    std::vector<SubsetTally> tally(subsets.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
      std::vector<std::size_t> cols;
      for (std::size_t u = next++; u < subsets.size(); u = next++) {
        const auto& s = subsets[u];
        SubsetTally& out = tally[u];
        out.as.assign(tt + 1, Kahan{});
        out.no_est.assign(tt + 1, 0);
        std::vector<std::size_t> inter;
        for (std::size_t a = 0; a < f; ++a)
          for (std::size_t b = a + 1; b < f; ++b) inter.push_back(pair_col(s[a], s[b]));
        for (std::size_t t = 0; t <= tt; ++t) {
          for_each_combination(static_cast<int>(pairs), static_cast<int>(t),
                               [&](const std::vector<int>& pick) {
                                 cols.clear();
                                 for (int j : s) cols.push_back(static_cast<std::size_t>(j) + 1);
                                 for (int p : pick) cols.push_back(inter[p]);
                                 auto e = as_efficiency(im, cols);
                                 if (e)
                                   out.as[t].add(*e);
                                 else
                                   ++out.no_est[t];
                               });
        }
      }
    };
    const std::size_t nt =
        std::min<std::size_t>(threads ? threads : std::max(1u, std::thread::hardware_concurrency()),
                              subsets.size());
    if (nt <= 1) {
      worker();
    } else {
      std::vector<std::thread> pool;
      for (std::size_t k = 0; k < nt; ++k) pool.emplace_back(worker);
      for (auto& th : pool) th.join();
    }

    for (std::size_t t = 0; t <= tt; ++t) {
      ProjectionRow row;
      row.f = f;
      row.t = t;
      row.n_models = binomial(static_cast<std::int64_t>(m), static_cast<std::int64_t>(f)) *
                     binomial(static_cast<std::int64_t>(pairs), static_cast<std::int64_t>(t));
      Kahan total;
      for (const auto& st : tally) {
        total.add(st.as[t].sum);
        row.no_est += st.no_est[t];
      }
      row.mean_as = total.sum / static_cast<double>(row.n_models);
      rep.rows.push_back(row);
    }
  }
  return rep;
}

std::string projection_csv(const ProjectionReport& r) {
  std::ostringstream out;
  out << "f,t,n_models,no_est,mean_as\n";
  out << std::fixed << std::setprecision(3);
  for (const auto& row : r.rows)
    out << row.f << ',' << row.t << ',' << row.n_models << ',' << row.no_est << ','
        << row.mean_as << "\n";
  return out.str();
}

}  // namespace qbdesign
