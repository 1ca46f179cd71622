#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "qbdesign/design.hpp"

namespace qbdesign {

struct ProjectionRow {
  std::size_t f = 0;
  std::size_t t = 0;
  std::int64_t n_models = 0;
  std::int64_t no_est = 0;
  double mean_as = 0.0;  // non-estimable models count as 0
};

struct ProjectionReport {
  std::vector<ProjectionRow> rows;  // ordered by f, then t

  const ProjectionRow* find(std::size_t f, std::size_t t) const;
};

/// For each f in `f_values` and t = 0..min(C(f,2), t_max), averages A_s over
/// every f-subset of factors with all f main effects plus every t-subset of
/// the f-subset's interactions.
ProjectionReport projection_report(const Design& d, const std::vector<std::size_t>& f_values,
                                   std::optional<std::size_t> t_max = std::nullopt,
                                   std::size_t threads = 1);

/// "f,t,n_models,no_est,mean_as" with mean_as to 3 decimals.
std::string projection_csv(const ProjectionReport& r);

}  // namespace qbdesign
