#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "qbdesign/design.hpp"

namespace qbdesign::cli {

/// "@id" loads a fixture design, anything else is a design file path.
Design load_design_arg(const std::string& arg);

/// --threads value, else QBDESIGN_THREADS, else 0 (hardware concurrency).
std::size_t resolve_threads(std::optional<std::size_t> flag);

struct EvaluateArgs {
  std::string design;
  int order = 1;
  double pi1 = 0.5;
  double pi2 = 0.5;
  bool table = false;
  std::optional<std::size_t> dump_k;  // per-subset J listing for this k
};
int cmd_evaluate(const EvaluateArgs& a, std::ostream& out);

struct OptimizeArgs {
  std::size_t runs = 0;
  std::size_t factors = 0;
  int order = 1;
  double pi1 = 0.5;
  double pi2 = 0.5;
  std::size_t restarts = 100;
  std::uint64_t seed = 1;
  std::size_t stale = 2;
  double epsilon = 1e-9;
  bool tiebreak_as = true;
  std::string output;
  bool log = false;
  std::size_t threads = 0;
  bool table = false;
};
int cmd_optimize(const OptimizeArgs& a, std::ostream& out);

struct SweepArgs {
  std::vector<std::string> designs;
  double lo = 0.1;
  double hi = 0.8;
  double step = 0.001;
  int order = 1;
  double pi2 = 0.0;
  bool table = false;
};
int cmd_sweep(const SweepArgs& a, std::ostream& out);

struct ProjectArgs {
  std::string design;
  std::vector<std::size_t> f;
  std::optional<std::size_t> t_max;
  std::size_t threads = 0;
};
int cmd_project(const ProjectArgs& a, std::ostream& out);

struct TheoryArgs {
  std::size_t runs = 0;
  std::optional<std::size_t> factors;
  std::optional<double> pi1;
  std::string design;
  bool table = false;
};
int cmd_theory(const TheoryArgs& a, std::ostream& out);

int cmd_fixtures_list(std::ostream& out);
int cmd_fixtures_check(const std::vector<std::string>& ids, std::ostream& out);

/// Parses argv and dispatches; errors go to `err` with a nonzero return.
int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err);

}  // namespace qbdesign::cli
