#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "qbdesign/design.hpp"
#include "qbdesign/word_counts.hpp"

namespace qbdesign {

struct Fixture {
  std::string id;
  std::string source;
  std::string erratum;
  std::optional<Design> design;  // absent for listing-only fixtures
  std::optional<InfoMatrix> expected_xtx;
  ModelOrder xtx_order = ModelOrder::FirstOrder;
  std::array<std::optional<Rational>, 4> expected_b;
  std::optional<std::size_t> expected_level_balanced;
  std::optional<bool> expected_pattern;
  // Printed listing column c corresponds to design column xtx_perm[c]
  // (0-based), and entry (r, c) carries the sign xtx_signs[r] * xtx_signs[c].
  std::vector<std::size_t> xtx_perm;
  std::vector<int> xtx_signs;

  std::size_t factors() const;
  /// Design counts when a design is present, otherwise counts implied by the listing.
  WordCounts word_counts() const;
};

/// QBDESIGN_FIXTURES if set, else the data directory of the source tree.
std::string fixture_dir();

std::vector<std::string> fixture_ids();
Fixture load_fixture(const std::string& id);
/// Shorthand for load_fixture(id).design; throws InvalidArgument if absent.
Design fixture_design(const std::string& id);

/// information_matrix(design) equals the printed listing entry for entry.
bool xtx_exact_match(const Fixture& f);

struct CheckItem {
  std::string name;
  bool ok = false;
  std::string detail;
};

struct FixtureCheck {
  std::string id;
  std::vector<CheckItem> items;
  bool ok() const;
};

FixtureCheck check_fixture(const Fixture& f);

}  // namespace qbdesign
