#include "qbdesign/fixtures.hpp"

#include <cstdlib>
#include <fstream>
#include <map>
#include <sstream>

#include "qbdesign/error.hpp"
#include "qbdesign/theory.hpp"

#ifndef QBDESIGN_FIXTURE_DIR
#define QBDESIGN_FIXTURE_DIR "data/fixtures"
#endif

namespace qbdesign {

std::string fixture_dir() {
  if (const char* env = std::getenv("QBDESIGN_FIXTURES"); env && *env) return env;
  return QBDESIGN_FIXTURE_DIR;
}

namespace {

struct Entry {
  std::string id;
  std::string path;
  std::map<std::string, std::string> kv;
};

std::vector<std::string> tokenize(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  bool quoted = false;
  for (char ch : line) {
    if (ch == '"') {
      quoted = !quoted;
    } else if (!quoted && (ch == ' ' || ch == '\t')) {
      if (!cur.empty()) out.push_back(std::move(cur));
      cur.clear();
    } else {
      cur += ch;
    }
  }
  if (!cur.empty()) out.push_back(std::move(cur));
  return out;
}

std::vector<Entry> read_manifest() {
  const std::string path = fixture_dir() + "/manifest.txt";
  std::ifstream in(path);
  if (!in) throw UnknownFixture("cannot open fixture manifest " + path);
  std::vector<Entry> entries;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    auto toks = tokenize(line);
    if (toks.size() < 2) continue;
    Entry e{toks[0], toks[1], {}};
    for (std::size_t k = 2; k < toks.size(); ++k) {
      auto eq = toks[k].find('=');
      if (eq == std::string::npos) throw InvalidArgument("manifest token without '=': " + toks[k]);
      e.kv[toks[k].substr(0, eq)] = toks[k].substr(eq + 1);
    }
    entries.push_back(std::move(e));
  }
  return entries;
}

Rational parse_rational(const std::string& s) {
  auto slash = s.find('/');
  if (slash == std::string::npos) return Rational(std::stoll(s));
  return Rational(std::stoll(s.substr(0, slash)), std::stoll(s.substr(slash + 1)));
}

template <class T>
std::vector<T> parse_list(const std::string& s) {
  std::vector<T> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) out.push_back(static_cast<T>(std::stoll(item)));
  return out;
}

std::size_t factors_for_listing(std::size_t size, ModelOrder order) {
  for (std::size_t m = 1; m < size; ++m)
    if (model_size(m, order) + 1 == size) return m;
  throw DimensionMismatch("listing size " + std::to_string(size) +
                          " does not match any factor count");
}

}  // namespace

std::size_t Fixture::factors() const {
  if (design) return design->factors();
  if (expected_xtx) {
    std::size_t mains = 0;
    for (const Term& t : expected_xtx->terms()) mains += !t.is_interaction();
    return mains;
  }
  return 0;
}

WordCounts Fixture::word_counts() const {
  if (design) return qbdesign::word_counts(*design);
  if (expected_xtx) return implied_word_counts(*expected_xtx, factors());
  throw InvalidArgument("fixture " + id + " has neither design nor listing");
}

std::vector<std::string> fixture_ids() {
  std::vector<std::string> ids;
  for (const auto& e : read_manifest()) ids.push_back(e.id);
  return ids;
}

Fixture load_fixture(const std::string& id) {
  for (const auto& e : read_manifest()) {
    if (e.id != id) continue;
    const std::string dir = fixture_dir() + "/";
    Fixture f;
    f.id = id;
    auto get = [&](const std::string& k) -> const std::string* {
      auto it = e.kv.find(k);
      return it == e.kv.end() ? nullptr : &it->second;
    };
    if (auto s = get("source")) f.source = *s;
    if (auto s = get("erratum")) f.erratum = *s;
    if (e.path != "-") {
      Design d = read_design_file(dir + e.path);
      if (auto s = get("cols")) {
        std::vector<std::size_t> cols;
        for (auto c : parse_list<std::size_t>(*s)) {
          if (c < 1) throw BadSubset("fixture columns are 1-based");
          cols.push_back(c - 1);
        }
        d = d.select_factors(cols);
      }
      f.design = std::move(d);
    }
    if (auto s = get("order")) f.xtx_order = *s == "2" ? ModelOrder::SecondOrder : ModelOrder::FirstOrder;
    if (auto s = get("xtx")) {
      std::ifstream in(dir + *s);
      if (!in) throw InvalidArgument("cannot open listing " + dir + *s);
      auto rows = read_int_matrix(in);
      const std::size_t m = f.design ? f.design->factors() : factors_for_listing(rows.size(), f.xtx_order);
      f.expected_xtx = InfoMatrix::from_listing(m, f.xtx_order, rows);
    }
    for (std::size_t k = 1; k <= 4; ++k)
      if (auto s = get("b" + std::to_string(k))) f.expected_b[k - 1] = parse_rational(*s);
    if (auto s = get("lb")) f.expected_level_balanced = std::stoul(*s);
    if (auto s = get("pattern")) f.expected_pattern = *s == "match";
    if (auto s = get("xtx_perm"))
      for (auto c : parse_list<std::size_t>(*s)) f.xtx_perm.push_back(c - 1);
    if (auto s = get("xtx_signs")) f.xtx_signs = parse_list<int>(*s);
    return f;
  }
  throw UnknownFixture("unknown fixture '" + id + "'");
}

Design fixture_design(const std::string& id) {
  Fixture f = load_fixture(id);
  if (!f.design) throw InvalidArgument("fixture " + id + " has no design matrix");
  return *f.design;
}

bool xtx_exact_match(const Fixture& f) {
  if (!f.design || !f.expected_xtx) return false;
  return information_matrix(*f.design, f.xtx_order) == *f.expected_xtx;
}

bool FixtureCheck::ok() const {
  for (const auto& it : items)
    if (!it.ok) return false;
  return true;
}

namespace {

bool mapped_match(const Fixture& f) {
  Design d = f.design->select_factors(f.xtx_perm);
  InfoMatrix im = information_matrix(d, f.xtx_order);
  const InfoMatrix& want = *f.expected_xtx;
  if (im.size() != want.size() || f.xtx_signs.size() != im.size()) return false;
  for (std::size_t r = 0; r < im.size(); ++r)
    for (std::size_t c = 0; c < im.size(); ++c)
      if (im(r, c) * f.xtx_signs[r] * f.xtx_signs[c] != want(r, c)) return false;
  return true;
}

}  // namespace

FixtureCheck check_fixture(const Fixture& f) {
  FixtureCheck out{f.id, {}};
  if (f.expected_xtx) {
    if (f.design) {
      if (xtx_exact_match(f)) {
        out.items.push_back({"xtx", true, "reproduced exactly"});
      } else if (!f.xtx_perm.empty()) {
        bool ok = mapped_match(f);
        out.items.push_back({"xtx", ok,
                             ok ? "reproduced after the recorded column relabeling and sign switches"
                                : "not reproduced, even after the recorded relabeling"});
      } else {
        out.items.push_back({"xtx", false, "information matrix differs from the listing"});
      }
    } else {
      try {
        implied_word_counts(*f.expected_xtx, f.factors());
        out.items.push_back({"xtx", true, "listing is a consistent J-characteristic table"});
      } catch (const InconsistentInfo& e) {
        out.items.push_back({"xtx", false, e.what()});
      }
    }
  }

  bool need_counts = false;
  for (const auto& b : f.expected_b) need_counts |= b.has_value();
  if (need_counts) {
    WordCounts w = f.word_counts();
    for (std::size_t k = 1; k <= 4; ++k) {
      if (!f.expected_b[k - 1]) continue;
      std::string name = "b" + std::to_string(k);
      if (k > w.k_max() && f.design && k <= f.design->factors())
        w = qbdesign::word_counts(*f.design, k);
      const Rational got = w.b_exact(k);
      const bool ok = got == *f.expected_b[k - 1];
      out.items.push_back({name, ok, "got " + to_string(got) + ", expected " +
                                         to_string(*f.expected_b[k - 1])});
    }
  }

  if (f.expected_level_balanced) {
    std::size_t lb = 0;
    if (f.design) {
      lb = balance_profile(*f.design).balanced;
    } else if (f.expected_xtx) {
      for (std::size_t c = 1; c < f.expected_xtx->size(); ++c)
        lb += !f.expected_xtx->terms()[c - 1].is_interaction() && (*f.expected_xtx)(0, c) == 0;
    }
    out.items.push_back({"level_balanced", lb == *f.expected_level_balanced,
                         "got " + std::to_string(lb) + ", expected " +
                             std::to_string(*f.expected_level_balanced)});
  }

  if (f.expected_pattern) {
    PatternReport rep = f.design ? verify_block_pattern(*f.design)
                                 : verify_block_pattern(*f.expected_xtx);
    out.items.push_back({"pattern", rep.matches == *f.expected_pattern,
                         std::string(rep.matches ? "matches" : "does not match") + " (" +
                             std::to_string(rep.violations.size()) + " violations)"});
  }
  return out;
}

}  // namespace qbdesign
