#include <doctest.h>

#include <cmath>
#include <sstream>

#include "qbdesign/design.hpp"
#include "qbdesign/error.hpp"
#include "qbdesign/fixtures.hpp"
#include "support.hpp"

using namespace qbdesign;
using qbtest::full_factorial;

TEST_CASE("parse minimal design") {
  Design d = parse_design(std::string_view("1 1\n-1 -1"));
  CHECK(d.runs() == 2);
  CHECK(d.factors() == 2);
  CHECK(d(1, 0) == -1);
}

TEST_CASE("parse rejects non-binary entry with 1-based location") {
  try {
    parse_design(std::string_view("1 0"));
    FAIL("expected ParseError");
  } catch (const ParseError& e) {
    CHECK(e.kind() == ParseError::Kind::NonBinaryEntry);
    CHECK(e.row() == 1);
    CHECK(e.col() == 2);
  }
}

TEST_CASE("parse errors: ragged, empty, bad token") {
  auto kind_of = [](std::string_view s) {
    try {
      parse_design(s);
    } catch (const ParseError& e) {
      return e.kind();
    }
    FAIL("no error");
    return ParseError::Kind::BadToken;
  };
  CHECK(kind_of("1 1\n1") == ParseError::Kind::RaggedRows);
  CHECK(kind_of("") == ParseError::Kind::Empty);
  CHECK(kind_of("\n   \n") == ParseError::Kind::Empty);
  CHECK(kind_of("1 1\n1 x") == ParseError::Kind::BadToken);
  CHECK(kind_of("A B\n1 2") == ParseError::Kind::NonBinaryEntry);
}

TEST_CASE("parse accepts commas and a label header") {
  Design a = parse_design(std::string_view("x1,x2,x3\n1,-1,1\n-1,1,1\n"));
  Design b = parse_design(std::string_view("1 -1 1\n-1 1 1"));
  CHECK(a == b);
}

TEST_CASE("stored 12-run design parses as 12 x 14") {
  Design d = fixture_design("supp1.d1");
  CHECK(d.runs() == 12);
  CHECK(d.factors() == 14);
}

TEST_CASE("serialize then parse is idempotent") {
  for (std::uint64_t s = 0; s < 20; ++s) {
    Design d = random_design(7, 5, s);
    std::string once = serialize_design(d);
    Design back = parse_design(std::string_view(once));
    CHECK(back == d);
    CHECK(serialize_design(back) == once);
  }
  CHECK(serialize_design(parse_design(std::string_view("1 -1\n-1 1"))) == "1 -1\n-1 1\n");
}

TEST_CASE("model matrix of a full 2^3 factorial is orthogonal") {
  Design d = full_factorial(3);
  ModelMatrix mm = model_matrix(d, ModelOrder::SecondOrder);
  CHECK(mm.runs() == 8);
  CHECK(mm.cols() == 7);
  InfoMatrix im = information_matrix(mm);
  for (std::size_t i = 0; i < 7; ++i)
    for (std::size_t j = 0; j < 7; ++j) CHECK(im(i, j) == (i == j ? 8 : 0));
}

TEST_CASE("model matrix columns: intercept, mains, lexicographic interactions") {
  Design d = random_design(6, 4, 3);
  ModelMatrix mm = model_matrix(d, ModelOrder::SecondOrder);
  REQUIRE(mm.cols() == 1 + 4 + 6);
  const std::vector<std::pair<int, int>> pairs{{0, 1}, {0, 2}, {0, 3}, {1, 2}, {1, 3}, {2, 3}};
  for (std::size_t i = 0; i < 6; ++i) {
    CHECK(mm(i, 0) == 1);
    for (std::size_t j = 0; j < 4; ++j) CHECK(mm(i, 1 + j) == d(i, j));
    for (std::size_t p = 0; p < pairs.size(); ++p)
      CHECK(mm(i, 5 + p) == d(i, pairs[p].first) * d(i, pairs[p].second));
  }
  CHECK(term_label(mm.terms()[4]) == "AB");
  CHECK(term_label(mm.terms()[9]) == "CD");
}

TEST_CASE("one factor, first order gives intercept plus main") {
  Design d = parse_design(std::string_view("1\n-1\n1"));
  CHECK(model_matrix(d, ModelOrder::FirstOrder).cols() == 2);
}

TEST_CASE("second-order information matrices of the 12-run four-factor designs match their listings") {
  InfoMatrix first = information_matrix(fixture_design("table3.first"), ModelOrder::SecondOrder);
  InfoMatrix second = information_matrix(fixture_design("table3.second"), ModelOrder::SecondOrder);
  CHECK(first == InfoMatrix::from_listing(4, ModelOrder::SecondOrder,
                                          qbtest::read_listing("table3_second_order_first.xtx")));
  CHECK(second == InfoMatrix::from_listing(4, ModelOrder::SecondOrder,
                                           qbtest::read_listing("table3_second_order_second.xtx")));
  CHECK(second(0, 1) == -2);
  CHECK(second(0, 2) == 2);
  CHECK(second(0, 3) == -2);
  CHECK(second(0, 4) == 2);
}

TEST_CASE("12 x 14 first-order information matrix matches its listing") {
  Design d = fixture_design("supp1.d1");
  InfoMatrix im = information_matrix(d, ModelOrder::FirstOrder);
  CHECK(im == InfoMatrix::from_listing(14, ModelOrder::FirstOrder,
                                       qbtest::read_listing("supp1_d1.xtx")));
  for (std::size_t i = 0; i < im.size(); ++i)
    for (std::size_t j = 0; j < im.size(); ++j) {
      if (i == j)
        CHECK(im(i, j) == 12);
      else
        CHECK((im(i, j) == 0 || im(i, j) == 4 || im(i, j) == -4));
    }
}

TEST_CASE("intercept row holds column sums") {
  Design d = random_design(9, 6, 11);
  InfoMatrix im = information_matrix(d, ModelOrder::FirstOrder);
  for (std::size_t j = 0; j < 6; ++j) CHECK(im(0, j + 1) == d.column_sum(j));
}

TEST_CASE("information matrix is symmetric with diagonal N, entries share N's parity") {
  for (std::uint64_t s = 0; s < 30; ++s) {
    const std::size_t n = 2 + s % 11, m = 1 + s % 6;
    Design d = random_design(n, m, s);
    InfoMatrix im = information_matrix(d, ModelOrder::SecondOrder);
    for (std::size_t i = 0; i < im.size(); ++i)
      for (std::size_t j = 0; j < im.size(); ++j) {
        CHECK(im(i, j) == im(j, i));
        if (i == j) CHECK(im(i, j) == static_cast<std::int64_t>(n));
        CHECK(std::llabs(im(i, j)) <= static_cast<long long>(n));
        CHECK((im(i, j) - static_cast<std::int64_t>(n)) % 2 == 0);
      }
  }
}

TEST_CASE("row permutation leaves X^T X unchanged; column permutation permutes it") {
  for (std::uint64_t s = 0; s < 10; ++s) {
    Design d = random_design(10, 5, s);
    InfoMatrix im = information_matrix(d, ModelOrder::FirstOrder);
    CHECK(information_matrix(qbtest::permute_rows(d, qbtest::permutation(10, s + 100)),
                             ModelOrder::FirstOrder) == im);
    auto p = qbtest::permutation(5, s + 200);
    InfoMatrix ip = information_matrix(d.select_factors(p), ModelOrder::FirstOrder);
    for (std::size_t i = 0; i <= 5; ++i)
      for (std::size_t j = 0; j <= 5; ++j) {
        const std::size_t oi = i ? p[i - 1] + 1 : 0, oj = j ? p[j - 1] + 1 : 0;
        CHECK(ip(i, j) == im(oi, oj));
      }
  }
}

TEST_CASE("random_design is deterministic and well formed") {
  Design a = random_design(12, 14, 42), b = random_design(12, 14, 42);
  CHECK(a == b);
  CHECK(a.runs() == 12);
  CHECK(a.factors() == 14);
  CHECK_FALSE(random_design(12, 14, 43) == a);
}

TEST_CASE("random_design entries have mean 0 within 4 standard errors") {
  // 10^4 independent single-entry draws, one per seed
  double sum = 0;
  const int draws = 10000;
  for (int s = 0; s < draws; ++s) sum += random_design(2, 1, static_cast<std::uint64_t>(s))(0, 0);
  CHECK(std::fabs(sum / draws) < 4.0 / std::sqrt(static_cast<double>(draws)));
  // and within one large design
  Design big = random_design(100, 100, 7);
  double t = 0;
  for (auto v : big.entries()) t += v;
  CHECK(std::fabs(t / 10000.0) < 0.04);
}

TEST_CASE("balance profile") {
  CHECK(balance_profile(fixture_design("supp1.d3")).balanced == 11);
  CHECK(balance_profile(fixture_design("supp1.d2")).balanced == 6);
  Design ones = parse_design(std::string_view("1 1\n1 -1\n1 1\n1 -1"));
  BalanceProfile bp = balance_profile(ones);
  CHECK(bp.imbalance[0] == 4);
  CHECK(bp.imbalance[1] == 0);
  CHECK(bp.balanced == 1);
  CHECK(bp.unbalanced == 1);
}

TEST_CASE("invalid construction") {
  CHECK_THROWS_AS(parse_design(std::string_view("1 1")), InvalidArgument);  // N = 1
  CHECK_THROWS_AS(Design(2, 1, {1, 2}), ParseError);
  CHECK_THROWS_AS(Design(2, 2, {1, 1, 1}), DimensionMismatch);
  CHECK_THROWS_AS(random_design(4, 2, 0).flipped(4, 0), InvalidArgument);
}

TEST_CASE("flipped negates exactly one entry") {
  Design d = random_design(5, 3, 9);
  Design f = d.flipped(2, 1);
  for (std::size_t i = 0; i < 5; ++i)
    for (std::size_t j = 0; j < 3; ++j) CHECK(f(i, j) == ((i == 2 && j == 1) ? -d(i, j) : d(i, j)));
}
