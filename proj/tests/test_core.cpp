#include <doctest.h>

#include "acsm/core.hpp"

using namespace acsm;

TEST_CASE("validate_matrix builds a valid matrix") {
  const SymbolMatrix m = validate_matrix(2, 2, 10, {1, 2, 3, 4});
  CHECK(m.rows() == 2);
  CHECK(m.cols() == 2);
  CHECK(m.alphabet() == 10);
  CHECK(m.at(1, 1) == 1);
  CHECK(m.at(1, 2) == 2);
  CHECK(m.at(2, 1) == 3);
  CHECK(m.at(2, 2) == 4);
}

TEST_CASE("validate_matrix rejects bad input") {
  CHECK_THROWS_WITH_AS(validate_matrix(2, 2, 4, {1, 2, 3, 4}), "symbol 4 >= alphabet size 4",
                       InputError);
  CHECK_THROWS_WITH_AS(validate_matrix(2, 2, 10, {1, 2, 3}), "expected 4 symbols, got 3",
                       InputError);
  CHECK_THROWS_AS(validate_matrix(0, 2, 10, {}), InputError);
  CHECK_THROWS_AS(validate_matrix(2, 0, 10, {}), InputError);
  CHECK_THROWS_AS(validate_matrix(1, 1, 10, {-1}), InputError);
  CHECK_THROWS_AS(validate_matrix(1, 1, 0, {0}), InputError);
}

TEST_CASE("rectangular matrices load but are not square") {
  const SymbolMatrix m = validate_matrix(3, 2, 4, {0, 1, 2, 3, 0, 1});
  CHECK_FALSE(m.is_square());
  CHECK(m.at(3, 2) == 1);
}

TEST_CASE("index_bounds caps the starting side") {
  CHECK(index_bounds(2, 2, 2, 2) == 2);
  CHECK(index_bounds(1, 5, 8, 8) == 1);
  CHECK(index_bounds(6, 6, 8, 4) == 4);
}

TEST_CASE("bottom-right windows always fit") {
  // Every admissible side at every position of a 5x5 matrix stays in range.
  const int n = 5;
  for (int m = 1; m <= 7; ++m) {
    for (int i = 1; i <= n; ++i) {
      for (int j = 1; j <= n; ++j) {
        for (int s = 1; s <= index_bounds(i, j, n, m); ++s) {
          CHECK(i - s + 1 >= 1);
          CHECK(j - s + 1 >= 1);
          CHECK(s <= m);
        }
      }
    }
  }
}

TEST_CASE("min_side is the smallest side clearing alpha") {
  CHECK(min_side(1) == 1);
  CHECK(min_side(2) == 2);
  CHECK(min_side(4) == 2);
  CHECK(min_side(5) == 3);
  CHECK(min_side(9) == 3);
  CHECK(min_side(10) == 4);
  for (std::int64_t alpha = 1; alpha <= 2000; ++alpha) {
    const std::int64_t s = min_side(alpha);
    CHECK(s * s >= alpha);
    CHECK((s - 1) * (s - 1) < alpha);
  }
}

TEST_CASE("parameter validation") {
  CHECK_NOTHROW(validate(MeasureParams{}));
  CHECK_THROWS_AS(validate(MeasureParams{.alpha = 0}), InputError);
  CHECK_THROWS_AS(validate(MeasureParams{.p0 = 1.5}), InputError);
  CHECK_THROWS_AS(validate(MeasureParams{.p0 = -0.1}), InputError);
  CHECK_THROWS_AS(validate(Scope{NeighborhoodScope{4}}), InputError);
  CHECK_THROWS_AS(validate(Scope{NeighborhoodScope{0}}), InputError);
  CHECK_NOTHROW(validate(Scope{NeighborhoodScope{1}}));
  CHECK_THROWS_AS(validate(MatcherSpec{IntervalMatcher{0}}), InputError);
  CHECK_THROWS_AS(validate(MatcherSpec{DistanceMatcher{DistanceMetric::mean_abs_diff, 0.0}}),
                  InputError);
  CHECK(NeighborhoodScope{1}.radius() == 0);
  CHECK(NeighborhoodScope{9}.radius() == 4);
}

TEST_CASE("metric names round-trip") {
  for (auto metric : {DistanceMetric::hamming_fraction, DistanceMetric::mean_abs_diff,
                      DistanceMetric::normalized_mean_abs_diff}) {
    CHECK(parse_metric(to_string(metric)) == metric);
  }
  CHECK_THROWS_AS(parse_metric("cosine"), InputError);
}

TEST_CASE("rationals compare exactly") {
  const Rational a{7, 4};
  CHECK(a == Rational{7, 4});
  CHECK_FALSE(a == Rational{14, 8});
  CHECK(a.same_value(Rational{14, 8}));
  CHECK(Rational{21, 9}.reduced() == Rational{7, 3});
  CHECK(Rational{0, 4}.reduced() == Rational{0, 1});
}
