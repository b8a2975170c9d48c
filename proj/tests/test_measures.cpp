#include <doctest.h>

#include <array>
#include <limits>
#include <random>
#include <set>

#include "acsm/ingest.hpp"
#include "acsm/measures.hpp"
#include "oracle.hpp"

using namespace acsm;
using namespace acsm::measures;

namespace {

SymbolMatrix grid(std::initializer_list<std::initializer_list<int>> rows, int alphabet) {
  std::vector<Symbol> symbols;
  for (const auto& r : rows) symbols.insert(symbols.end(), r.begin(), r.end());
  const int n = static_cast<int>(rows.size());
  const int cols = static_cast<int>(symbols.size()) / n;
  return SymbolMatrix(n, cols, alphabet, std::move(symbols));
}

const SymbolMatrix kA = grid({{1, 2}, {3, 4}}, 10);
const SymbolMatrix kB = grid({{1, 2}, {3, 5}}, 10);

std::int64_t self_closed_form(int n) {
  std::int64_t total = 0;
  for (int i = 1; i <= n; ++i) {
    for (int j = 1; j <= n; ++j) total += std::int64_t{std::min(i, j)} * std::min(i, j);
  }
  return total;
}

std::vector<std::int64_t> w_values(const SimilarityReport& r) {
  std::vector<std::int64_t> out;
  for (const auto& cell : r.w_map.cells()) out.push_back(cell.w);
  return out;
}

}  // namespace

TEST_CASE("acsm_similarity worked examples") {
  const auto self = acsm_similarity(kA, kA, 1);
  CHECK(self.similarity() == Rational{7, 4});
  CHECK(w_values(self) == std::vector<std::int64_t>{1, 1, 1, 4});
  CHECK(self.similarity() == oracle::oracle_acsm(kA, kA, to_params(AcsmKind{1})).similarity());
  CHECK(self.dissimilarity == 0.0);

  const SymbolMatrix low = grid({{0, 1}, {1, 0}}, 4);
  const SymbolMatrix high = grid({{2, 3}, {3, 2}}, 4);
  const auto disjoint = acsm_similarity(low, high, 1);
  CHECK(disjoint.similarity() == Rational{0, 4});
  CHECK(disjoint.p1 == 0.0);
  CHECK(disjoint.p2 == 0.0);
  CHECK(disjoint.dissimilarity == 1.0);

  const auto pair = acsm_similarity(kA, kB, 1);
  CHECK(pair.similarity() == Rational{3, 4});
  CHECK(w_values(pair) == std::vector<std::int64_t>{1, 1, 1, 0});
  CHECK(pair.similarity() == oracle::oracle_acsm(kA, kB, to_params(AcsmKind{1})).similarity());
  CHECK(pair.gated == false);
}

TEST_CASE("acsm_similarity input errors") {
  const SymbolMatrix rect = grid({{1, 2}, {3, 4}, {5, 6}}, 10);
  CHECK_THROWS_WITH_AS(acsm_similarity(kA, rect, 1), "matrix must be square", InputError);
  CHECK_THROWS_AS(acsm_similarity(kA, grid({{1, 2}, {3, 4}}, 11), 1), InputError);
  CHECK_THROWS_WITH_AS(acsm_similarity(kA, kB, 5), "alpha admits no submatrices", InputError);
  CHECK_THROWS_AS(acsm_similarity(kA, kB, 0), InputError);
}

TEST_CASE("s_max") {
  CHECK(s_max(1, 1, 1) == Rational{1, 1});
  CHECK(s_max(2, 2, 1) == Rational{7, 4});
  CHECK(s_max(3, 3, 2) == Rational{21, 9});
  CHECK(s_max(2, 2, 5).num == 0);
  // Capped by the smaller B: every min(i,j) >= 2 contributes 4.
  CHECK(s_max(3, 2, 1) == Rational{1 + 1 + 1 + 1 + 1 + 4 * 4, 9});

  // Brute force over positions.
  for (int n = 1; n <= 9; ++n) {
    for (int m = 1; m <= 9; ++m) {
      for (std::int64_t alpha : {1, 2, 4, 9, 10}) {
        std::int64_t total = 0;
        for (int i = 1; i <= n; ++i) {
          for (int j = 1; j <= n; ++j) {
            const std::int64_t c = std::min({i, j, m});
            if (c * c >= alpha) total += c * c;
          }
        }
        CHECK(s_max(n, m, alpha) == Rational{total, std::int64_t{n} * n});
      }
    }
  }
}

TEST_CASE("dissimilarity") {
  const Rational full = s_max(2, 2, 1);
  CHECK(dissimilarity(full, full, 2, 2, 1) == 0.0);
  CHECK(dissimilarity({0, 4}, {0, 4}, 2, 2, 1) == 1.0);
  CHECK(dissimilarity({3, 4}, {3, 4}, 2, 2, 1) == doctest::Approx(4.0 / 7.0).epsilon(1e-12));
  CHECK(acsm_similarity(kA, kB, 1).dissimilarity == doctest::Approx(4.0 / 7.0).epsilon(1e-12));
  CHECK_THROWS_WITH_AS(dissimilarity({0, 1}, {0, 1}, 1, 1, 2), "alpha admits no submatrices",
                       InputError);
  // Argument order never changes the value.
  CHECK(dissimilarity({5, 9}, {2, 4}, 3, 2, 1) == dissimilarity({2, 4}, {5, 9}, 2, 3, 1));
}

TEST_CASE("approx_acsm") {
  CHECK(approx_acsm(kA, kB, 1, 2).similarity() == Rational{7, 4});
  CHECK(approx_acsm(kA, kB, 1, 1).similarity() == acsm_similarity(kA, kB, 1).similarity());
  const SymbolMatrix low = grid({{0, 1}, {1, 0}}, 4);
  const SymbolMatrix high = grid({{2, 3}, {3, 2}}, 4);
  for (int interval = 1; interval <= 4; ++interval) {
    CHECK(approx_acsm(low, high, 1, interval).s_numerator == 0);
  }
  CHECK_THROWS_AS(approx_acsm(kA, kB, 1, 0), InputError);
}

TEST_CASE("eacsm worked examples") {
  const auto r = eacsm(kA, kB, 1, 5, DistanceMetric::mean_abs_diff, 0.5, 0.5);
  CHECK(r.similarity() == Rational{7, 4});
  CHECK(r.p1 == 1.0);
  CHECK(r.p2 == 1.0);
  CHECK_FALSE(r.gated);
  CHECK(r.w_map.at(1, 1).anchor == Anchor{1, 1, 1});
  CHECK(r.w_map.at(1, 2).anchor == Anchor{1, 2, 1});
  CHECK(r.w_map.at(2, 1).anchor == Anchor{2, 1, 1});
  CHECK(r.w_map.at(2, 2).anchor == Anchor{2, 2, 2});

  const SymbolMatrix flat = grid({{5, 5}, {5, 5}}, 8);
  const SymbolMatrix lone = grid({{5, 6}, {6, 6}}, 8);
  const auto g = eacsm(flat, lone, 1, 5, DistanceMetric::hamming_fraction, 0.1, 0.5);
  CHECK(g.p1 == 1.0);
  CHECK(g.p2 == 0.25);
  CHECK(g.gated);
  CHECK(g.dissimilarity == 1.0);
  for (const auto& cell : g.w_map.cells()) CHECK(cell.anchor == Anchor{1, 1, 1});

  const auto ref = oracle::oracle_acsm(
      flat, lone, to_params(EacsmKind{1, 5, DistanceMetric::hamming_fraction, 0.1, 0.5}));
  CHECK(ref.p1 == g.p1);
  CHECK(ref.p2 == g.p2);
  CHECK(ref.gated == g.gated);

  // The gated report still carries the raw similarity.
  CHECK(g.s_numerator == 4);
}

TEST_CASE("eacsm parameter errors") {
  CHECK_THROWS_AS(eacsm(kA, kB, 1, 4, DistanceMetric::mean_abs_diff, 0.5, 0.0), InputError);
  CHECK_THROWS_AS(eacsm(kA, kB, 1, 3, DistanceMetric::mean_abs_diff, 0.0, 0.0), InputError);
  CHECK_THROWS_AS(eacsm(kA, kB, 1, 3, DistanceMetric::mean_abs_diff, 0.5, 1.1), InputError);
}

TEST_CASE("self-similarity closed form") {
  std::mt19937_64 rng(8);
  for (int trial = 0; trial < 20; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 12);
    const auto a = ingest::gen_random(n, 1 + static_cast<int>(rng() % 6), rng());
    CHECK(acsm_similarity(a, a, 1).s_numerator == self_closed_form(n));
    for (int eps : {1, 3, 7}) {
      for (auto metric : {DistanceMetric::hamming_fraction, DistanceMetric::mean_abs_diff,
                          DistanceMetric::normalized_mean_abs_diff}) {
        const auto r = eacsm(a, a, 1, eps, metric, 0.01, 0.0);
        CHECK(r.s_numerator == self_closed_form(n));
        CHECK(r.dissimilarity == 0.0);
      }
    }
  }
}

TEST_CASE("alpha, tau and epsilon monotonicity") {
  std::mt19937_64 rng(21);
  for (int trial = 0; trial < 15; ++trial) {
    const int n = 3 + static_cast<int>(rng() % 8);
    const int m = 3 + static_cast<int>(rng() % 8);
    const auto a = ingest::gen_random(n, 3, rng());
    const auto b = ingest::gen_random(m, 3, rng());

    std::int64_t prev = std::numeric_limits<std::int64_t>::max();
    for (std::int64_t alpha : {1, 2, 4, 9}) {
      const auto num = acsm_similarity(a, b, alpha).s_numerator;
      CHECK(num <= prev);
      prev = num;
    }
    prev = -1;
    for (double tau : {0.05, 0.1, 0.2, 0.4}) {
      const auto num = eacsm(a, b, 1, 3, DistanceMetric::mean_abs_diff, tau, 0.0).s_numerator;
      CHECK(num >= prev);
      prev = num;
    }
    prev = -1;
    for (int eps : {1, 3, 5, 9}) {
      const auto num = eacsm(a, b, 1, eps, DistanceMetric::hamming_fraction, 0.2, 0.0).s_numerator;
      CHECK(num >= prev);
      prev = num;
    }
  }
}

TEST_CASE("report invariants and gate soundness") {
  std::mt19937_64 rng(13);
  for (int trial = 0; trial < 40; ++trial) {
    const int n = 1 + static_cast<int>(rng() % 8);
    const int m = 1 + static_cast<int>(rng() % 8);
    const auto a = ingest::gen_random(n, 2 + static_cast<int>(rng() % 3), rng());
    const auto b = ingest::gen_random(m, a.alphabet(), rng());
    const double p0 = std::array{0.0, 0.1, 0.3, 0.6, 1.0}[rng() % 5];
    const auto r = eacsm(a, b, 1, 3, DistanceMetric::hamming_fraction, 0.3, p0);

    std::int64_t sum = 0;
    std::int64_t matched = 0;
    std::set<Anchor> anchors;
    for (const auto& cell : r.w_map.cells()) {
      sum += cell.w;
      if (cell.anchor) {
        ++matched;
        anchors.insert(*cell.anchor);
      }
    }
    CHECK(r.s_numerator == sum);
    CHECK(r.s_denominator == std::int64_t{n} * n);
    CHECK(r.p1 == static_cast<double>(matched) / (n * n));
    CHECK(r.p2 == static_cast<double>(anchors.size()) / (n * n));
    CHECK(r.p2 <= r.p1);
    CHECK(r.gated == (p0 > 0.0 && std::min(r.p1, r.p2) < p0));
    if (r.gated) CHECK(r.dissimilarity == 1.0);
    CHECK(r.dissimilarity >= 0.0);
    CHECK(r.dissimilarity <= 1.0);
    CHECK(r.s_normalized >= 0.0);
    CHECK(r.s_normalized <= 1.0);
  }
}

TEST_CASE("planted block lower bound") {
  for (std::uint64_t seed = 0; seed < 20; ++seed) {
    const int k = 2 + static_cast<int>(seed % 3);
    const auto pair = ingest::gen_planted_pair(6 + static_cast<int>(seed % 4), 5 + static_cast<int>(seed % 5), 4, k, seed);
    const auto [i, j] = pair.block_anchor;
    const std::int64_t bound = std::min({k, i, j, pair.b.rows()});
    for (int eps : {1, 2 * std::max(pair.a.rows(), pair.b.rows()) + 1}) {
      const MeasureParams params{1, NeighborhoodScope{eps}, ExactMatcher{}, 0.0};
      CHECK(match_directed(pair.a, pair.b, params).w_map.at(i, j).w >= bound * bound);
    }
    CHECK(acsm_similarity(pair.a, pair.b, 1).w_map.at(i, j).w >= bound * bound);
  }
}

TEST_CASE("results do not depend on the thread count") {
  const auto a = ingest::gen_random(20, 4, 1);
  const auto b = ingest::gen_random(17, 4, 2);
  for (const MeasureKind& kind :
       {MeasureKind{AcsmKind{1}}, MeasureKind{ApproxKind{1, 2}},
        MeasureKind{EacsmKind{1, 5, DistanceMetric::mean_abs_diff, 0.6, 0.2}}}) {
    const auto serial = compare(a, b, kind, {.threads = 1});
    for (unsigned threads : {2u, 3u, 8u}) {
      const auto parallel = compare(a, b, kind, {.threads = threads});
      CHECK(parallel.w_map == serial.w_map);
      CHECK(parallel.s_numerator == serial.s_numerator);
      CHECK(parallel.p1 == serial.p1);
      CHECK(parallel.p2 == serial.p2);
      CHECK(parallel.dissimilarity == serial.dissimilarity);
    }
  }
}

TEST_CASE("kind names and params") {
  CHECK(kind_name(AcsmKind{}) == "acsm");
  CHECK(kind_name(ApproxKind{}) == "approx");
  CHECK(kind_name(EacsmKind{}) == "eacsm");
  const MeasureParams p = to_params(EacsmKind{4, 7, DistanceMetric::mean_abs_diff, 0.3, 0.2});
  CHECK(p.alpha == 4);
  CHECK(std::get<NeighborhoodScope>(p.scope).epsilon == 7);
  CHECK(std::get<DistanceMatcher>(p.matcher).tau == 0.3);
  CHECK(p.p0 == 0.2);
}
