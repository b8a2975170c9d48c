#include "acsm/measures.hpp"

#include <algorithm>
#include <thread>
#include <vector>

namespace acsm::measures {
namespace {

__extension__ typedef __int128 i128;

i128 gcd128(i128 a, i128 b) {
  if (a < 0) a = -a;
  if (b < 0) b = -b;
  while (b != 0) {
    const i128 t = a % b;
    a = b;
    b = t;
  }
  return a;
}

struct Fraction128 {
  i128 num;
  i128 den;
};

Fraction128 reduce(i128 num, i128 den) {
  const i128 g = gcd128(num, den);
  if (g > 1) return {num / g, den / g};
  return {num, den};
}

void require_comparable(const SymbolMatrix& a, const SymbolMatrix& b) {
  if (!a.is_square() || !b.is_square()) throw InputError("matrix must be square");
  if (a.alphabet() != b.alphabet()) {
    throw InputError("alphabet mismatch: " + std::to_string(a.alphabet()) + " vs " +
                     std::to_string(b.alphabet()));
  }
}

unsigned worker_count(const ComputeOptions& options, int rows) {
  unsigned threads = options.threads;
  if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
  return std::min<unsigned>(threads, static_cast<unsigned>(rows));
}

}  // namespace

std::string_view kind_name(const MeasureKind& kind) {
  switch (kind.index()) {
    case 0: return "acsm";
    case 1: return "approx";
    default: return "eacsm";
  }
}

MeasureParams to_params(const MeasureKind& kind) {
  return std::visit(
      [](const auto& k) -> MeasureParams {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, AcsmKind>) {
          return {k.alpha, GlobalScope{}, ExactMatcher{}, 0.0};
        } else if constexpr (std::is_same_v<T, ApproxKind>) {
          return {k.alpha, GlobalScope{}, IntervalMatcher{k.interval}, 0.0};
        } else {
          return {k.alpha, NeighborhoodScope{k.epsilon}, DistanceMatcher{k.metric, k.tau}, k.p0};
        }
      },
      kind);
}

DirectedMatch match_directed(const SymbolMatrix& a, const SymbolMatrix& b,
                             const MeasureParams& params, const ComputeOptions& options) {
  validate(params);
  require_comparable(a, b);

  const int n = a.rows();
  const matching::PositionMatcher matcher(a, b, params, options.table_budget_bytes);
  DirectedMatch out{WMap(n)};

  // Rows are dealt round-robin so the expensive bottom rows spread evenly.
  const unsigned workers = worker_count(options, n);
  auto work = [&](unsigned first) {
    for (int i = 1 + static_cast<int>(first); i <= n; i += static_cast<int>(workers)) {
      for (int j = 1; j <= n; ++j) out.w_map.at(i, j) = matcher.largest_match({i, j});
    }
  };
  if (workers <= 1) {
    work(0);
  } else {
    std::vector<std::jthread> pool;
    pool.reserve(workers);
    for (unsigned t = 0; t < workers; ++t) pool.emplace_back(work, t);
  }

  std::vector<Anchor> anchors;
  for (const MatchResult& cell : out.w_map.cells()) {
    out.numerator += cell.w;
    if (cell.anchor) anchors.push_back(*cell.anchor);
  }
  out.matched_positions = static_cast<std::int64_t>(anchors.size());
  std::sort(anchors.begin(), anchors.end());
  out.distinct_anchors =
      std::distance(anchors.begin(), std::unique(anchors.begin(), anchors.end()));
  return out;
}

Rational s_max(int n, int m, std::int64_t alpha) {
  // Exactly 2(n - t) + 1 positions of an n x n grid have min(i,j) = t.
  std::int64_t total = 0;
  for (int t = 1; t <= n; ++t) {
    const std::int64_t c = std::min(t, m);
    if (c * c >= alpha) total += (2 * std::int64_t{n - t} + 1) * c * c;
  }
  return {total, std::int64_t{n} * n};
}

double dissimilarity(const Rational& s_ab, const Rational& s_ba, int n, int m,
                     std::int64_t alpha) {
  const Rational max_ab = s_max(n, m, alpha);
  const Rational max_ba = s_max(m, n, alpha);
  if (max_ab.num == 0 || max_ba.num == 0) throw InputError("alpha admits no submatrices");

  // ratio = S / s_max as x / y in lowest terms.
  const Fraction128 r1 = reduce(i128{s_ab.num} * max_ab.den, i128{s_ab.den} * max_ab.num);
  const Fraction128 r2 = reduce(i128{s_ba.num} * max_ba.den, i128{s_ba.den} * max_ba.num);
  const i128 den = 2 * r1.den * r2.den;
  const i128 num = den - (r1.num * r2.den + r2.num * r1.den);
  const Fraction128 d = reduce(num, den);
  const double value =
      static_cast<double>(static_cast<long double>(d.num) / static_cast<long double>(d.den));
  return std::clamp(value, 0.0, 1.0);
}

bool gate_fails(double p1, double p2, double p0) noexcept {
  return p0 > 0.0 && std::min(p1, p2) < p0;
}

SimilarityReport compare(const SymbolMatrix& a, const SymbolMatrix& b, const MeasureParams& params,
                         const ComputeOptions& options) {
  const auto start = std::chrono::steady_clock::now();
  validate(params);
  require_comparable(a, b);
  const int n = a.rows();
  const int m = b.rows();
  const Rational max_ab = s_max(n, m, params.alpha);
  if (max_ab.num == 0) throw InputError("alpha admits no submatrices");

  DirectedMatch ab = match_directed(a, b, params, options);
  const DirectedMatch ba = match_directed(b, a, params, options);

  SimilarityReport report;
  const auto positions_a = std::int64_t{n} * n;
  const auto positions_b = std::int64_t{m} * m;
  report.s_numerator = ab.numerator;
  report.s_denominator = positions_a;
  report.s_normalized = std::clamp(
      static_cast<double>(ab.numerator) / static_cast<double>(max_ab.num), 0.0, 1.0);
  report.matched_positions = ab.matched_positions;
  report.distinct_anchors = ab.distinct_anchors;
  report.p1 = static_cast<double>(ab.matched_positions) / static_cast<double>(positions_a);
  report.p2 = static_cast<double>(ab.distinct_anchors) / static_cast<double>(positions_a);
  report.gated = gate_fails(report.p1, report.p2, params.p0);

  const double p1_ba = static_cast<double>(ba.matched_positions) / static_cast<double>(positions_b);
  const double p2_ba = static_cast<double>(ba.distinct_anchors) / static_cast<double>(positions_b);
  if (report.gated || gate_fails(p1_ba, p2_ba, params.p0)) {
    report.dissimilarity = 1.0;
  } else {
    report.dissimilarity = dissimilarity({ab.numerator, positions_a},
                                         {ba.numerator, positions_b}, n, m, params.alpha);
  }
  report.w_map = std::move(ab.w_map);
  report.elapsed = std::chrono::duration_cast<std::chrono::nanoseconds>(
      std::chrono::steady_clock::now() - start);
  return report;
}

SimilarityReport compare(const SymbolMatrix& a, const SymbolMatrix& b, const MeasureKind& kind,
                         const ComputeOptions& options) {
  return compare(a, b, to_params(kind), options);
}

SimilarityReport acsm_similarity(const SymbolMatrix& a, const SymbolMatrix& b, std::int64_t alpha,
                                 const ComputeOptions& options) {
  return compare(a, b, AcsmKind{alpha}, options);
}

SimilarityReport approx_acsm(const SymbolMatrix& a, const SymbolMatrix& b, std::int64_t alpha,
                             int interval, const ComputeOptions& options) {
  return compare(a, b, ApproxKind{alpha, interval}, options);
}

SimilarityReport eacsm(const SymbolMatrix& a, const SymbolMatrix& b, std::int64_t alpha,
                       int epsilon, DistanceMetric metric, double tau, double p0,
                       const ComputeOptions& options) {
  return compare(a, b, EacsmKind{alpha, epsilon, metric, tau, p0}, options);
}

}  // namespace acsm::measures
