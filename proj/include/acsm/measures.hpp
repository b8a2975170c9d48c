#pragma once
// ACSM, interval-approximate ACSM and the neighborhood/distance/frequency
// variant (eACSM), assembled from per-position largest matches.

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <variant>

#include "acsm/core.hpp"
#include "acsm/matching.hpp"

namespace acsm::measures {

struct AcsmKind {
  std::int64_t alpha = 1;
};
struct ApproxKind {
  std::int64_t alpha = 1;
  int interval = 1;
};
struct EacsmKind {
  std::int64_t alpha = 1;
  int epsilon = 1;
  DistanceMetric metric = DistanceMetric::hamming_fraction;
  double tau = 0.1;
  double p0 = 0.0;
};
using MeasureKind = std::variant<AcsmKind, ApproxKind, EacsmKind>;

/// "acsm", "approx" or "eacsm".
std::string_view kind_name(const MeasureKind& kind);
MeasureParams to_params(const MeasureKind& kind);

struct ComputeOptions {
  /// Worker threads for the per-position loop; 0 picks hardware concurrency.
  unsigned threads = 0;
  std::size_t table_budget_bytes = matching::PositionMatcher::kDefaultTableBudget;
};

/// One direction of a comparison: W(i,j) for every position of A.
struct DirectedMatch {
  WMap w_map;
  std::int64_t numerator = 0;
  std::int64_t matched_positions = 0;
  std::int64_t distinct_anchors = 0;
};

/// Runs largest_match at every position of A. Requires square inputs over the
/// same alphabet (InputError otherwise). The result does not depend on the
/// thread count.
DirectedMatch match_directed(const SymbolMatrix& a, const SymbolMatrix& b,
                             const MeasureParams& params, const ComputeOptions& options = {});

/// Largest attainable similarity for an n x n A against an m x m B:
/// sum over positions of c^2 / n^2 with c = min(i,j,m), dropping c^2 < alpha.
/// Returned unreduced with denominator n^2.
Rational s_max(int n, int m, std::int64_t alpha);

/// D = 1 - (S_ab / s_max(n,m) + S_ba / s_max(m,n)) / 2, evaluated as one
/// exact fraction before conversion, so swapping the arguments gives a
/// bit-identical value. Throws InputError when alpha admits no submatrix.
double dissimilarity(const Rational& s_ab, const Rational& s_ba, int n, int m, std::int64_t alpha);

/// Full report for A against B. p1, p2, gated and w_map describe the A -> B
/// direction; dissimilarity combines both directions and is forced to 1 when
/// either direction fails the frequency gate.
SimilarityReport compare(const SymbolMatrix& a, const SymbolMatrix& b, const MeasureParams& params,
                         const ComputeOptions& options = {});
SimilarityReport compare(const SymbolMatrix& a, const SymbolMatrix& b, const MeasureKind& kind,
                         const ComputeOptions& options = {});

SimilarityReport acsm_similarity(const SymbolMatrix& a, const SymbolMatrix& b, std::int64_t alpha,
                                 const ComputeOptions& options = {});
SimilarityReport approx_acsm(const SymbolMatrix& a, const SymbolMatrix& b, std::int64_t alpha,
                             int interval, const ComputeOptions& options = {});
SimilarityReport eacsm(const SymbolMatrix& a, const SymbolMatrix& b, std::int64_t alpha,
                       int epsilon, DistanceMetric metric, double tau, double p0,
                       const ComputeOptions& options = {});

/// p0 > 0 and min(p1, p2) < p0.
bool gate_fails(double p1, double p2, double p0) noexcept;

}  // namespace acsm::measures
