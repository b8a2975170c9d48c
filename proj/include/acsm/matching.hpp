#pragma once
// Square-window comparison and the descending-size largest-match search.
//
// Every function here takes 1-based bottom-right anchors (see core.hpp).
// The window predicates throw std::out_of_range when a side-s window does not
// fit at the given anchor.

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "acsm/core.hpp"

namespace acsm::matching {

/// Inclusive bounds on anchors (k,h) in B examined at one side length.
struct CandidateWindow {
  int k_lo = 1;
  int k_hi = 0;
  int h_lo = 1;
  int h_hi = 0;

  bool empty() const noexcept { return k_lo > k_hi || h_lo > h_hi; }
  std::int64_t size() const noexcept {
    return empty() ? 0 : std::int64_t{k_hi - k_lo + 1} * (h_hi - h_lo + 1);
  }
};

/// Anchors in an m x m matrix that can hold a side-`side` window, restricted
/// to the eps x eps square around `center` when the scope is a neighborhood.
CandidateWindow candidate_window(Position center, int side, int m, const Scope& scope);

bool exact_equal(const SymbolMatrix& a, Position pa, const SymbolMatrix& b, Position pb, int side);

/// Compares only the offsets (r,c) from the window's top-left corner with
/// r % interval == 0 and c % interval == 0.
bool interval_equal(const SymbolMatrix& a, Position pa, const SymbolMatrix& b, Position pb,
                    int side, int interval);

/// Identity feature map; throws InputError if the alphabets differ.
double distance(const SymbolMatrix& a, Position pa, const SymbolMatrix& b, Position pb, int side,
                DistanceMetric metric);

/// Converts an accumulated per-element cost into a metric value. The cost is
/// the mismatch count for hamming_fraction and the sum of |a-b| otherwise.
double metric_value(std::int64_t cost, int side, int alphabet, DistanceMetric metric);

/// exact -> exact_equal, interval -> interval_equal, distance -> d < tau.
bool matches(const SymbolMatrix& a, Position pa, const SymbolMatrix& b, Position pb, int side,
             const MatcherSpec& matcher);

/// First anchor in row-major order over the candidate window whose window
/// matches the side-`side` window of A at `pa`.
std::optional<Position> find_anchor(const SymbolMatrix& a, Position pa, int side,
                                    const SymbolMatrix& b, const Scope& scope,
                                    const MatcherSpec& matcher);

/// Tries sides min(i,j,m) down to min_side(alpha) and returns the first hit.
MatchResult largest_match(const SymbolMatrix& a, Position pa, const SymbolMatrix& b,
                          const Scope& scope, const MatcherSpec& matcher, std::int64_t alpha);

/// Summed-area tables of per-element cost for every (row, col) displacement
/// inside a neighborhood radius. After an O(offsets * n^2) build, the cost of
/// any window pair at one of those displacements is four lookups.
class NeighborhoodCostTable {
 public:
  NeighborhoodCostTable(const SymbolMatrix& a, const SymbolMatrix& b, int radius,
                        DistanceMetric metric);

  /// Bytes the table would occupy for these shapes.
  static std::size_t footprint(int n, int m, int radius);

  /// Summed cost between the side-`side` windows at `pa` in A and `pb` in B.
  /// Both windows must fit and |pb - pa| must lie within the radius.
  std::int64_t window_cost(Position pa, Position pb, int side) const noexcept {
    const std::size_t o = offset_index(pb.row - pa.row, pb.col - pa.col);
    return cell(pa.row, pa.col, o) - cell(pa.row - side, pa.col, o) -
           cell(pa.row, pa.col - side, o) + cell(pa.row - side, pa.col - side, o);
  }

 private:
  struct Span {
    int lo = 0;
    int hi = -1;
    int count() const noexcept { return hi - lo + 1; }
  };
  static Span displacement_span(int n, int m, int radius);

  std::size_t offset_index(int dr, int dc) const noexcept {
    return static_cast<std::size_t>(dr - span_.lo) * span_.count() +
           static_cast<std::size_t>(dc - span_.lo);
  }
  std::int64_t cell(int x, int y, std::size_t o) const noexcept {
    return sums_[(static_cast<std::size_t>(x) * stride_ + static_cast<std::size_t>(y)) * offsets_ + o];
  }

  Span span_;
  std::size_t stride_ = 0;
  std::size_t offsets_ = 0;
  std::vector<std::int64_t> sums_;
};

/// Per-position largest-match engine for one directed comparison A -> B.
/// Neighborhood scopes with a distance matcher go through a
/// NeighborhoodCostTable when it fits in `table_budget_bytes`; everything
/// else uses the direct window predicates. Both routes return identical
/// results.
class PositionMatcher {
 public:
  static constexpr std::size_t kDefaultTableBudget = std::size_t{512} << 20;

  PositionMatcher(const SymbolMatrix& a, const SymbolMatrix& b, const MeasureParams& params,
                  std::size_t table_budget_bytes = kDefaultTableBudget);

  MatchResult largest_match(Position pa) const;
  bool uses_cost_table() const noexcept { return table_.has_value(); }

 private:
  MatchResult largest_match_tabled(Position pa) const;
  /// Smallest summed cost whose metric value is not below tau at this side.
  static std::int64_t cost_limit(int side, int alphabet, const DistanceMatcher& dm);

  const SymbolMatrix& a_;
  const SymbolMatrix& b_;
  MeasureParams params_;
  std::optional<NeighborhoodCostTable> table_;
  std::vector<std::int64_t> cost_limits_;
};

}  // namespace acsm::matching
