#include "acsm/matching.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <sstream>
#include <stdexcept>

namespace acsm::matching {
namespace {

void require_fits(const SymbolMatrix& m, Position p, int side, const char* which) {
  if (side < 1 || p.row < side || p.col < side || p.row > m.rows() || p.col > m.cols()) {
    std::ostringstream msg;
    msg << "side-" << side << " window at (" << p.row << "," << p.col << ") does not fit in "
        << which << " (" << m.rows() << "x" << m.cols() << ")";
    throw std::out_of_range(msg.str());
  }
}

// Unchecked predicates. Callers guarantee both windows fit.

bool exact_window(const SymbolMatrix& a, Position pa, const SymbolMatrix& b, Position pb,
                  int side) noexcept {
  const int a_top = pa.row - side + 1;
  const int b_top = pb.row - side + 1;
  const int a_left = pa.col - side;
  const int b_left = pb.col - side;
  for (int r = 0; r < side; ++r) {
    const Symbol* ra = a.row_ptr(a_top + r) + a_left;
    const Symbol* rb = b.row_ptr(b_top + r) + b_left;
    if (!std::equal(ra, ra + side, rb)) return false;
  }
  return true;
}

bool interval_window(const SymbolMatrix& a, Position pa, const SymbolMatrix& b, Position pb,
                     int side, int interval) noexcept {
  const int a_top = pa.row - side + 1;
  const int b_top = pb.row - side + 1;
  const int a_left = pa.col - side;
  const int b_left = pb.col - side;
  for (int r = 0; r < side; r += interval) {
    const Symbol* ra = a.row_ptr(a_top + r) + a_left;
    const Symbol* rb = b.row_ptr(b_top + r) + b_left;
    for (int c = 0; c < side; c += interval) {
      if (ra[c] != rb[c]) return false;
    }
  }
  return true;
}

std::int64_t row_cost(const Symbol* ra, const Symbol* rb, int side, DistanceMetric metric) noexcept {
  std::int64_t cost = 0;
  if (metric == DistanceMetric::hamming_fraction) {
    for (int c = 0; c < side; ++c) cost += ra[c] != rb[c] ? 1 : 0;
  } else {
    for (int c = 0; c < side; ++c) cost += std::abs(std::int64_t{ra[c]} - rb[c]);
  }
  return cost;
}

std::int64_t window_cost(const SymbolMatrix& a, Position pa, const SymbolMatrix& b, Position pb,
                         int side, DistanceMetric metric) noexcept {
  const int a_top = pa.row - side + 1;
  const int b_top = pb.row - side + 1;
  std::int64_t cost = 0;
  for (int r = 0; r < side; ++r) {
    cost += row_cost(a.row_ptr(a_top + r) + pa.col - side, b.row_ptr(b_top + r) + pb.col - side,
                     side, metric);
  }
  return cost;
}

// d < tau, abandoning the window once the partial cost already reaches tau.
// Costs are non-negative and division is monotone, so the early exit never
// changes the answer.
bool distance_window(const SymbolMatrix& a, Position pa, const SymbolMatrix& b, Position pb,
                     int side, const DistanceMatcher& dm) noexcept {
  const int a_top = pa.row - side + 1;
  const int b_top = pb.row - side + 1;
  std::int64_t cost = 0;
  for (int r = 0; r < side; ++r) {
    cost += row_cost(a.row_ptr(a_top + r) + pa.col - side, b.row_ptr(b_top + r) + pb.col - side,
                     side, dm.metric);
    if (!(metric_value(cost, side, a.alphabet(), dm.metric) < dm.tau)) return false;
  }
  return true;
}

template <typename Pred>
std::optional<Position> scan_window(const CandidateWindow& win, Pred&& pred) {
  for (int k = win.k_lo; k <= win.k_hi; ++k) {
    for (int h = win.h_lo; h <= win.h_hi; ++h) {
      if (pred(Position{k, h})) return Position{k, h};
    }
  }
  return std::nullopt;
}

// Exact and interval matching both compare the window's top-left element, so
// candidates are filtered on it before the full comparison.
template <typename Pred>
std::optional<Position> scan_window_top_left(const CandidateWindow& win, const SymbolMatrix& a,
                                             Position pa, const SymbolMatrix& b, int side,
                                             Pred&& full) {
  const Symbol first = a.at(pa.row - side + 1, pa.col - side + 1);
  for (int k = win.k_lo; k <= win.k_hi; ++k) {
    const Symbol* row = b.row_ptr(k - side + 1);
    for (int h = win.h_lo; h <= win.h_hi; ++h) {
      if (row[h - side] == first && full(Position{k, h})) return Position{k, h};
    }
  }
  return std::nullopt;
}

std::optional<Position> find_anchor_unchecked(const SymbolMatrix& a, Position pa, int side,
                                              const SymbolMatrix& b, const Scope& scope,
                                              const MatcherSpec& matcher) {
  const CandidateWindow win = candidate_window(pa, side, b.rows(), scope);
  if (win.empty()) return std::nullopt;
  return std::visit(
      [&](const auto& spec) -> std::optional<Position> {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, ExactMatcher>) {
          return scan_window_top_left(win, a, pa, b, side, [&](Position pb) {
            return exact_window(a, pa, b, pb, side);
          });
        } else if constexpr (std::is_same_v<T, IntervalMatcher>) {
          return scan_window_top_left(win, a, pa, b, side, [&](Position pb) {
            return interval_window(a, pa, b, pb, side, spec.interval);
          });
        } else {
          return scan_window(win,
                             [&](Position pb) { return distance_window(a, pa, b, pb, side, spec); });
        }
      },
      matcher);
}

}  // namespace

CandidateWindow candidate_window(Position center, int side, int m, const Scope& scope) {
  CandidateWindow win{side, m, side, m};
  if (const auto* nb = std::get_if<NeighborhoodScope>(&scope)) {
    const int r = nb->radius();
    win.k_lo = std::max(side, center.row - r);
    win.k_hi = std::min(m, center.row + r);
    win.h_lo = std::max(side, center.col - r);
    win.h_hi = std::min(m, center.col + r);
  }
  return win;
}

bool exact_equal(const SymbolMatrix& a, Position pa, const SymbolMatrix& b, Position pb, int side) {
  require_fits(a, pa, side, "A");
  require_fits(b, pb, side, "B");
  return exact_window(a, pa, b, pb, side);
}

bool interval_equal(const SymbolMatrix& a, Position pa, const SymbolMatrix& b, Position pb,
                    int side, int interval) {
  if (interval < 1) throw InputError("interval must be >= 1");
  require_fits(a, pa, side, "A");
  require_fits(b, pb, side, "B");
  return interval_window(a, pa, b, pb, side, interval);
}

double distance(const SymbolMatrix& a, Position pa, const SymbolMatrix& b, Position pb, int side,
                DistanceMetric metric) {
  require_fits(a, pa, side, "A");
  require_fits(b, pb, side, "B");
  if (a.alphabet() != b.alphabet()) throw InputError("alphabet mismatch between A and B");
  return metric_value(window_cost(a, pa, b, pb, side, metric), side, a.alphabet(), metric);
}

double metric_value(std::int64_t cost, int side, int alphabet, DistanceMetric metric) {
  const double area = static_cast<double>(side) * static_cast<double>(side);
  if (metric == DistanceMetric::normalized_mean_abs_diff) {
    if (alphabet <= 1) return 0.0;
    return static_cast<double>(cost) / (area * static_cast<double>(alphabet - 1));
  }
  return static_cast<double>(cost) / area;
}

bool matches(const SymbolMatrix& a, Position pa, const SymbolMatrix& b, Position pb, int side,
             const MatcherSpec& matcher) {
  validate(matcher);
  require_fits(a, pa, side, "A");
  require_fits(b, pb, side, "B");
  return std::visit(
      [&](const auto& spec) -> bool {
        using T = std::decay_t<decltype(spec)>;
        if constexpr (std::is_same_v<T, ExactMatcher>) {
          return exact_window(a, pa, b, pb, side);
        } else if constexpr (std::is_same_v<T, IntervalMatcher>) {
          return interval_window(a, pa, b, pb, side, spec.interval);
        } else {
          if (a.alphabet() != b.alphabet()) throw InputError("alphabet mismatch between A and B");
          return distance_window(a, pa, b, pb, side, spec);
        }
      },
      matcher);
}

std::optional<Position> find_anchor(const SymbolMatrix& a, Position pa, int side,
                                    const SymbolMatrix& b, const Scope& scope,
                                    const MatcherSpec& matcher) {
  if (side < 1 || side > std::min(pa.row, pa.col) || pa.row > a.rows() || pa.col > a.cols()) {
    return std::nullopt;
  }
  return find_anchor_unchecked(a, pa, side, b, scope, matcher);
}

MatchResult largest_match(const SymbolMatrix& a, Position pa, const SymbolMatrix& b,
                          const Scope& scope, const MatcherSpec& matcher, std::int64_t alpha) {
  const int s_lo = min_side(alpha);
  for (int s = index_bounds(pa.row, pa.col, a.rows(), b.rows()); s >= s_lo; --s) {
    if (auto hit = find_anchor(a, pa, s, b, scope, matcher)) {
      return {std::int64_t{s} * s, Anchor{hit->row, hit->col, s}};
    }
  }
  return {};
}

// ---------------------------------------------------------------------------

NeighborhoodCostTable::Span NeighborhoodCostTable::displacement_span(int n, int m, int radius) {
  return {std::max(-radius, 1 - n), std::min(radius, m - 1)};
}

std::size_t NeighborhoodCostTable::footprint(int n, int m, int radius) {
  const Span span = displacement_span(n, m, radius);
  const auto offsets = static_cast<std::size_t>(span.count()) * span.count();
  const auto cells = static_cast<std::size_t>(n + 1) * (n + 1);
  return offsets * cells * sizeof(std::int64_t);
}

NeighborhoodCostTable::NeighborhoodCostTable(const SymbolMatrix& a, const SymbolMatrix& b,
                                             int radius, DistanceMetric metric)
    : span_(displacement_span(a.rows(), b.rows(), radius)),
      stride_(static_cast<std::size_t>(a.rows()) + 1),
      offsets_(static_cast<std::size_t>(span_.count()) * span_.count()),
      sums_(stride_ * stride_ * offsets_, 0) {
  const int n = a.rows();
  const int m = b.rows();
  const bool hamming = metric == DistanceMetric::hamming_fraction;
  std::vector<std::int64_t> cost(offsets_);
  for (int x = 1; x <= n; ++x) {
    for (int y = 1; y <= n; ++y) {
      const Symbol va = a.at(x, y);
      std::size_t o = 0;
      for (int dr = span_.lo; dr <= span_.hi; ++dr) {
        const int bx = x + dr;
        for (int dc = span_.lo; dc <= span_.hi; ++dc, ++o) {
          const int by = y + dc;
          if (bx < 1 || bx > m || by < 1 || by > m) {
            cost[o] = 0;
            continue;
          }
          const Symbol vb = b.at(bx, by);
          cost[o] = hamming ? (va != vb ? 1 : 0) : std::abs(std::int64_t{va} - vb);
        }
      }
      std::int64_t* here = &sums_[(static_cast<std::size_t>(x) * stride_ + y) * offsets_];
      const std::int64_t* up = &sums_[(static_cast<std::size_t>(x - 1) * stride_ + y) * offsets_];
      const std::int64_t* left = &sums_[(static_cast<std::size_t>(x) * stride_ + y - 1) * offsets_];
      const std::int64_t* diag =
          &sums_[(static_cast<std::size_t>(x - 1) * stride_ + y - 1) * offsets_];
      for (std::size_t k = 0; k < offsets_; ++k) {
        here[k] = cost[k] + up[k] + left[k] - diag[k];
      }
    }
  }
}

// ---------------------------------------------------------------------------

PositionMatcher::PositionMatcher(const SymbolMatrix& a, const SymbolMatrix& b,
                                 const MeasureParams& params, std::size_t table_budget_bytes)
    : a_(a), b_(b), params_(params) {
  const auto* nb = std::get_if<NeighborhoodScope>(&params_.scope);
  const auto* dm = std::get_if<DistanceMatcher>(&params_.matcher);
  if (nb && dm &&
      NeighborhoodCostTable::footprint(a.rows(), b.rows(), nb->radius()) <= table_budget_bytes) {
    table_.emplace(a, b, nb->radius(), dm->metric);
    const int top = std::min(a.rows(), b.rows());
    cost_limits_.resize(static_cast<std::size_t>(top) + 1);
    for (int s = 1; s <= top; ++s) cost_limits_[s] = cost_limit(s, a.alphabet(), *dm);
  }
}

std::int64_t PositionMatcher::cost_limit(int side, int alphabet, const DistanceMatcher& dm) {
  const std::int64_t area = std::int64_t{side} * side;
  const std::int64_t ceiling =
      area * (dm.metric == DistanceMetric::hamming_fraction ? 1 : std::max(alphabet - 1, 1)) + 1;
  auto is_match = [&](std::int64_t c) { return metric_value(c, side, alphabet, dm.metric) < dm.tau; };

  long double guess = static_cast<long double>(dm.tau) * static_cast<long double>(area);
  if (dm.metric == DistanceMetric::normalized_mean_abs_diff) guess *= std::max(alphabet - 1, 1);
  std::int64_t c = guess >= static_cast<long double>(ceiling)
                       ? ceiling
                       : static_cast<std::int64_t>(std::floor(guess));
  while (c > 0 && !is_match(c - 1)) --c;
  while (c < ceiling && is_match(c)) ++c;
  return c;
}

MatchResult PositionMatcher::largest_match(Position pa) const {
  if (table_) return largest_match_tabled(pa);
  return matching::largest_match(a_, pa, b_, params_.scope, params_.matcher, params_.alpha);
}

MatchResult PositionMatcher::largest_match_tabled(Position pa) const {
  const int s_lo = min_side(params_.alpha);
  for (int s = index_bounds(pa.row, pa.col, a_.rows(), b_.rows()); s >= s_lo; --s) {
    const CandidateWindow win = candidate_window(pa, s, b_.rows(), params_.scope);
    const std::int64_t limit = cost_limits_[s];
    const auto hit = scan_window(
        win, [&](Position pb) { return table_->window_cost(pa, pb, s) < limit; });
    if (hit) return {std::int64_t{s} * s, Anchor{hit->row, hit->col, s}};
  }
  return {};
}

}  // namespace acsm::matching
