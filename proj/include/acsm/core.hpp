#pragma once
// Domain types shared by the ACSM family of measures.
//
// Index convention: every external position is 1-based, and a side-s square
// window "at (i,j)" has (i,j) as its bottom-right corner, i.e. it covers rows
// i-s+1..i and columns j-s+1..j.

#include <chrono>
#include <cstdint>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

namespace acsm {

using Symbol = std::int32_t;

/// Raised for malformed input or parameters. The CLI maps it to exit code 2.
class InputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 1-based (row, col) coordinate.
struct Position {
  int row = 0;
  int col = 0;
  friend bool operator==(const Position&, const Position&) = default;
};

/// Bottom-right corner plus side length; identifies one square submatrix.
struct Anchor {
  int row = 0;
  int col = 0;
  int side = 0;
  friend auto operator<=>(const Anchor&, const Anchor&) = default;
};

/// Row-major grid of alphabet-coded symbols. Immutable once built.
class SymbolMatrix {
 public:
  /// Validating constructor; see validate_matrix.
  SymbolMatrix(int rows, int cols, int alphabet, std::vector<Symbol> symbols);

  int rows() const noexcept { return rows_; }
  int cols() const noexcept { return cols_; }
  int alphabet() const noexcept { return alphabet_; }
  bool is_square() const noexcept { return rows_ == cols_; }
  /// Side length; only meaningful for square matrices.
  int side() const noexcept { return rows_; }

  /// 1-based element access, unchecked.
  Symbol at(int row, int col) const noexcept {
    return symbols_[static_cast<std::size_t>(row - 1) * cols_ + (col - 1)];
  }
  /// Pointer to the first element of 1-based row `row`.
  const Symbol* row_ptr(int row) const noexcept {
    return symbols_.data() + static_cast<std::size_t>(row - 1) * cols_;
  }
  std::span<const Symbol> symbols() const noexcept { return symbols_; }

  friend bool operator==(const SymbolMatrix&, const SymbolMatrix&) = default;

 private:
  int rows_;
  int cols_;
  int alphabet_;
  std::vector<Symbol> symbols_;
};

/// Builds a matrix or throws InputError naming the first violated invariant.
SymbolMatrix validate_matrix(int rows, int cols, int alphabet, std::vector<Symbol> symbols);

/// Largest side a window at (i,j) in an n x n matrix may take when it must
/// also fit inside an m x m matrix: min(i, j, m).
int index_bounds(int i, int j, int n, int m);

/// Smallest side s with s*s >= alpha.
int min_side(std::int64_t alpha);

enum class DistanceMetric { hamming_fraction, mean_abs_diff, normalized_mean_abs_diff };

std::string_view to_string(DistanceMetric metric);
/// Accepts "hamming", "mad", "nmad" and the long enum spellings.
DistanceMetric parse_metric(std::string_view name);

struct ExactMatcher {};
struct IntervalMatcher {
  int interval = 1;
};
struct DistanceMatcher {
  DistanceMetric metric = DistanceMetric::hamming_fraction;
  double tau = 0.0;
};
using MatcherSpec = std::variant<ExactMatcher, IntervalMatcher, DistanceMatcher>;

struct GlobalScope {};
struct NeighborhoodScope {
  int epsilon = 1;
  int radius() const noexcept { return epsilon / 2; }
};
using Scope = std::variant<GlobalScope, NeighborhoodScope>;

struct MeasureParams {
  std::int64_t alpha = 1;
  Scope scope = GlobalScope{};
  MatcherSpec matcher = ExactMatcher{};
  double p0 = 0.0;
};

/// Throws InputError if any parameter is outside its admissible range.
void validate(const MatcherSpec& matcher);
void validate(const Scope& scope);
void validate(const MeasureParams& params);

struct MatchResult {
  std::int64_t w = 0;
  std::optional<Anchor> anchor;
  friend bool operator==(const MatchResult&, const MatchResult&) = default;
};

/// Non-negative fraction kept as an integer pair.
struct Rational {
  std::int64_t num = 0;
  std::int64_t den = 1;

  double value() const noexcept { return static_cast<double>(num) / static_cast<double>(den); }
  /// Same fraction in lowest terms.
  Rational reduced() const;
  /// Value equality (1/2 == 2/4).
  bool same_value(const Rational& other) const;
  friend bool operator==(const Rational&, const Rational&) = default;
};

/// n x n grid of per-position outcomes, row-major, 1-based accessors.
class WMap {
 public:
  WMap() = default;
  explicit WMap(int side) : side_(side), cells_(static_cast<std::size_t>(side) * side) {}

  int side() const noexcept { return side_; }
  MatchResult& at(int row, int col) {
    return cells_[static_cast<std::size_t>(row - 1) * side_ + (col - 1)];
  }
  const MatchResult& at(int row, int col) const {
    return cells_[static_cast<std::size_t>(row - 1) * side_ + (col - 1)];
  }
  std::span<const MatchResult> cells() const noexcept { return cells_; }

  friend bool operator==(const WMap&, const WMap&) = default;

 private:
  int side_ = 0;
  std::vector<MatchResult> cells_;
};

struct SimilarityReport {
  std::int64_t s_numerator = 0;
  std::int64_t s_denominator = 1;
  double s_normalized = 0.0;
  double dissimilarity = 1.0;
  double p1 = 0.0;
  double p2 = 0.0;
  std::int64_t matched_positions = 0;
  std::int64_t distinct_anchors = 0;
  bool gated = false;
  WMap w_map;
  std::chrono::nanoseconds elapsed{0};

  Rational similarity() const { return {s_numerator, s_denominator}; }
  double elapsed_ms() const {
    return std::chrono::duration<double, std::milli>(elapsed).count();
  }
};

}  // namespace acsm
