#include "acsm/core.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>

namespace acsm {

SymbolMatrix::SymbolMatrix(int rows, int cols, int alphabet, std::vector<Symbol> symbols)
    : rows_(rows), cols_(cols), alphabet_(alphabet), symbols_(std::move(symbols)) {
  if (rows_ <= 0 || cols_ <= 0) {
    std::ostringstream msg;
    msg << "zero dimension: " << rows_ << "x" << cols_;
    throw InputError(msg.str());
  }
  if (alphabet_ <= 0) {
    throw InputError("alphabet size must be positive");
  }
  const auto expected = static_cast<std::size_t>(rows_) * static_cast<std::size_t>(cols_);
  if (symbols_.size() != expected) {
    std::ostringstream msg;
    msg << "expected " << expected << " symbols, got " << symbols_.size();
    throw InputError(msg.str());
  }
  for (Symbol s : symbols_) {
    if (s < 0) {
      std::ostringstream msg;
      msg << "negative symbol " << s;
      throw InputError(msg.str());
    }
    if (s >= alphabet_) {
      std::ostringstream msg;
      msg << "symbol " << s << " >= alphabet size " << alphabet_;
      throw InputError(msg.str());
    }
  }
}

SymbolMatrix validate_matrix(int rows, int cols, int alphabet, std::vector<Symbol> symbols) {
  return SymbolMatrix(rows, cols, alphabet, std::move(symbols));
}

int index_bounds(int i, int j, int /*n*/, int m) { return std::min({i, j, m}); }

int min_side(std::int64_t alpha) {
  if (alpha <= 1) return 1;
  auto s = static_cast<std::int64_t>(std::sqrt(static_cast<double>(alpha)));
  while (s * s < alpha) ++s;
  while (s > 1 && (s - 1) * (s - 1) >= alpha) --s;
  return static_cast<int>(s);
}

std::string_view to_string(DistanceMetric metric) {
  switch (metric) {
    case DistanceMetric::hamming_fraction: return "hamming";
    case DistanceMetric::mean_abs_diff: return "mad";
    case DistanceMetric::normalized_mean_abs_diff: return "nmad";
  }
  return "unknown";
}

DistanceMetric parse_metric(std::string_view name) {
  if (name == "hamming" || name == "hamming_fraction") return DistanceMetric::hamming_fraction;
  if (name == "mad" || name == "mean_abs_diff") return DistanceMetric::mean_abs_diff;
  if (name == "nmad" || name == "normalized_mean_abs_diff") {
    return DistanceMetric::normalized_mean_abs_diff;
  }
  throw InputError("unknown metric '" + std::string(name) + "'");
}

void validate(const MatcherSpec& matcher) {
  if (const auto* iv = std::get_if<IntervalMatcher>(&matcher); iv && iv->interval < 1) {
    throw InputError("interval must be >= 1");
  }
  if (const auto* dm = std::get_if<DistanceMatcher>(&matcher)) {
    if (!(dm->tau > 0.0) || !std::isfinite(dm->tau)) throw InputError("tau must be > 0");
  }
}

void validate(const Scope& scope) {
  if (const auto* nb = std::get_if<NeighborhoodScope>(&scope)) {
    if (nb->epsilon < 1 || nb->epsilon % 2 == 0) {
      throw InputError("epsilon must be an odd integer >= 1");
    }
  }
}

void validate(const MeasureParams& params) {
  if (params.alpha < 1) throw InputError("alpha must be >= 1");
  if (!(params.p0 >= 0.0 && params.p0 <= 1.0)) throw InputError("p0 must lie in [0,1]");
  validate(params.scope);
  validate(params.matcher);
}

Rational Rational::reduced() const {
  const std::int64_t g = std::gcd(num, den);
  if (g <= 1) return *this;
  return {num / g, den / g};
}

bool Rational::same_value(const Rational& other) const {
  __extension__ typedef __int128 wide;
  return static_cast<wide>(num) * other.den == static_cast<wide>(other.num) * den;
}

}  // namespace acsm
