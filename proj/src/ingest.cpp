#include "acsm/ingest.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <fstream>
#include <limits>
#include <random>
#include <sstream>

namespace acsm::ingest {
namespace {

bool is_space(char c) { return std::isspace(static_cast<unsigned char>(c)) != 0; }

// Header tokenizer for PGM: whitespace-separated, '#' starts a comment that
// runs to end of line.
class PgmHeader {
 public:
  explicit PgmHeader(std::string_view bytes) : bytes_(bytes) {}

  std::string_view next_token() {
    for (;;) {
      while (pos_ < bytes_.size() && is_space(bytes_[pos_])) ++pos_;
      if (pos_ < bytes_.size() && bytes_[pos_] == '#') {
        while (pos_ < bytes_.size() && bytes_[pos_] != '\n') ++pos_;
        continue;
      }
      break;
    }
    const std::size_t start = pos_;
    while (pos_ < bytes_.size() && !is_space(bytes_[pos_]) && bytes_[pos_] != '#') ++pos_;
    return bytes_.substr(start, pos_ - start);
  }

  int next_int(const char* what) {
    const std::string_view tok = next_token();
    if (tok.empty()) throw InputError(std::string("truncated payload: missing ") + what);
    int value = 0;
    const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
    if (ec != std::errc{} || end != tok.data() + tok.size() || value < 0) {
      throw InputError(std::string("invalid ") + what + " '" + std::string(tok) + "'");
    }
    return value;
  }

  std::size_t position() const noexcept { return pos_; }

 private:
  std::string_view bytes_;
  std::size_t pos_ = 0;
};

}  // namespace

SymbolMatrix load_pgm(std::string_view bytes) {
  if (bytes.size() < 2 || bytes[0] != 'P' || (bytes[1] != '2' && bytes[1] != '5')) {
    throw InputError("unsupported magic");
  }
  const bool binary = bytes[1] == '5';
  PgmHeader header(bytes.substr(2));
  const int width = header.next_int("width");
  const int height = header.next_int("height");
  const int maxval = header.next_int("maxval");
  if (width == 0 || height == 0) throw InputError("zero dimension");
  if (maxval > 255) throw InputError("maxval " + std::to_string(maxval) + " > 255");
  if (maxval == 0) throw InputError("maxval must be positive");

  const auto count = static_cast<std::size_t>(width) * static_cast<std::size_t>(height);
  std::vector<Symbol> symbols;
  symbols.reserve(count);
  auto push = [&](int v) {
    if (v > maxval) {
      throw InputError("pixel " + std::to_string(v) + " > maxval " + std::to_string(maxval));
    }
    symbols.push_back(v);
  };

  if (binary) {
    // Exactly one whitespace byte separates maxval from the raster.
    const std::size_t start = 2 + header.position() + 1;
    if (start > bytes.size() || bytes.size() - start < count) {
      throw InputError("truncated payload");
    }
    for (std::size_t k = 0; k < count; ++k) push(static_cast<unsigned char>(bytes[start + k]));
  } else {
    for (std::size_t k = 0; k < count; ++k) push(header.next_int("pixel"));
  }
  return SymbolMatrix(height, width, maxval + 1, std::move(symbols));
}

SymbolMatrix load_csv(std::string_view text) {
  std::vector<Symbol> symbols;
  std::size_t expected_cols = 0;
  int rows = 0;
  Symbol max_symbol = 0;

  std::size_t line_start = 0;
  while (line_start <= text.size()) {
    std::size_t line_end = text.find('\n', line_start);
    if (line_end == std::string_view::npos) line_end = text.size();
    std::string_view line = text.substr(line_start, line_end - line_start);
    line_start = line_end + 1;

    const auto first = std::find_if_not(line.begin(), line.end(), is_space);
    if (first == line.end() || *first == '#') continue;

    std::size_t cols = 0;
    std::size_t p = 0;
    while (p < line.size()) {
      while (p < line.size() && (is_space(line[p]) || line[p] == ',')) ++p;
      if (p >= line.size()) break;
      std::size_t q = p;
      while (q < line.size() && !is_space(line[q]) && line[q] != ',') ++q;
      const std::string_view tok = line.substr(p, q - p);
      p = q;
      if (tok.front() == '-') throw InputError("negative symbol '" + std::string(tok) + "'");
      Symbol value = 0;
      const auto [end, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
      if (ec != std::errc{} || end != tok.data() + tok.size()) {
        throw InputError("non-integer token '" + std::string(tok) + "'");
      }
      if (value == std::numeric_limits<Symbol>::max()) {
        throw InputError("symbol " + std::string(tok) + " too large");
      }
      max_symbol = std::max(max_symbol, value);
      symbols.push_back(value);
      ++cols;
    }
    ++rows;
    if (rows == 1) {
      expected_cols = cols;
    } else if (cols != expected_cols) {
      std::ostringstream msg;
      msg << "row " << rows << " has " << cols << (cols == 1 ? " column" : " columns")
          << ", expected " << expected_cols;
      throw InputError(msg.str());
    }
  }
  if (rows == 0) throw InputError("empty input");
  return SymbolMatrix(rows, static_cast<int>(expected_cols), max_symbol + 1, std::move(symbols));
}

std::string render_csv(const SymbolMatrix& m, const std::vector<std::string>& header) {
  std::ostringstream out;
  for (const auto& line : header) out << "# " << line << '\n';
  for (int r = 1; r <= m.rows(); ++r) {
    for (int c = 1; c <= m.cols(); ++c) {
      if (c > 1) out << ',';
      out << m.at(r, c);
    }
    out << '\n';
  }
  return out.str();
}

SymbolMatrix load_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string bytes = buf.str();
  try {
    auto ext = path.extension().string();
    std::transform(ext.begin(), ext.end(), ext.begin(),
                   [](unsigned char c) { return static_cast<char>(std::tolower(c)); });
    return ext == ".pgm" ? load_pgm(bytes) : load_csv(bytes);
  } catch (const InputError& e) {
    throw InputError(path.string() + ": " + e.what());
  }
}

SymbolMatrix with_alphabet(const SymbolMatrix& m, int alphabet) {
  return SymbolMatrix(m.rows(), m.cols(), alphabet, {m.symbols().begin(), m.symbols().end()});
}

SymbolMatrix quantize(const SymbolMatrix& m, int target) {
  if (target < 1) throw InputError("quantize target must be >= 1");
  std::vector<Symbol> out;
  out.reserve(m.symbols().size());
  for (Symbol v : m.symbols()) {
    out.push_back(static_cast<Symbol>(std::int64_t{v} * target / m.alphabet()));
  }
  return SymbolMatrix(m.rows(), m.cols(), target, std::move(out));
}

namespace {

std::vector<Symbol> draw(std::mt19937_64& rng, int count, int alphabet) {
  std::uniform_int_distribution<Symbol> dist(0, alphabet - 1);
  std::vector<Symbol> out(static_cast<std::size_t>(count));
  for (auto& s : out) s = dist(rng);
  return out;
}

}  // namespace

SymbolMatrix gen_random(int n, int alphabet, std::uint64_t seed) {
  if (n < 1 || alphabet < 1) throw InputError("n and alphabet must be >= 1");
  std::mt19937_64 rng(seed);
  return SymbolMatrix(n, n, alphabet, draw(rng, n * n, alphabet));
}

PlantedPair gen_planted_pair(int n, int m, int alphabet, int k, std::uint64_t seed) {
  if (n < 1 || m < 1 || alphabet < 1) throw InputError("n, m and alphabet must be >= 1");
  const int limit = std::min(n, m);
  if (k < 1 || k > limit) throw InputError("block exceeds matrix");

  std::mt19937_64 rng(seed);
  std::vector<Symbol> a = draw(rng, n * n, alphabet);
  std::vector<Symbol> b = draw(rng, m * m, alphabet);
  std::uniform_int_distribution<int> corner(k, limit);
  const Position at{corner(rng), corner(rng)};
  for (int r = at.row - k + 1; r <= at.row; ++r) {
    for (int c = at.col - k + 1; c <= at.col; ++c) {
      b[static_cast<std::size_t>(r - 1) * m + (c - 1)] = a[static_cast<std::size_t>(r - 1) * n + (c - 1)];
    }
  }
  return {SymbolMatrix(n, n, alphabet, std::move(a)), SymbolMatrix(m, m, alphabet, std::move(b)), k,
          at};
}

}  // namespace acsm::ingest
