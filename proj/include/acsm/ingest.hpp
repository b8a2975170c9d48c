#pragma once
// Matrix ingestion (PGM, CSV), alphabet reduction and seeded generators.

#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "acsm/core.hpp"

namespace acsm::ingest {

/// ASCII "P2" or binary "P5" grayscale, maxval <= 255. L = maxval + 1.
SymbolMatrix load_pgm(std::string_view bytes);

/// Integer grid separated by commas and/or whitespace. Blank lines and lines
/// starting with '#' are skipped. L = max symbol + 1.
SymbolMatrix load_csv(std::string_view text);

/// Comma-separated rows. Each header line is written first, prefixed "# ".
std::string render_csv(const SymbolMatrix& m, const std::vector<std::string>& header = {});

/// Dispatches on extension: ".pgm" goes to load_pgm, anything else to load_csv.
SymbolMatrix load_file(const std::filesystem::path& path);

/// Same symbols declared over a different alphabet size; throws InputError if
/// a symbol does not fit.
SymbolMatrix with_alphabet(const SymbolMatrix& m, int alphabet);

/// Maps v to floor(v * target / L).
SymbolMatrix quantize(const SymbolMatrix& m, int target);

/// Uniform symbols in [0, L), deterministic for a given seed.
SymbolMatrix gen_random(int n, int alphabet, std::uint64_t seed);

struct PlantedPair {
  SymbolMatrix a;
  SymbolMatrix b;
  int block_side = 0;
  /// Bottom-right corner of the shared block, valid in both matrices.
  Position block_anchor;
};

/// Independent random A (n x n) and B (m x m) with A's side-k block at a
/// random anchor copied into B at the same coordinates.
PlantedPair gen_planted_pair(int n, int m, int alphabet, int k, std::uint64_t seed);

}  // namespace acsm::ingest
