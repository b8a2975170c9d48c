#include "acsm/cli.hpp"

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <map>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "acsm/ingest.hpp"
#include "acsm/measures.hpp"

namespace acsm::cli {
namespace {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

// Measure flags shared by compare and retrieve.
struct MeasureArgs {
  std::string measure = "acsm";
  std::int64_t alpha = 1;
  int interval = 2;
  int epsilon = 3;
  std::string metric = "hamming";
  double tau = 0.1;
  double p0 = 0.0;
  std::optional<int> quantize;
  std::optional<int> alphabet;
  unsigned threads = 0;

  CLI::Option* interval_opt = nullptr;
  CLI::Option* epsilon_opt = nullptr;
  CLI::Option* metric_opt = nullptr;
  CLI::Option* tau_opt = nullptr;
  CLI::Option* p0_opt = nullptr;
};

void add_measure_options(CLI::App* cmd, MeasureArgs& args) {
  cmd->add_option("--measure", args.measure, "acsm | approx | eacsm")
      ->check(CLI::IsMember({"acsm", "approx", "eacsm"}))
      ->capture_default_str();
  cmd->add_option("--alpha", args.alpha, "minimum submatrix area")->capture_default_str();
  args.interval_opt =
      cmd->add_option("--interval", args.interval, "sampling stride (approx only)")
          ->capture_default_str();
  args.epsilon_opt =
      cmd->add_option("--epsilon", args.epsilon, "odd neighborhood side (eacsm only)")
          ->capture_default_str();
  args.metric_opt = cmd->add_option("--metric", args.metric, "hamming | mad | nmad (eacsm only)")
                        ->check(CLI::IsMember({"hamming", "mad", "nmad"}))
                        ->capture_default_str();
  args.tau_opt =
      cmd->add_option("--tau", args.tau, "distance threshold (eacsm only)")->capture_default_str();
  args.p0_opt =
      cmd->add_option("--p0", args.p0, "frequency gate, 0 disables (eacsm only)")
          ->capture_default_str();
  cmd->add_option("--quantize", args.quantize, "reduce the alphabet to this many symbols");
  cmd->add_option("--alphabet", args.alphabet, "declare the alphabet size of both inputs");
  cmd->add_option("--threads", args.threads, "worker threads, 0 = all cores")
      ->capture_default_str();
}

void reject_irrelevant(const MeasureArgs& args) {
  auto forbid = [&](const CLI::Option* opt, const char* owner) {
    if (opt->count() > 0) {
      throw InputError(opt->get_name() + " only applies to --measure " + owner);
    }
  };
  if (args.measure != "approx") forbid(args.interval_opt, "approx");
  if (args.measure != "eacsm") {
    for (const CLI::Option* opt : {args.epsilon_opt, args.metric_opt, args.tau_opt, args.p0_opt}) {
      forbid(opt, "eacsm");
    }
  }
}

measures::MeasureKind to_kind(const MeasureArgs& args) {
  measures::MeasureKind kind;
  if (args.measure == "acsm") {
    kind = measures::AcsmKind{args.alpha};
  } else if (args.measure == "approx") {
    kind = measures::ApproxKind{args.alpha, args.interval};
  } else {
    kind = measures::EacsmKind{args.alpha, args.epsilon, parse_metric(args.metric), args.tau,
                               args.p0};
  }
  validate(measures::to_params(kind));
  return kind;
}

json params_json(const measures::MeasureKind& kind, const MeasureArgs& args) {
  json p = std::visit(
      [](const auto& k) -> json {
        using T = std::decay_t<decltype(k)>;
        if constexpr (std::is_same_v<T, measures::AcsmKind>) {
          return {{"alpha", k.alpha}};
        } else if constexpr (std::is_same_v<T, measures::ApproxKind>) {
          return {{"alpha", k.alpha}, {"interval", k.interval}};
        } else {
          return {{"alpha", k.alpha},
                  {"epsilon", k.epsilon},
                  {"metric", std::string(to_string(k.metric))},
                  {"tau", k.tau},
                  {"p0", k.p0}};
        }
      },
      kind);
  p["quantize"] = args.quantize ? json(*args.quantize) : json(nullptr);
  return p;
}

// Brings two loaded matrices onto one alphabet: the declared --alphabet, or
// else the larger of the two, then applies --quantize.
std::pair<SymbolMatrix, SymbolMatrix> harmonize(SymbolMatrix a, SymbolMatrix b,
                                                const MeasureArgs& args) {
  const int alphabet = args.alphabet.value_or(std::max(a.alphabet(), b.alphabet()));
  if (a.alphabet() != alphabet) a = ingest::with_alphabet(a, alphabet);
  if (b.alphabet() != alphabet) b = ingest::with_alphabet(b, alphabet);
  if (args.quantize) {
    a = ingest::quantize(a, *args.quantize);
    b = ingest::quantize(b, *args.quantize);
  }
  return {std::move(a), std::move(b)};
}

void require_square(const SymbolMatrix& m, const std::string& label) {
  if (!m.is_square()) {
    throw InputError("matrix must be square: " + label + " is " + std::to_string(m.rows()) + "x" +
                     std::to_string(m.cols()));
  }
}

json w_map_json(const WMap& map) {
  json rows = json::array();
  for (int i = 1; i <= map.side(); ++i) {
    json row = json::array();
    for (int j = 1; j <= map.side(); ++j) {
      const MatchResult& cell = map.at(i, j);
      json anchor = cell.anchor ? json::array({cell.anchor->row, cell.anchor->col, cell.anchor->side})
                                : json(nullptr);
      row.push_back({{"w", cell.w}, {"anchor", std::move(anchor)}});
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

// ---------------------------------------------------------------------------
// compare

struct CompareArgs {
  std::string path_a;
  std::string path_b;
  MeasureArgs measure;
  bool dump_w = false;
  std::string output = "json";
};

int cmd_compare(const CompareArgs& args, std::ostream& out) {
  reject_irrelevant(args.measure);
  const measures::MeasureKind kind = to_kind(args.measure);

  auto [a, b] = harmonize(ingest::load_file(args.path_a), ingest::load_file(args.path_b),
                          args.measure);
  require_square(a, args.path_a);
  require_square(b, args.path_b);
  const SimilarityReport report =
      measures::compare(a, b, kind, {.threads = args.measure.threads});

  json doc;
  doc["measure"] = std::string(measures::kind_name(kind));
  doc["params"] = params_json(kind, args.measure);
  doc["n"] = a.rows();
  doc["m"] = b.rows();
  doc["s_numerator"] = report.s_numerator;
  doc["s_denominator"] = report.s_denominator;
  doc["s_normalized"] = report.s_normalized;
  doc["dissimilarity"] = report.dissimilarity;
  doc["p1"] = report.p1;
  doc["p2"] = report.p2;
  doc["gated"] = report.gated;
  doc["elapsed_ms"] = report.elapsed_ms();
  if (args.dump_w) doc["w_map"] = w_map_json(report.w_map);

  if (args.output == "json") {
    out << doc.dump(2) << '\n';
  } else {
    out << std::setprecision(12);
    for (const auto& [key, value] : doc.items()) {
      if (key == "w_map") continue;
      out << key << ": " << (value.is_string() ? value.get<std::string>() : value.dump()) << '\n';
    }
    if (args.dump_w) {
      for (int i = 1; i <= report.w_map.side(); ++i) {
        for (int j = 1; j <= report.w_map.side(); ++j) {
          out << (j > 1 ? " " : "") << report.w_map.at(i, j).w;
        }
        out << '\n';
      }
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// retrieve

struct RetrieveArgs {
  std::string query;
  std::string corpus;
  std::size_t k = 5;
  MeasureArgs measure;
};

struct Ranked {
  std::string path;
  std::string label;
  double dissimilarity = 1.0;
};

std::string label_of(const fs::path& file, const fs::path& root) {
  const fs::path rel = file.lexically_relative(root);
  auto it = rel.begin();
  if (it == rel.end()) return {};
  const fs::path first = *it;
  return ++it == rel.end() ? std::string{} : first.string();
}

// Most frequent label among the ranked items; ties go to the label whose
// best item ranks first.
std::string majority_label(const std::vector<Ranked>& ranked) {
  std::map<std::string, std::size_t> counts;
  for (const auto& r : ranked) ++counts[r.label];
  std::string best;
  std::size_t best_count = 0;
  for (const auto& r : ranked) {
    if (counts[r.label] > best_count) {
      best = r.label;
      best_count = counts[r.label];
    }
  }
  return best;
}

int cmd_retrieve(const RetrieveArgs& args, std::ostream& out, std::ostream& err) {
  reject_irrelevant(args.measure);
  const measures::MeasureKind kind = to_kind(args.measure);
  if (args.k == 0) throw InputError("--k must be >= 1");

  const SymbolMatrix query = ingest::load_file(args.query);
  require_square(query, args.query);

  const fs::path root(args.corpus);
  std::error_code ec;
  if (!fs::is_directory(root, ec)) throw InputError("corpus root is not a directory: " + args.corpus);
  std::vector<fs::path> files;
  for (fs::recursive_directory_iterator it(root, ec), end; !ec && it != end; it.increment(ec)) {
    if (it->is_regular_file(ec)) files.push_back(it->path());
  }
  if (files.empty()) throw InputError("empty corpus: " + args.corpus);
  std::sort(files.begin(), files.end());

  std::vector<Ranked> ranked;
  std::size_t skipped = 0;
  for (const fs::path& file : files) {
    try {
      auto [q, item] = harmonize(query, ingest::load_file(file), args.measure);
      require_square(item, file.string());
      const auto report = measures::compare(q, item, kind, {.threads = args.measure.threads});
      ranked.push_back({file.generic_string(), label_of(file, root), report.dissimilarity});
    } catch (const InputError& e) {
      err << "warning: skipping " << file.string() << ": " << e.what() << '\n';
      ++skipped;
    }
  }

  std::sort(ranked.begin(), ranked.end(), [](const Ranked& x, const Ranked& y) {
    if (x.dissimilarity != y.dissimilarity) return x.dissimilarity < y.dissimilarity;
    return x.path < y.path;
  });
  if (ranked.size() > args.k) ranked.resize(args.k);

  json doc;
  doc["query"] = fs::path(args.query).generic_string();
  doc["measure"] = std::string(measures::kind_name(kind));
  doc["params"] = params_json(kind, args.measure);
  doc["k"] = args.k;
  json results = json::array();
  for (const auto& r : ranked) {
    results.push_back({{"path", r.path}, {"label", r.label}, {"dissimilarity", r.dissimilarity}});
  }
  doc["results"] = std::move(results);
  doc["majority_label"] = ranked.empty() ? json(nullptr) : json(majority_label(ranked));
  doc["skipped"] = skipped;
  out << doc.dump(2) << '\n';
  return kExitOk;
}

// ---------------------------------------------------------------------------
// bench

struct BenchArgs {
  std::vector<int> sizes{32, 64};
  std::vector<int> epsilons{5, 9};
  std::vector<int> intervals;
  int trials = 3;
  std::uint64_t seed = 1;
  int alphabet = 8;
  std::int64_t alpha = 1;
  std::string metric = "hamming";
  double tau = 0.1;
  unsigned threads = 1;
};

std::uint64_t bench_seed(std::uint64_t seed, int n, int trial, int role) {
  return seed * 1000003ULL + static_cast<std::uint64_t>(n) * 1009ULL +
         static_cast<std::uint64_t>(trial) * 2ULL + static_cast<std::uint64_t>(role);
}

int cmd_bench(const BenchArgs& args, std::ostream& out) {
  if (args.trials < 1) throw InputError("--trials must be >= 1");
  for (int n : args.sizes) {
    if (n < 1) throw InputError("--sizes entries must be >= 1");
  }
  const DistanceMetric metric = parse_metric(args.metric);
  const measures::ComputeOptions options{.threads = args.threads};

  struct Config {
    measures::MeasureKind kind;
    std::string epsilon;
    std::string interval;
  };
  std::vector<Config> configs{{measures::AcsmKind{args.alpha}, "", ""}};
  for (int iv : args.intervals) {
    configs.push_back({measures::ApproxKind{args.alpha, iv}, "", std::to_string(iv)});
  }
  for (int eps : args.epsilons) {
    configs.push_back({measures::EacsmKind{args.alpha, eps, metric, args.tau, 0.0},
                       std::to_string(eps), ""});
  }
  for (const auto& cfg : configs) validate(measures::to_params(cfg.kind));

  out << "measure,n,m,epsilon,interval,trial,elapsed_ms\n";
  out << std::setprecision(6) << std::fixed;
  for (int n : args.sizes) {
    std::vector<std::pair<SymbolMatrix, SymbolMatrix>> pairs;
    for (int t = 0; t < args.trials; ++t) {
      pairs.emplace_back(ingest::gen_random(n, args.alphabet, bench_seed(args.seed, n, t, 0)),
                         ingest::gen_random(n, args.alphabet, bench_seed(args.seed, n, t, 1)));
    }
    for (const auto& cfg : configs) {
      measures::compare(pairs.front().first, pairs.front().second, cfg.kind, options);  // warm-up
      for (int t = 0; t < args.trials; ++t) {
        const auto report =
            measures::compare(pairs[t].first, pairs[t].second, cfg.kind, options);
        out << measures::kind_name(cfg.kind) << ',' << n << ',' << n << ',' << cfg.epsilon << ','
            << cfg.interval << ',' << t << ',' << report.elapsed_ms() << '\n';
      }
    }
  }
  return kExitOk;
}

// ---------------------------------------------------------------------------
// gen

struct GenArgs {
  int n = 0;
  std::optional<int> m;
  int alphabet = 8;
  std::uint64_t seed = 0;
  std::optional<int> plant;
  std::optional<std::string> out_a;
  std::optional<std::string> out_b;
};

void write_text(const std::string& path, const std::string& text) {
  std::ofstream file(path, std::ios::binary | std::ios::trunc);
  if (!file || !(file << text) || !file.flush()) throw InputError("cannot write " + path);
}

int cmd_gen(const GenArgs& args, std::ostream& out) {
  const std::string common =
      "acsm-gen seed=" + std::to_string(args.seed) + " n=" + std::to_string(args.n);
  if (!args.plant) {
    if (args.m) throw InputError("--m only applies together with --plant");
    if (args.out_b) throw InputError("--out-b only applies together with --plant");
    const SymbolMatrix a = ingest::gen_random(args.n, args.alphabet, args.seed);
    const std::string text =
        ingest::render_csv(a, {common + " L=" + std::to_string(args.alphabet)});
    if (args.out_a) {
      write_text(*args.out_a, text);
    } else {
      out << text;
    }
    return kExitOk;
  }

  if (!args.out_a || !args.out_b) throw InputError("--plant requires --out and --out-b");
  const int m = args.m.value_or(args.n);
  const auto pair = ingest::gen_planted_pair(args.n, m, args.alphabet, *args.plant, args.seed);
  const std::string meta = common + " m=" + std::to_string(m) +
                           " L=" + std::to_string(args.alphabet) +
                           " plant_side=" + std::to_string(pair.block_side) +
                           " plant_row=" + std::to_string(pair.block_anchor.row) +
                           " plant_col=" + std::to_string(pair.block_anchor.col);
  write_text(*args.out_a, ingest::render_csv(pair.a, {meta + " role=A"}));
  write_text(*args.out_b, ingest::render_csv(pair.b, {meta + " role=B"}));
  return kExitOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"ACSM-family similarity measures for square symbol matrices", "acsm"};
  app.require_subcommand(1);

  CompareArgs compare;
  auto* compare_cmd = app.add_subcommand("compare", "compare two matrices");
  compare_cmd->add_option("path_a", compare.path_a, "first matrix (.csv or .pgm)")->required();
  compare_cmd->add_option("path_b", compare.path_b, "second matrix (.csv or .pgm)")->required();
  add_measure_options(compare_cmd, compare.measure);
  compare_cmd->add_flag("--dump-w", compare.dump_w, "include the per-position W map");
  compare_cmd->add_option("--output", compare.output, "json | plain")
      ->check(CLI::IsMember({"json", "plain"}))
      ->capture_default_str();

  RetrieveArgs retrieve;
  auto* retrieve_cmd = app.add_subcommand("retrieve", "rank a labelled corpus against a query");
  retrieve_cmd->add_option("query", retrieve.query, "query matrix")->required();
  retrieve_cmd->add_option("corpus", retrieve.corpus, "directory of <label>/<file> matrices")
      ->required();
  retrieve_cmd->add_option("--k", retrieve.k, "number of neighbours")->capture_default_str();
  add_measure_options(retrieve_cmd, retrieve.measure);

  BenchArgs bench;
  auto* bench_cmd = app.add_subcommand("bench", "time the measures on seeded random pairs");
  bench_cmd->add_option("--sizes", bench.sizes, "matrix sides")->delimiter(',');
  bench_cmd->add_option("--epsilons", bench.epsilons, "eacsm neighborhood sides")->delimiter(',');
  bench_cmd->add_option("--intervals", bench.intervals, "approx strides (omit to skip approx)")
      ->delimiter(',');
  bench_cmd->add_option("--trials", bench.trials)->capture_default_str();
  bench_cmd->add_option("--seed", bench.seed)->capture_default_str();
  bench_cmd->add_option("--alphabet", bench.alphabet)->capture_default_str();
  bench_cmd->add_option("--alpha", bench.alpha)->capture_default_str();
  bench_cmd->add_option("--metric", bench.metric)
      ->check(CLI::IsMember({"hamming", "mad", "nmad"}))
      ->capture_default_str();
  bench_cmd->add_option("--tau", bench.tau)->capture_default_str();
  bench_cmd->add_option("--threads", bench.threads)->capture_default_str();

  GenArgs gen;
  auto* gen_cmd = app.add_subcommand("gen", "write seeded random matrices as CSV");
  gen_cmd->add_option("--n", gen.n, "side of A")->required();
  gen_cmd->add_option("--m", gen.m, "side of B (with --plant)");
  gen_cmd->add_option("--alphabet", gen.alphabet)->capture_default_str();
  gen_cmd->add_option("--seed", gen.seed)->capture_default_str();
  gen_cmd->add_option("--plant", gen.plant, "side of a block shared by A and B");
  gen_cmd->add_option("--out", gen.out_a, "output path for A (stdout if omitted)");
  gen_cmd->add_option("--out-b", gen.out_b, "output path for B (with --plant)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      app.exit(e, out, err);
      return kExitOk;
    }
    err << "error: " << e.what() << '\n';
    return kExitInput;
  }

  try {
    if (compare_cmd->parsed()) return cmd_compare(compare, out);
    if (retrieve_cmd->parsed()) return cmd_retrieve(retrieve, out, err);
    if (bench_cmd->parsed()) return cmd_bench(bench, out);
    return cmd_gen(gen, out);
  } catch (const InputError& e) {
    err << "error: " << e.what() << '\n';
    return kExitInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << '\n';
    return kExitInternal;
  }
}

}  // namespace acsm::cli
