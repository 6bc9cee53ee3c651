#include "frechet/cli_bench.hpp"
#include "frechet/oracles.hpp"
#include "frechet/simplification.hpp"

#include "CLI11.hpp"

#include <fstream>
#include <iostream>
#include <map>

namespace {

using namespace frechet;

constexpr int kUsage = 1;
constexpr int kInput = 2;
constexpr int kInvariant = 3;

struct InvariantViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void print_value(const SquaredDistance& v) {
  std::cout << "distance2 " << v.value << "\n";
  std::cout << "distance " << v.root().to_double() << "\n";
}

int cmd_compute(const std::string& fa, const std::string& fb, int scale, const std::string& engine_name,
                bool no_simplify, bool trace) {
  const auto engine = parse_engine(engine_name);
  if (!engine) throw CLI::ValidationError("--engine", "expected dijkstra or sweepline");
  const Curve a = parse_curve_file(fa, scale), b = parse_curve_file(fb, scale);
  if (no_simplify) {
    const FrechetResult r = compute_exact_frechet(a, b, {*engine});
    if (trace)
      for (const auto& s : r.trace)
        std::cout << "solve " << s.iteration << " bottleneck2 " << s.bottleneck2 << " sizes " << s.pi_size << "x"
                  << s.sigma_size << " inserted " << s.inserted << "\n";
    print_value(r.value2);
    std::cout << "iterations " << r.solves << "\nvertices_inserted " << r.vertices_inserted << "\n";
    return 0;
  }
  LosslessOptions opt;
  opt.engine = *engine;
  const LosslessResult r = lossless_compute(a, b, opt);
  if (trace)
    for (std::size_t k = 0; k < r.rounds.size(); ++k) {
      const LosslessRound& s = r.rounds[k];
      std::cout << "round " << k + 1 << " sizes " << s.pi_size << "x" << s.sigma_size << " simplified2 "
                << s.simplified2 << " lower " << s.lower.to_double() << " upper " << s.upper2.root().to_double()
                << " added " << s.added << (s.fallback ? " fallback" : "") << "\n";
    }
  print_value(r.value2);
  std::cout << "iterations " << r.solves << "\nvertices_inserted " << r.vertices_inserted << "\n";
  return 0;
}

int cmd_bench(const std::string& manifest_path, const std::string& pairs, double timeout, const std::string& out,
              const std::string& engine_name, bool no_simplify) {
  RunOptions opt;
  const auto sel = parse_pair_selection(pairs);
  if (!sel) throw CLI::ValidationError("--pairs", "expected all, choose2 or first:K");
  const auto engine = parse_engine(engine_name);
  if (!engine) throw CLI::ValidationError("--engine", "expected dijkstra or sweepline");
  opt.pairs = *sel;
  opt.engine = *engine;
  opt.simplify = !no_simplify;
  opt.timeout_seconds = timeout;
  const DatasetManifest m = load_manifest(manifest_path);
  std::ofstream file;
  if (!out.empty()) {
    file.open(out);
    if (!file) throw ParseError("cannot write " + out, 0);
  }
  std::ostream& os = out.empty() ? std::cout : file;
  os << csv_header() << "\n" << std::flush;
  std::size_t failed = 0;
  run_pairs(m, opt, [&](const ResultRecord& r) {
    os << to_csv(r) << "\n" << std::flush;
    failed += r.status != RunStatus::Ok;
  });
  if (failed) std::cerr << failed << " pair(s) did not finish\n";
  return 0;
}

int cmd_verify(const std::string& fa, const std::string& fb, int scale) {
  const Curve a = parse_curve_file(fa, scale), b = parse_curve_file(fb, scale);
  std::optional<SquaredDistance> first;
  for (Engine e : {Engine::Dijkstra, Engine::Sweepline})
    for (bool simplify : {false, true}) {
      const PairOutcome o = compute_pair(a, b, e, simplify);
      std::cout << to_string(e) << (simplify ? " simplified " : " plain ") << o.value2 << "\n";
      if (first && *first != o.value2) throw InvariantViolation("engines disagree");
      first = o.value2;
    }
  if (a.size() <= kBruteForceLimit && b.size() <= kBruteForceLimit) {
    const SquaredDistance oracle = brute_force_exact(a, b);
    std::cout << "oracle " << oracle << "\n";
    if (oracle != *first) throw InvariantViolation("oracle disagrees");
  }
  if (!decide_frechet(a, b, *first)) throw InvariantViolation("decision rejects the computed value");
  const SquaredDistance below{first->value - first->value / IntFraction(BigInt(1) << 40)};
  if (first->value.sign() > 0 && decide_frechet(a, b, below))
    throw InvariantViolation("decision accepts a smaller value");
  std::cout << "verified\n";
  return 0;
}

int cmd_accuracy(const std::string& csv, bool oracle, const std::string& manifest_path) {
  std::ifstream in(csv);
  if (!in) throw ParseError("cannot open " + csv, 0);
  const std::vector<ResultRecord> records = read_csv(in);
  std::function<std::optional<ExactRoot>(const ResultRecord&)> reference;
  std::map<std::string, ExactRoot> seen;
  DatasetManifest m;
  if (oracle) {
    if (manifest_path.empty()) throw CLI::ValidationError("--manifest", "required with --oracle");
    m = load_manifest(manifest_path);
    reference = [&](const ResultRecord& r) -> std::optional<ExactRoot> {
      if (r.n > kBruteForceLimit || r.m > kBruteForceLimit) return std::nullopt;
      const auto dash = r.pair_id.find('-');
      const std::size_t i = std::stoul(r.pair_id.substr(0, dash)), j = std::stoul(r.pair_id.substr(dash + 1));
      if (i >= m.files.size() || j >= m.files.size()) throw ParseError("unknown pair " + r.pair_id, 0);
      return brute_force_exact(parse_curve_file(m.files[i], m.scale), parse_curve_file(m.files[j], m.scale)).root();
    };
  } else {
    for (const auto& r : records)
      if (r.status == RunStatus::Ok) seen.emplace(r.pair_id, r.value);
    reference = [&](const ResultRecord& r) -> std::optional<ExactRoot> { return seen.at(r.pair_id); };
  }
  const AccuracyReport rep = accuracy_report(records, reference);
  std::cout << to_csv(rep);
  return rep.exact_mismatches ? kInvariant : 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Exact continuous Frechet distance"};
  app.require_subcommand(1);

  std::string fa, fb, engine = "dijkstra", manifest, pairs = "choose2", out, csv;
  int scale = 0;
  bool no_simplify = false, trace = false, oracle = false;
  double timeout = 300;

  auto* compute = app.add_subcommand("compute", "Distance between two curve files");
  compute->add_option("fileA", fa)->required();
  compute->add_option("fileB", fb)->required();
  compute->add_option("--engine", engine, "dijkstra or sweepline");
  compute->add_option("--scale", scale, "Decimal scale for quantization");
  compute->add_flag("--no-simplify", no_simplify);
  compute->add_flag("--trace", trace);

  auto* bench = app.add_subcommand("bench", "Pairwise benchmark over a manifest");
  bench->add_option("manifest", manifest)->required();
  bench->add_option("--pairs", pairs, "all, choose2 or first:K");
  bench->add_option("--timeout", timeout, "Seconds per pair");
  bench->add_option("--out", out, "Results CSV (default stdout)");
  bench->add_option("--engine", engine, "dijkstra or sweepline");
  bench->add_flag("--no-simplify", no_simplify);

  auto* verify = app.add_subcommand("verify", "Cross-check engines, simplification and oracles");
  verify->add_option("fileA", fa)->required();
  verify->add_option("fileB", fb)->required();
  verify->add_option("--scale", scale, "Decimal scale for quantization");

  auto* accuracy = app.add_subcommand("accuracy", "Error statistics of a results CSV");
  accuracy->add_option("results", csv)->required();
  accuracy->add_flag("--oracle", oracle, "Compare against brute force instead of the first record per pair");
  accuracy->add_option("--manifest", manifest, "Manifest the results were produced from");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kUsage;
  }
  try {
    if (*compute) return cmd_compute(fa, fb, scale, engine, no_simplify, trace);
    if (*bench) return cmd_bench(manifest, pairs, timeout, out, engine, no_simplify);
    if (*verify) return cmd_verify(fa, fb, scale);
    if (*accuracy) return cmd_accuracy(csv, oracle, manifest);
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kUsage;
  } catch (const ParseError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const RangeError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::invalid_argument& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInput;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kInvariant;
  }
  return kUsage;
}
