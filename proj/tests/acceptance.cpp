#include "frechet/cli_bench.hpp"
#include "frechet/oracles.hpp"
#include "frechet/refinement.hpp"
#include "frechet/simplification.hpp"
#include "frechet/ve_graph.hpp"

#include "column_oracle.hpp"
#include "test_support.hpp"

#include <boost/multiprecision/cpp_bin_float.hpp>

#include <chrono>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

namespace {

using namespace frechet;
using Clock = std::chrono::steady_clock;
using Wide = boost::multiprecision::number<boost::multiprecision::cpp_bin_float<256>>;

struct Pair {
  Curve a;
  Curve b;
  SquaredDistance truth;
};

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

IntFraction frac(std::int64_t n, std::int64_t d = 1) { return IntFraction(BigInt(n), BigInt(d)); }

std::vector<Pair> fuzz_corpus(std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::vector<Pair> out;
  while (out.size() < count) {
    Curve a = testing::random_curve(rng, 2 + rng() % 7), b = testing::random_curve(rng, 2 + rng() % 7);
    SquaredDistance t = brute_force_exact(a, b);
    out.push_back({std::move(a), std::move(b), std::move(t)});
  }
  return out;
}

int failures = 0;

void report(const std::string& name, bool pass, const std::string& detail) {
  std::cout << (pass ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
  failures += !pass;
}

void oracle_exactness(const std::vector<Pair>& corpus) {
  const auto t0 = Clock::now();
  std::size_t bad = 0, runs = 0;
  for (const Pair& p : corpus)
    for (Engine e : {Engine::Dijkstra, Engine::Sweepline})
      for (bool simplify : {false, true}) {
        ++runs;
        bad += compute_pair(p.a, p.b, e, simplify).value2 != p.truth;
      }
  std::ostringstream os;
  os << corpus.size() << " pairs, " << runs << " runs, " << bad << " mismatches, " << since(t0) << " s";
  report("oracle exactness", bad == 0 && corpus.size() >= 500 && since(t0) < 120, os.str());
}

void decision_consistency(const std::vector<Pair>& corpus) {
  std::mt19937_64 rng(1201);
  std::size_t bad = 0, checks = 0;
  for (const Pair& p : corpus) {
    for (int k = 0; k < 10; ++k) {
      SquaredDistance d;
      switch (k % 4) {
        case 0: d = p.truth; break;
        case 1: d.value = p.truth.value * (frac(1) + frac(1, 1 + static_cast<std::int64_t>(rng() % 1000000))); break;
        case 2: d.value = p.truth.value * (frac(1) - frac(1, 2 + static_cast<std::int64_t>(rng() % 1000000))); break;
        default: d.value = frac(static_cast<std::int64_t>(rng() % 20000)); break;
      }
      ++checks;
      bad += decide_frechet(p.a, p.b, d) != (p.truth <= d);
    }
  }
  std::ostringstream os;
  os << checks << " decisions, " << bad << " inconsistent";
  report("decision consistency", bad == 0, os.str());
}

struct LoopStats {
  std::size_t sandwich_bad = 0;
  std::size_t iterations = 0;
  std::size_t engine_bad = 0;
  std::size_t bound_bad = 0;
};

// The refinement loop of compute_exact_frechet, with every iteration checked.
void checked_loop(const Pair& p, Engine engine, LoopStats& st) {
  Curve pi = p.a, sigma = p.b;
  const std::size_t n = pi.size(), m = sigma.size();
  const std::size_t bound = n * m * m + m * n * n;
  for (std::size_t solves = 1;; ++solves) {
    const VEGraph g(pi, sigma);
    const VEPath path = solve(g, engine);
    const VEPath other = solve(g, engine == Engine::Dijkstra ? Engine::Sweepline : Engine::Dijkstra);
    ++st.iterations;
    st.engine_bad += path.bottleneck2 != other.bottleneck2;
    st.sandwich_bad += !(path.bottleneck2 <= p.truth && p.truth <= interpolated_ve_distance(g, path));
    const PathMonotonicityReport rep = monotonicity_report(g, path);
    if (rep.monotone || monotone_path_exists(g, path.bottleneck_node) || decide_frechet(pi, sigma, path.bottleneck2)) {
      st.bound_bad += solves > bound;
      return;
    }
    RefineStepResult r = refine_step(g, path, rep);
    if (r.inserted == 0 || solves > bound) {
      ++st.bound_bad;
      return;
    }
    pi = std::move(r.pi);
    sigma = std::move(r.sigma);
  }
}

void refinement_invariants(const std::vector<Pair>& corpus) {
  LoopStats st;
  std::size_t solves_bad = 0;
  for (const Pair& p : corpus)
    for (Engine e : {Engine::Dijkstra, Engine::Sweepline}) {
      checked_loop(p, e, st);
      const FrechetResult r = compute_exact_frechet(p.a, p.b, {e});
      const std::size_t n = p.a.size(), m = p.b.size();
      solves_bad += r.solves > n * m * m + m * n * n;
    }
  std::ostringstream os;
  os << st.iterations << " iterations, " << st.sandwich_bad << " violations";
  report("sandwich invariant", st.sandwich_bad == 0, os.str());

  const FrechetResult z =
      compute_exact_frechet(testing::curve({{0, 0}, {12, 0}}), testing::curve({{0, 3}, {8, 3}, {4, 3}, {12, 3}}));
  const bool zig = z.value2.value == frac(13) && z.trace.size() == 2 && z.trace[0].inserted > 0 &&
                   z.trace[1].inserted == 0;
  std::ostringstream cs;
  cs << solves_bad + st.bound_bad << " runs over the bound; zig-zag " << z.trace.size() - 1 << " refinement, value sqrt("
     << z.value2 << ")";
  report("convergence bound", solves_bad == 0 && st.bound_bad == 0 && zig, cs.str());

  std::ostringstream es;
  es << st.iterations << " graphs, " << st.engine_bad << " bottleneck differences";
  report("engine equivalence", st.engine_bad == 0, es.str());
}

void minimality() {
  std::mt19937_64 rng(1203);
  std::size_t nontrivial = 0, bad = 0, tried = 0;
  for (; tried < 5000 && nontrivial < 220; ++tried) {
    const auto f = testing::random_column(rng, 1 + rng() % 6);
    const ColumnResult r = refine_column(f.instance);
    std::vector<IntFraction> ts;
    for (const auto& v : r.vertices) ts.push_back(v.t);
    bool ok = testing::column_reachable(f, ts, r.final_delta2);
    const std::vector<IntFraction> cand = testing::candidate_vertices(f);
    const SquaredDistance below{r.final_delta2.value - r.final_delta2.value / frac(1000000000)};
    if (r.final_delta2.value.sign() > 0) ok = ok && !testing::column_reachable(f, cand, below);
    if (!ts.empty()) {
      ++nontrivial;
      ok = ok && !testing::some_subset_reaches(f, cand, ts.size() - 1, r.final_delta2);
    }
    bad += !ok;
  }
  std::ostringstream os;
  os << nontrivial << " columns needing vertices (" << tried << " total), " << bad << " failures";
  report("minimality", bad == 0 && nontrivial >= 200, os.str());
}

void lower_bound_soundness(const std::vector<Pair>& corpus) {
  std::mt19937_64 rng(1205);
  std::size_t above = 0, below_global = 0, simplified = 0;
  for (const Pair& p : corpus) {
    const SquaredDistance mu2{frac(static_cast<std::int64_t>(rng() % 4000))};
    const SimplificationState sa = initial_simplification(p.a, mu2), sb = initial_simplification(p.b, mu2);
    simplified += !(sa.all_original() && sb.all_original());
    const FrechetResult m = compute_exact_frechet(sa.curve(), sb.curve());
    const LowerBound lb = weighted_lower_bound(sa, sb, m.value2);
    above += p.truth.root() < lb.value;
    below_global += lb.value < lb.global;
  }
  std::ostringstream os;
  os << corpus.size() << " pairs (" << simplified << " simplified), " << above << " above the oracle, " << below_global
     << " below the global bound";
  report("lower-bound soundness", above == 0 && below_global == 0 && corpus.size() >= 500, os.str());
}

Wide wide(const IntFraction& f) { return Wide(f.num().str()) / Wide(f.den().str()); }
Wide wide(const ExactRoot& r) { return wide(r.rational) + r.sign * boost::multiprecision::sqrt(wide(r.radicand)); }

ExactRoot random_root(std::mt19937_64& rng, std::int64_t range) {
  std::uniform_int_distribution<std::int64_t> num(-range, range), den(1, 1000), rad(0, range);
  return ExactRoot(frac(num(rng), den(rng)), frac(rad(rng), den(rng)), rng() % 2 ? 1 : -1);
}

void predicate_kernel() {
  std::mt19937_64 rng(1207);
  std::size_t bad = 0, ties = 0;
  const Wide eps = boost::multiprecision::ldexp(Wide(1), -220);
  for (int k = 0; k < 100000; ++k) {
    const ExactRoot x = random_root(rng, 1000000);
    ExactRoot y = random_root(rng, 1000000);
    if (k % 10 == 0) {
      // Perfect-square radicand: the same value as a plain rational.
      const IntFraction u = frac(static_cast<std::int64_t>(rng() % 5000), 1 + static_cast<std::int64_t>(rng() % 50));
      const ExactRoot z(x.rational, u * u, x.sign);
      y = ExactRoot(x.rational + (x.sign < 0 ? -u : u));
      ties += compare_root_expressions(z, y) == Ordering::Equal;
      bad += compare_root_expressions(z, y) != Ordering::Equal;
      continue;
    }
    const Ordering o = compare_root_expressions(x, y);
    const Wide diff = wide(x) - wide(y);
    const Wide tol = eps * (abs(wide(x)) + abs(wide(y)) + 1);
    const bool ok = (o == Ordering::Less && diff < tol) || (o == Ordering::Greater && diff > -tol) ||
                    (o == Ordering::Equal && abs(diff) <= tol);
    const bool decisive = abs(diff) > tol;
    bad += !ok || (decisive && o == Ordering::Equal) || compare_root_expressions(y, x) != reverse(o);
  }
  std::size_t order_bad = 0;
  auto le = [](const ExactRoot& a, const ExactRoot& b) { return compare_root_expressions(a, b) != Ordering::Greater; };
  for (int k = 0; k < 10000; ++k) {
    ExactRoot t[3];
    for (auto& v : t) v = random_root(rng, 20);
    order_bad += compare_root_expressions(t[0], t[0]) != Ordering::Equal;
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        order_bad += compare_root_expressions(t[i], t[j]) != reverse(compare_root_expressions(t[j], t[i]));
        order_bad += !le(t[i], t[j]) && !le(t[j], t[i]);
        for (int l = 0; l < 3; ++l) order_bad += le(t[i], t[j]) && le(t[j], t[l]) && !le(t[i], t[l]);
      }
  }
  std::ostringstream os;
  os << "100000 comparisons (" << ties << " constructed ties), " << bad << " disagreements; 10000 triples, "
     << order_bad << " order violations";
  report("predicate kernel", bad == 0 && order_bad == 0, os.str());
}

namespace fs = std::filesystem;

DatasetManifest synthetic_dataset(const fs::path& dir, std::mt19937_64& rng, std::size_t curves, std::size_t lo,
                                  std::size_t hi) {
  fs::remove_all(dir);
  fs::create_directories(dir);
  std::ostringstream json;
  json << R"({"name": "synthetic", "scale": 0, "curves": [)";
  for (std::size_t i = 0; i < curves; ++i) {
    const std::size_t size = lo + rng() % (hi - lo + 1);
    std::ofstream(dir / ("c" + std::to_string(i) + ".txt")) << [&] {
      std::ostringstream body;
      write_curve(body, testing::random_walk(rng, size, 5, 0, static_cast<std::int64_t>(rng() % 8)));
      return body.str();
    }();
    json << (i ? ", " : "") << "\"c" << i << ".txt\"";
  }
  json << "]}";
  std::ofstream(dir / "manifest.json") << json.str();
  return load_manifest(dir / "manifest.json");
}

std::string value_fields(const ResultRecord& r) {
  const std::string line = to_csv(r);
  std::size_t start = 0;
  for (int k = 0; k < 7; ++k) start = line.find(',', start) + 1;
  std::size_t end = start;
  for (int k = 0; k < 5; ++k) end = line.find(',', end) + 1;
  return r.pair_id + ":" + line.substr(start, end - start);
}

void determinism() {
  std::mt19937_64 rng(1209);
  const DatasetManifest m = synthetic_dataset(fs::temp_directory_path() / "frechet_acceptance_det", rng, 6, 10, 60);
  std::vector<std::vector<std::string>> runs;
  for (Engine e : {Engine::Dijkstra, Engine::Sweepline})
    for (bool simplify : {true, false})
      for (int rep = 0; rep < 2; ++rep) {
        RunOptions o;
        o.engine = e;
        o.simplify = simplify;
        runs.emplace_back();
        run_pairs(m, o, [&](const ResultRecord& r) { runs.back().push_back(value_fields(r)); });
      }
  std::size_t differing = 0;
  for (const auto& r : runs) differing += r != runs.front();
  std::ostringstream os;
  os << runs.size() << " runs of " << runs.front().size() << " pairs, " << differing << " with different value fields";
  report("determinism", differing == 0 && runs.front().size() == 15, os.str());
}

void smoke_benchmark() {
  std::mt19937_64 rng(1211);
  const DatasetManifest m = synthetic_dataset(fs::temp_directory_path() / "frechet_acceptance_smoke", rng, 15, 500, 1000);
  RunOptions o;
  o.pairs = *parse_pair_selection("first:100");
  o.timeout_seconds = 300;
  std::size_t pairs = 0, not_ok = 0;
  double worst = 0, total = 0;
  run_pairs(m, o, [&](const ResultRecord& r) {
    ++pairs;
    not_ok += r.status != RunStatus::Ok;
    worst = std::max(worst, r.wall_seconds);
    total += r.wall_seconds;
  });
  std::ostringstream os;
  os << pairs << " pairs, " << not_ok << " timeouts or errors, slowest " << worst << " s, total " << total << " s";
  report("smoke benchmark", pairs == 100 && not_ok == 0, os.str());
}

}  // namespace

int main() {
  const std::vector<Pair> corpus = fuzz_corpus(500, 1200);
  oracle_exactness(corpus);
  decision_consistency(corpus);
  refinement_invariants(corpus);
  minimality();
  lower_bound_soundness(corpus);
  predicate_kernel();
  determinism();
  smoke_benchmark();
  std::cout << (failures ? "acceptance FAILED" : "acceptance passed") << std::endl;
  return failures ? 1 : 0;
}
