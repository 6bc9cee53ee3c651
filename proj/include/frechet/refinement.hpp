#pragma once

#include "frechet/geometry.hpp"
#include "frechet/ve_graph.hpp"

#include <cstddef>
#include <stdexcept>
#include <string_view>
#include <optional>
#include <vector>

namespace frechet {

/// One non-monotone column: an edge AB of one curve crossed by consecutive vertices of the
/// other curve. The entry node sits at parameter t_entry on the first row, the exit node at
/// t_exit on the last row.
struct ColumnInstance {
  Point a;
  Point b;
  IntFraction t_entry;
  SquaredDistance entry_weight;
  IntFraction t_exit;
  SquaredDistance exit_weight;
  std::vector<Point> rows;
};

enum class EventKind { Spawn = 0, Join = 1, Undertake = 2 };

struct ColumnEvent {
  EventKind kind;
  SquaredDistance delta2;
  std::size_t first;   // winner row for Join/Undertake, spawned row otherwise
  std::size_t second;  // joined row / overtaking row
};

struct ColumnResult {
  /// Monotonicity vertices, strictly inside the edge, sorted by t. d2 is the largest
  /// squared distance from the vertex to a row crossing there.
  std::vector<EdgeParameter> vertices;
  /// Threshold at which the exit merged into the reachable bucket.
  SquaredDistance final_delta2;
  std::vector<ColumnEvent> log;
};

/// Event-driven minimum monotonicity-vertex computation for one column. Rows are indexed
/// 1..k in `instance.rows`; the entry and exit act as rows 0 and k+1 with point intervals.
/// The event sweep finds the threshold; vertices are then placed so that every row can be
/// crossed at its eddy, an edge endpoint or a vertex, left to right, with as few vertices
/// as possible.
ColumnResult refine_column(const ColumnInstance& instance, bool keep_log = false);

/// O(k^2) recomputation of the same event sequence without the loser tree.
ColumnResult refine_column_reference(const ColumnInstance& instance);

struct RefineStepResult {
  Curve pi;
  Curve sigma;
  std::size_t inserted = 0;
};

/// Columns and rows flagged by `report`, as instances over pi edges and sigma edges.
std::vector<std::pair<std::size_t, ColumnInstance>> column_instances(const VEGraph& g, const VEPath& path,
                                                                     const PathMonotonicityReport& report,
                                                                     bool rows);

/// Inserts the monotonicity vertices of every flagged column (on pi) and row (on sigma).
RefineStepResult refine_step(const VEGraph& g, const VEPath& path, const PathMonotonicityReport& report);

enum class Engine { Dijkstra, Sweepline };

const char* to_string(Engine e);
std::optional<Engine> parse_engine(std::string_view s);

struct IterationTrace {
  std::size_t iteration;
  SquaredDistance bottleneck2;
  std::size_t pi_size;
  std::size_t sigma_size;
  std::size_t inserted;
};

struct FrechetResult {
  SquaredDistance value2;
  Curve pi;     // refined
  Curve sigma;  // refined
  /// Optimal path on the refined curves; monotone unless the decision procedure ended the run.
  VEPath path;
  std::size_t solves = 0;
  std::size_t vertices_inserted = 0;
  std::vector<IterationTrace> trace;

  ExactRoot distance() const { return value2.root(); }
};

class IterationBoundExceeded : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct ExactOptions {
  Engine engine = Engine::Dijkstra;
  /// Zero selects n*m^2 + m*n^2 of the input sizes.
  std::size_t max_solves = 0;
};

/// Exact continuous Frechet distance by repeated VE-graph solves and monotonicity refinement.
FrechetResult compute_exact_frechet(const Curve& pi, const Curve& sigma, const ExactOptions& options = {});

VEPath solve(const VEGraph& g, Engine engine);

}  // namespace frechet
