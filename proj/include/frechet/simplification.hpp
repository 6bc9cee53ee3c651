#pragma once

#include "frechet/geometry.hpp"
#include "frechet/refinement.hpp"

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

namespace frechet {

/// Greedy matching of a subcurve onto the segment joining its endpoints.
struct EdgeTraversal {
  std::vector<IntFraction> tau;  // running-max parameter per subcurve vertex
  SquaredDistance weight2;       // largest squared leash over the vertices
  std::size_t split = 0;         // first interior vertex attaining weight2, 0 if none
};

/// `sub` includes both endpoints of the edge.
EdgeTraversal greedy_joint_traversal(std::span<const Point> sub);

/// A vertex-restricted simplification of a base curve.
class SimplificationState {
 public:
  SimplificationState() = default;
  SimplificationState(const Curve& base, std::vector<std::size_t> selected);

  const Curve& base() const { return base_; }
  const std::vector<std::size_t>& selected() const { return selected_; }
  const EdgeTraversal& traversal(std::size_t e) const { return edges_[e]; }
  std::size_t edge_count() const { return edges_.size(); }
  bool original(std::size_t e) const { return selected_[e + 1] == selected_[e] + 1; }
  bool all_original() const { return selected_.size() == base_.size(); }
  Curve curve() const;

  /// Rational over-estimate of the edge weight.
  IntFraction offset(std::size_t e, unsigned slack_bits) const;
  /// Largest offset over all edges.
  IntFraction max_offset(unsigned slack_bits) const;

  /// Adds the split vertex of every listed non-original edge. Returns the number added.
  std::size_t split(const std::vector<std::size_t>& edges);
  /// Adds every vertex of `other`, which must share the base curve. Returns the number added.
  std::size_t merge(const SimplificationState& other);

 private:
  void rebuild();
  Curve base_;
  std::vector<std::size_t> selected_;
  std::vector<EdgeTraversal> edges_;
};

/// Greedy forward scan: every edge is extended while its weight stays within mu2.
SimplificationState initial_simplification(const Curve& c, const SquaredDistance& mu2);

/// Bounding box diagonal of both curves over 16, squared.
SquaredDistance default_mu2(const Curve& pi, const Curve& sigma);

struct LowerBound {
  ExactRoot value;   // max of the weighted bound and the global bound
  ExactRoot weighted;
  ExactRoot global;  // M - A - B with the same rational offsets
  std::size_t solves = 0;
  bool converged = false;
};

/// Lower bound on the Frechet distance of the base curves from the simplified pair,
/// whose exact distance is sqrt(m2).
LowerBound weighted_lower_bound(const SimplificationState& sp, const SimplificationState& ss,
                                const SquaredDistance& m2, unsigned slack_bits = 64,
                                Engine engine = Engine::Dijkstra, std::size_t max_solves = 64);

/// Largest squared leash along the traversal of the base curves obtained by composing
/// the greedy edge traversals with the witness path of `simplified`, and its attribution
/// to base vertices. Leashes between vertex events go to the vertices last passed.
struct ComposedTraversal {
  std::vector<SquaredDistance> g2_pi;
  std::vector<SquaredDistance> g2_sigma;
  SquaredDistance ub2;
};

ComposedTraversal composed_traversal(const SimplificationState& sp, const SimplificationState& ss,
                                     const FrechetResult& simplified);

/// Per simplification vertex: slack = lb - sqrt(g2), with g2 the largest value among the
/// base vertices from this vertex up to the next one.
struct SlackMap {
  std::vector<SquaredDistance> g2;
  std::vector<bool> negative;
};

SlackMap compute_slack(const SimplificationState& s, const std::vector<SquaredDistance>& base_g2,
                       const ExactRoot& lb);

/// Each vertex takes the smallest slack within `radius` vertices on either side.
SlackMap propagate_slack(const SlackMap& s, const ExactRoot& lb, std::size_t radius = 2);

/// Non-original edges with an endpoint of negative slack.
std::vector<std::size_t> marked_edges(const SimplificationState& s, const SlackMap& slack);

struct LosslessOptions {
  Engine engine = Engine::Dijkstra;
  std::optional<SquaredDistance> mu2;
  unsigned slack_bits = 64;
  std::size_t propagation_radius = 2;
};

struct LosslessRound {
  std::size_t pi_size = 0;
  std::size_t sigma_size = 0;
  SquaredDistance simplified2;
  ExactRoot lower;
  SquaredDistance upper2;
  std::size_t added = 0;
  bool fallback = false;
};

struct LosslessResult {
  SquaredDistance value2;
  std::size_t solves = 0;
  std::size_t vertices_inserted = 0;
  std::vector<LosslessRound> rounds;

  ExactRoot distance() const { return value2.root(); }
};

/// Exact Frechet distance computed on simplifications that are refined until the lower
/// and upper bounds from the base curves meet.
LosslessResult lossless_compute(const Curve& pi, const Curve& sigma, const LosslessOptions& options = {});

}  // namespace frechet
