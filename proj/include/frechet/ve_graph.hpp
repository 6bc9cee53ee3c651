#pragma once

#include "frechet/exact_numbers.hpp"
#include "frechet/geometry.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

namespace frechet {

/// Coordinate on one axis of the parameter space: vertex index plus offset into the
/// following edge, t in [0,1).
struct GridCoord {
  std::int64_t index = 0;
  IntFraction t;

  friend bool operator==(const GridCoord&, const GridCoord&) = default;
  friend std::strong_ordering operator<=>(const GridCoord& a, const GridCoord& b) {
    if (auto c = a.index <=> b.index; c != 0) return c;
    return a.t <=> b.t;
  }
  IntFraction value() const { return IntFraction(index) + t; }
};

enum class NodeKind : std::uint8_t { Corner, HEddy, VEddy };

/// Corner(i,j) sits at (i,j). HEddy(i,j) is the eddy of sigma vertex j on pi edge i,
/// located at (i+t, j). VEddy(i,j) is the eddy of pi vertex i on sigma edge j, at (i, j+t).
struct GridNode {
  NodeKind kind;
  std::uint32_t i;
  std::uint32_t j;
  friend bool operator==(const GridNode&, const GridNode&) = default;
};

using NodeId = std::uint32_t;
inline constexpr NodeId kNoNode = 0xffffffffu;

struct VEPath {
  std::vector<NodeId> nodes;
  NodeId bottleneck_node = kNoNode;
  SquaredDistance bottleneck2;  // unweighted graphs only
};

/// Additive per-edge offsets for the weighted lower bound. A node located in the interior
/// of an edge of either curve is lowered by that edge's offset.
struct EdgeOffsets {
  std::vector<IntFraction> pi_edge;      // size n-1
  std::vector<bool> pi_vertex_interior;  // size n: vertex lies inside a weighted edge
  std::vector<IntFraction> sigma_edge;   // size m-1
  std::vector<bool> sigma_vertex_interior;
};

/// Implicit directed vertex-weighted graph over grid corners and eddys of a curve pair.
/// Weights are computed when the graph is built as double approximations; the exact
/// rational value is recomputed on demand whenever the approximation cannot decide.
class VEGraph {
 public:
  VEGraph(const Curve& pi, const Curve& sigma);
  /// Weighted variant: node value = sqrt(d2) - offsets. Coincident nodes are not merged.
  VEGraph(const Curve& pi, const Curve& sigma, EdgeOffsets offsets);

  std::size_t n() const { return n_; }
  std::size_t m() const { return m_; }
  const Curve& pi() const { return *pi_; }
  const Curve& sigma() const { return *sigma_; }
  bool weighted() const { return offsets_.has_value(); }

  std::size_t id_count() const { return total_; }
  /// Number of distinct nodes once coincident eddys are merged into corners.
  std::size_t distinct_node_count() const;
  std::size_t eddy_count(NodeKind kind) const;

  NodeId corner(std::size_t i, std::size_t j) const { return static_cast<NodeId>(i * m_ + j); }
  NodeId heddy(std::size_t i, std::size_t j) const { return static_cast<NodeId>(h0_ + i * m_ + j); }
  NodeId veddy(std::size_t i, std::size_t j) const { return static_cast<NodeId>(v0_ + i * (m_ - 1) + j); }
  NodeId source() const { return corner(0, 0); }
  NodeId sink() const { return corner(n_ - 1, m_ - 1); }

  GridNode describe(NodeId id) const;
  /// Identity after merging an eddy that coincides with a corner (unweighted only).
  NodeId canonical(NodeId id) const;

  GridCoord x_of(NodeId id) const;
  GridCoord y_of(NodeId id) const;
  Ordering compare_x(NodeId a, NodeId b) const;
  Ordering compare_y(NodeId a, NodeId b) const;

  SquaredDistance weight2(NodeId id) const;
  /// Node value: sqrt(weight2) for unweighted graphs, sqrt(weight2) - offsets otherwise.
  ExactRoot value(NodeId id) const;
  Ordering compare_values(NodeId a, NodeId b) const;
  double approx_weight(NodeId id) const { return approx_[id]; }

  struct Adjacency {
    std::array<NodeId, 48> node;
    std::array<bool, 48> monotone;
    std::size_t size = 0;
  };
  /// Edges leaving canonical node `id`; targets are canonical and distinct.
  void out_edges(NodeId id, Adjacency& out) const;
  /// Edges entering canonical node `id`.
  void in_edges(NodeId id, Adjacency& out) const;
  bool is_monotone_step(NodeId from, NodeId to) const;

  using Slots = std::array<NodeId, 8>;  // c00 c10 c01 c11 hb ht vl vr
  /// Canonical nodes of cell (ci, cj).
  Slots cell_slots(std::size_t ci, std::size_t cj) const;
  /// Offset into the current edge: 0 for corners, clamped projection for eddys.
  IntFraction eddy_t(NodeId id) const;

 private:
  void build();
  template <class F>
  void for_each_cell(NodeId id, F&& f) const;
  IntFraction offset_of(NodeId id) const;
  std::uint8_t tclass(NodeId id) const { return id < h0_ ? 0 : tclass_[id - h0_]; }

  const Curve* pi_;
  const Curve* sigma_;
  std::size_t n_, m_, h0_, v0_, total_;
  std::vector<double> approx_;        // weight2 (unweighted) or value (weighted)
  std::vector<double> magnitude_;     // error scale of approx_
  std::vector<std::uint8_t> exact_;   // approx_ is exact
  std::vector<double> t_approx_;      // per eddy
  std::vector<std::uint8_t> tclass_;  // per eddy: 0 interior, 1 at t=0, 2 at t=1
  std::optional<EdgeOffsets> offsets_;
};

/// Bottleneck path from source to sink with a binary-heap Dijkstra.
VEPath min_cost_path_dijkstra(const VEGraph& g);
/// Same optimum computed by a left-to-right scan over the columns.
VEPath min_cost_path_sweepline(const VEGraph& g);

/// True when a path from source to sink using only monotone edges and nodes whose value is
/// at most `bound` exists.
bool monotone_path_exists(const VEGraph& g, NodeId bound);
bool monotone_path_exists(const VEGraph& g, const SquaredDistance& bound);
/// A witness for monotone_path_exists(g, bound).
std::optional<VEPath> find_monotone_path(const VEGraph& g, NodeId bound);

struct PathMonotonicityReport {
  struct Run {
    std::size_t line;  // column (pi edge) or row (sigma edge) index
    NodeId entry;
    NodeId exit;
  };
  bool monotone = true;
  std::vector<Run> bad_columns;
  std::vector<Run> bad_rows;
};

PathMonotonicityReport monotonicity_report(const VEGraph& g, const VEPath& p);

/// Squared max leash of the greedy monotone morph of p.
SquaredDistance interpolated_ve_distance(const VEGraph& g, const VEPath& p);

/// Structural VE-respecting check: endpoints and per-row/column connectivity.
bool is_ve_respecting(const VEGraph& g, const VEPath& p);

}  // namespace frechet
