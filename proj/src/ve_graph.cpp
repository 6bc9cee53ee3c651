#include "frechet/ve_graph.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>
#include <stdexcept>

namespace frechet {

namespace {

constexpr double kRelTol = 1e-11;
constexpr std::int64_t kFastLimit = std::int64_t(1) << 40;
constexpr double kExactDoubleLimit = 9007199254740992.0;  // 2^53

struct FastCoords {
  std::vector<std::int64_t> x, y;
  std::vector<std::uint8_t> ok;

  explicit FastCoords(const Curve& c) : x(c.size()), y(c.size()), ok(c.size(), 0) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      const Point& p = c[i];
      if (!p.x.is_integer() || !p.y.is_integer()) continue;
      if (boost::multiprecision::abs(p.x.num()) >= kFastLimit ||
          boost::multiprecision::abs(p.y.num()) >= kFastLimit)
        continue;
      x[i] = p.x.num().convert_to<std::int64_t>();
      y[i] = p.y.num().convert_to<std::int64_t>();
      ok[i] = 1;
    }
  }
};

struct Eddy {
  std::uint8_t tclass;
  double t;
  double d2;
  bool exact;
};

Eddy int_eddy(std::int64_t ax, std::int64_t ay, std::int64_t bx, std::int64_t by, std::int64_t px,
              std::int64_t py) {
  using i128 = __int128;
  const std::int64_t dx = bx - ax, dy = by - ay, ux = px - ax, uy = py - ay;
  const i128 dot = i128(ux) * dx + i128(uy) * dy;
  const i128 len2 = i128(dx) * dx + i128(dy) * dy;
  auto corner = [](std::int64_t ex, std::int64_t ey, std::uint8_t cls) {
    const i128 d = i128(ex) * ex + i128(ey) * ey;
    const double v = static_cast<double>(d);
    return Eddy{cls, cls == 1 ? 0.0 : 1.0, v, v < kExactDoubleLimit};
  };
  if (dot <= 0) return corner(ux, uy, 1);
  if (dot >= len2) return corner(px - bx, py - by, 2);
  const i128 cross = i128(ux) * dy - i128(uy) * dx;
  const double c = static_cast<double>(cross);
  return Eddy{0, static_cast<double>(dot) / static_cast<double>(len2), c * c / static_cast<double>(len2),
              cross == 0};
}

Eddy exact_eddy(const Point& a, const Point& b, const Point& p) {
  const SegmentFrame f(a, b);
  const IntFraction t = f.projection(p);
  if (t.sign() <= 0) return {1, 0.0, squared_distance(a, p).to_double(), false};
  if (t >= IntFraction(1)) return {2, 1.0, squared_distance(b, p).to_double(), false};
  return {0, t.to_double(), f.line_distance2(p).to_double(), false};
}

// Slot order: c00 c10 c01 c11 hb ht vl vr.
constexpr std::array<std::array<int, 8>, 8> kOut = {{
    {1, 2, 3, 4, 5, 6, 7, -1},
    {3, 7, -1},
    {3, 5, -1},
    {-1},
    {1, 3, 7, 5, -1},
    {3, -1},
    {2, 3, 5, 7, -1},
    {3, -1},
}};
constexpr std::array<std::array<int, 8>, 8> kIn = {{
    {-1},
    {0, 4, -1},
    {0, 6, -1},
    {0, 1, 2, 4, 5, 6, 7, -1},
    {0, -1},
    {0, 2, 4, 6, -1},
    {0, -1},
    {0, 1, 4, 6, -1},
}};

void push_unique(VEGraph::Adjacency& adj, NodeId v, bool mono) {
  for (std::size_t k = 0; k < adj.size; ++k)
    if (adj.node[k] == v) return;
  adj.node[adj.size] = v;
  adj.monotone[adj.size] = mono;
  ++adj.size;
}

}  // namespace

VEGraph::VEGraph(const Curve& pi, const Curve& sigma) : pi_(&pi), sigma_(&sigma) { build(); }

VEGraph::VEGraph(const Curve& pi, const Curve& sigma, EdgeOffsets offsets)
    : pi_(&pi), sigma_(&sigma), offsets_(std::move(offsets)) {
  build();
}

void VEGraph::build() {
  n_ = pi_->size();
  m_ = sigma_->size();
  if (n_ < 2 || m_ < 2) throw std::invalid_argument("VEGraph: curves need at least two vertices");
  h0_ = n_ * m_;
  v0_ = h0_ + (n_ - 1) * m_;
  total_ = v0_ + n_ * (m_ - 1);
  if (total_ >= kNoNode) throw std::length_error("VEGraph: too many nodes");
  if (offsets_ && (offsets_->pi_edge.size() != n_ - 1 || offsets_->sigma_edge.size() != m_ - 1 ||
                   offsets_->pi_vertex_interior.size() != n_ || offsets_->sigma_vertex_interior.size() != m_))
    throw std::invalid_argument("VEGraph: offset sizes do not match curves");

  approx_.assign(total_, 0.0);
  exact_.assign(total_, 0);
  t_approx_.assign(total_ - h0_, 0.0);
  tclass_.assign(total_ - h0_, 0);
  const FastCoords fp(*pi_), fs(*sigma_);

  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < m_; ++j) {
      const NodeId id = corner(i, j);
      if (fp.ok[i] && fs.ok[j]) {
        const __int128 dx = fp.x[i] - fs.x[j], dy = fp.y[i] - fs.y[j];
        const double v = static_cast<double>(dx * dx + dy * dy);
        approx_[id] = v;
        exact_[id] = v < kExactDoubleLimit;
      } else {
        approx_[id] = squared_distance((*pi_)[i], (*sigma_)[j]).to_double();
      }
    }
  }
  auto store = [&](NodeId id, const Eddy& e) {
    approx_[id] = e.d2;
    exact_[id] = e.exact;
    t_approx_[id - h0_] = e.t;
    tclass_[id - h0_] = e.tclass;
  };
  for (std::size_t i = 0; i + 1 < n_; ++i) {
    for (std::size_t j = 0; j < m_; ++j) {
      if (fp.ok[i] && fp.ok[i + 1] && fs.ok[j])
        store(heddy(i, j), int_eddy(fp.x[i], fp.y[i], fp.x[i + 1], fp.y[i + 1], fs.x[j], fs.y[j]));
      else
        store(heddy(i, j), exact_eddy((*pi_)[i], (*pi_)[i + 1], (*sigma_)[j]));
    }
  }
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j + 1 < m_; ++j) {
      if (fs.ok[j] && fs.ok[j + 1] && fp.ok[i])
        store(veddy(i, j), int_eddy(fs.x[j], fs.y[j], fs.x[j + 1], fs.y[j + 1], fp.x[i], fp.y[i]));
      else
        store(veddy(i, j), exact_eddy((*sigma_)[j], (*sigma_)[j + 1], (*pi_)[i]));
    }
  }

  if (offsets_) {
    magnitude_.assign(total_, 0.0);
    std::vector<double> pe(n_ - 1), se(m_ - 1);
    for (std::size_t i = 0; i + 1 < n_; ++i) pe[i] = offsets_->pi_edge[i].to_double();
    for (std::size_t j = 0; j + 1 < m_; ++j) se[j] = offsets_->sigma_edge[j].to_double();
    for (NodeId id = 0; id < total_; ++id) {
      const GridNode d = describe(id);
      double off = 0.0;
      if (d.kind == NodeKind::HEddy) {
        off += pe[d.i];
        if (offsets_->sigma_vertex_interior[d.j]) off += se[d.j - 1];
      } else if (d.kind == NodeKind::VEddy) {
        off += se[d.j];
        if (offsets_->pi_vertex_interior[d.i]) off += pe[d.i - 1];
      } else {
        if (offsets_->pi_vertex_interior[d.i]) off += pe[d.i - 1];
        if (offsets_->sigma_vertex_interior[d.j]) off += se[d.j - 1];
      }
      const double r = std::sqrt(approx_[id]);
      approx_[id] = r - off;
      magnitude_[id] = r + off;
      exact_[id] = 0;
    }
  }
}

std::size_t VEGraph::distinct_node_count() const {
  if (weighted()) return total_;
  return h0_ + static_cast<std::size_t>(std::count(tclass_.begin(), tclass_.end(), 0));
}

std::size_t VEGraph::eddy_count(NodeKind kind) const {
  switch (kind) {
    case NodeKind::Corner: return h0_;
    case NodeKind::HEddy: return v0_ - h0_;
    case NodeKind::VEddy: return total_ - v0_;
  }
  return 0;
}

GridNode VEGraph::describe(NodeId id) const {
  if (id < h0_) return {NodeKind::Corner, static_cast<std::uint32_t>(id / m_), static_cast<std::uint32_t>(id % m_)};
  if (id < v0_) {
    const std::size_t k = id - h0_;
    return {NodeKind::HEddy, static_cast<std::uint32_t>(k / m_), static_cast<std::uint32_t>(k % m_)};
  }
  const std::size_t k = id - v0_;
  return {NodeKind::VEddy, static_cast<std::uint32_t>(k / (m_ - 1)), static_cast<std::uint32_t>(k % (m_ - 1))};
}

NodeId VEGraph::canonical(NodeId id) const {
  if (id < h0_ || weighted()) return id;
  const std::uint8_t c = tclass_[id - h0_];
  if (c == 0) return id;
  const GridNode d = describe(id);
  if (d.kind == NodeKind::HEddy) return corner(d.i + (c == 2 ? 1 : 0), d.j);
  return corner(d.i, d.j + (c == 2 ? 1 : 0));
}

IntFraction VEGraph::eddy_t(NodeId id) const {
  if (id < h0_) return IntFraction(0);
  const std::uint8_t c = tclass_[id - h0_];
  if (c == 1) return IntFraction(0);
  if (c == 2) return IntFraction(1);
  const GridNode d = describe(id);
  if (d.kind == NodeKind::HEddy) return SegmentFrame((*pi_)[d.i], (*pi_)[d.i + 1]).projection((*sigma_)[d.j]);
  return SegmentFrame((*sigma_)[d.j], (*sigma_)[d.j + 1]).projection((*pi_)[d.i]);
}

GridCoord VEGraph::x_of(NodeId id) const {
  const GridNode d = describe(id);
  if (d.kind != NodeKind::HEddy) return {static_cast<std::int64_t>(d.i), IntFraction(0)};
  const std::uint8_t c = tclass_[id - h0_];
  if (c == 2) return {static_cast<std::int64_t>(d.i) + 1, IntFraction(0)};
  return {static_cast<std::int64_t>(d.i), eddy_t(id)};
}

GridCoord VEGraph::y_of(NodeId id) const {
  const GridNode d = describe(id);
  if (d.kind != NodeKind::VEddy) return {static_cast<std::int64_t>(d.j), IntFraction(0)};
  const std::uint8_t c = tclass_[id - h0_];
  if (c == 2) return {static_cast<std::int64_t>(d.j) + 1, IntFraction(0)};
  return {static_cast<std::int64_t>(d.j), eddy_t(id)};
}

namespace {

// Position along one axis as (line index, approx offset, class) for fast comparisons.
struct AxisPos {
  std::int64_t line;
  double t;
  bool interior;
};

}  // namespace

Ordering VEGraph::compare_x(NodeId a, NodeId b) const {
  auto pos = [&](NodeId id) -> AxisPos {
    const GridNode d = describe(id);
    if (d.kind != NodeKind::HEddy) return {d.i, 0.0, false};
    const std::uint8_t c = tclass_[id - h0_];
    if (c == 1) return {d.i, 0.0, false};
    if (c == 2) return {static_cast<std::int64_t>(d.i) + 1, 0.0, false};
    return {d.i, t_approx_[id - h0_], true};
  };
  const AxisPos pa = pos(a), pb = pos(b);
  if (pa.line != pb.line) return pa.line < pb.line ? Ordering::Less : Ordering::Greater;
  if (!pa.interior && !pb.interior) return Ordering::Equal;
  if (!pa.interior) return Ordering::Less;
  if (!pb.interior) return Ordering::Greater;
  if (std::abs(pa.t - pb.t) > 1e-12) return pa.t < pb.t ? Ordering::Less : Ordering::Greater;
  return compare(eddy_t(a), eddy_t(b));
}

Ordering VEGraph::compare_y(NodeId a, NodeId b) const {
  auto pos = [&](NodeId id) -> AxisPos {
    const GridNode d = describe(id);
    if (d.kind != NodeKind::VEddy) return {d.j, 0.0, false};
    const std::uint8_t c = tclass_[id - h0_];
    if (c == 1) return {d.j, 0.0, false};
    if (c == 2) return {static_cast<std::int64_t>(d.j) + 1, 0.0, false};
    return {d.j, t_approx_[id - h0_], true};
  };
  const AxisPos pa = pos(a), pb = pos(b);
  if (pa.line != pb.line) return pa.line < pb.line ? Ordering::Less : Ordering::Greater;
  if (!pa.interior && !pb.interior) return Ordering::Equal;
  if (!pa.interior) return Ordering::Less;
  if (!pb.interior) return Ordering::Greater;
  if (std::abs(pa.t - pb.t) > 1e-12) return pa.t < pb.t ? Ordering::Less : Ordering::Greater;
  return compare(eddy_t(a), eddy_t(b));
}

bool VEGraph::is_monotone_step(NodeId from, NodeId to) const {
  return compare_x(from, to) != Ordering::Greater && compare_y(from, to) != Ordering::Greater;
}

SquaredDistance VEGraph::weight2(NodeId id) const {
  const GridNode d = describe(id);
  switch (d.kind) {
    case NodeKind::Corner: return squared_distance((*pi_)[d.i], (*sigma_)[d.j]);
    case NodeKind::HEddy: return nearest_parameter_on_segment((*pi_)[d.i], (*pi_)[d.i + 1], (*sigma_)[d.j]).d2;
    case NodeKind::VEddy: return nearest_parameter_on_segment((*sigma_)[d.j], (*sigma_)[d.j + 1], (*pi_)[d.i]).d2;
  }
  return {};
}

IntFraction VEGraph::offset_of(NodeId id) const {
  if (!offsets_) return IntFraction(0);
  const GridNode d = describe(id);
  IntFraction off(0);
  if (d.kind == NodeKind::HEddy) {
    off += offsets_->pi_edge[d.i];
    if (offsets_->sigma_vertex_interior[d.j]) off += offsets_->sigma_edge[d.j - 1];
  } else if (d.kind == NodeKind::VEddy) {
    off += offsets_->sigma_edge[d.j];
    if (offsets_->pi_vertex_interior[d.i]) off += offsets_->pi_edge[d.i - 1];
  } else {
    if (offsets_->pi_vertex_interior[d.i]) off += offsets_->pi_edge[d.i - 1];
    if (offsets_->sigma_vertex_interior[d.j]) off += offsets_->sigma_edge[d.j - 1];
  }
  return off;
}

ExactRoot VEGraph::value(NodeId id) const { return ExactRoot(-offset_of(id), weight2(id).value, 1); }

Ordering VEGraph::compare_values(NodeId a, NodeId b) const {
  if (a == b) return Ordering::Equal;
  const double da = approx_[a], db = approx_[b];
  if (!weighted()) {
    if (exact_[a] && exact_[b]) return da < db ? Ordering::Less : (da > db ? Ordering::Greater : Ordering::Equal);
    if (std::abs(da - db) > kRelTol * std::max(da, db)) return da < db ? Ordering::Less : Ordering::Greater;
    return compare(weight2(a).value, weight2(b).value);
  }
  if (std::abs(da - db) > kRelTol * (magnitude_[a] + magnitude_[b]) + 1e-300)
    return da < db ? Ordering::Less : Ordering::Greater;
  return compare_root_expressions(value(a), value(b));
}

VEGraph::Slots VEGraph::cell_slots(std::size_t ci, std::size_t cj) const {
  return {corner(ci, cj),         corner(ci + 1, cj),         corner(ci, cj + 1),
          corner(ci + 1, cj + 1), canonical(heddy(ci, cj)),   canonical(heddy(ci, cj + 1)),
          canonical(veddy(ci, cj)), canonical(veddy(ci + 1, cj))};
}

template <class F>
void VEGraph::for_each_cell(NodeId id, F&& f) const {
  const GridNode d = describe(id);
  auto visit = [&](std::int64_t ci, std::int64_t cj) {
    if (ci < 0 || cj < 0 || ci + 1 >= static_cast<std::int64_t>(n_) || cj + 1 >= static_cast<std::int64_t>(m_))
      return;
    f(static_cast<std::size_t>(ci), static_cast<std::size_t>(cj));
  };
  const std::int64_t i = d.i, j = d.j;
  switch (d.kind) {
    case NodeKind::Corner:
      visit(i - 1, j - 1);
      visit(i, j - 1);
      visit(i - 1, j);
      visit(i, j);
      break;
    case NodeKind::HEddy:
      visit(i, j - 1);
      visit(i, j);
      break;
    case NodeKind::VEddy:
      visit(i - 1, j);
      visit(i, j);
      break;
  }
}

void VEGraph::out_edges(NodeId id, Adjacency& out) const {
  out.size = 0;
  for_each_cell(id, [&](std::size_t ci, std::size_t cj) {
    const Slots s = cell_slots(ci, cj);
    for (int a = 0; a < 8; ++a) {
      if (s[a] != id) continue;
      for (int b : kOut[a]) {
        if (b < 0) break;
        if (s[b] == id) continue;
        const bool special = (a == 4 && b == 5) || (a == 6 && b == 7);
        push_unique(out, s[b], special ? is_monotone_step(id, s[b]) : true);
      }
    }
  });
}

void VEGraph::in_edges(NodeId id, Adjacency& out) const {
  out.size = 0;
  for_each_cell(id, [&](std::size_t ci, std::size_t cj) {
    const Slots s = cell_slots(ci, cj);
    for (int a = 0; a < 8; ++a) {
      if (s[a] != id) continue;
      for (int b : kIn[a]) {
        if (b < 0) break;
        if (s[b] == id) continue;
        const bool special = (b == 4 && a == 5) || (b == 6 && a == 7);
        push_unique(out, s[b], special ? is_monotone_step(s[b], id) : true);
      }
    }
  });
}

}  // namespace frechet

namespace frechet {

namespace {

NodeId max_node(const VEGraph& g, NodeId a, NodeId b) {
  return g.compare_values(a, b) == Ordering::Less ? b : a;
}

// Search states are (cell, slot) pairs; moving between cells only goes right or up, so every
// path is VE-respecting by construction.
struct CellSpace {
  const VEGraph& g;
  std::size_t rows;  // cells per column

  std::size_t cells() const { return (g.n() - 1) * rows; }
  std::size_t state(std::size_t ci, std::size_t cj, int slot) const { return (ci * rows + cj) * 8 + slot; }
  std::size_t source() const { return state(0, 0, 0); }
  std::size_t sink() const { return state(g.n() - 2, rows - 1, 3); }

  // Calls f(target_state) for every successor of slot `a` in cell (ci, cj).
  template <class F>
  void successors(std::size_t ci, std::size_t cj, const VEGraph::Slots& s, int a, F&& f) const {
    for (int b = 0; b < 8; ++b)
      if (b != a && s[b] == s[a]) f(state(ci, cj, b));
    for (int b : kOut[a]) {
      if (b < 0) break;
      f(state(ci, cj, b));
    }
    if (ci + 2 < g.n()) {
      if (a == 1) f(state(ci + 1, cj, 0));
      if (a == 7) f(state(ci + 1, cj, 6));
      if (a == 3) f(state(ci + 1, cj, 2));
    }
    if (cj + 1 < rows) {
      if (a == 2) f(state(ci, cj + 1, 0));
      if (a == 5) f(state(ci, cj + 1, 4));
      if (a == 3) f(state(ci, cj + 1, 1));
    }
  }
};

VEPath collect_path(const VEGraph& g, const CellSpace& cs, const std::vector<NodeId>& best,
                    const std::vector<std::uint32_t>& pred) {
  constexpr std::uint32_t kNone = 0xffffffffu;
  VEPath p;
  const std::size_t t = cs.sink();
  if (best[t] == kNoNode) throw std::logic_error("VE graph: sink unreachable");
  for (std::size_t s = t; s != kNone; s = pred[s]) {
    const std::size_t cell = s / 8;
    const NodeId v = g.cell_slots(cell / cs.rows, cell % cs.rows)[s % 8];
    if (p.nodes.empty() || p.nodes.back() != v) p.nodes.push_back(v);
    if (p.nodes.size() > best.size()) throw std::logic_error("VE graph: predecessor cycle");
  }
  std::reverse(p.nodes.begin(), p.nodes.end());
  p.bottleneck_node = best[t];
  if (!g.weighted()) p.bottleneck2 = g.weight2(best[t]);
  return p;
}

void require_cells(const VEGraph& g) {
  if (g.n() < 2 || g.m() < 2) throw std::logic_error("VE graph: both curves need an edge");
}

}  // namespace

VEPath min_cost_path_dijkstra(const VEGraph& g) {
  require_cells(g);
  const CellSpace cs{g, g.m() - 1};
  const std::size_t total = cs.cells() * 8;
  std::vector<NodeId> best(total, kNoNode);
  std::vector<std::uint32_t> pred(total, 0xffffffffu);
  std::vector<std::uint8_t> done(total, 0);
  struct Item {
    NodeId key;
    std::size_t state;
  };
  auto worse = [&g](const Item& a, const Item& b) {
    const Ordering c = g.compare_values(a.key, b.key);
    if (c != Ordering::Equal) return c == Ordering::Greater;
    return a.state > b.state;
  };
  std::priority_queue<Item, std::vector<Item>, decltype(worse)> pq(worse);
  const std::size_t src = cs.source(), dst = cs.sink();
  best[src] = g.source();
  pq.push({g.source(), src});
  while (!pq.empty()) {
    const Item it = pq.top();
    pq.pop();
    if (done[it.state]) continue;
    done[it.state] = 1;
    if (it.state == dst) break;
    const std::size_t cell = it.state / 8, ci = cell / cs.rows, cj = cell % cs.rows;
    const int a = static_cast<int>(it.state % 8);
    const VEGraph::Slots s = g.cell_slots(ci, cj);
    cs.successors(ci, cj, s, a, [&](std::size_t v) {
      if (done[v]) return;
      const std::size_t vc = v / 8;
      const NodeId node = vc == cell ? s[v % 8] : g.cell_slots(vc / cs.rows, vc % cs.rows)[v % 8];
      const NodeId cand = max_node(g, it.key, node);
      if (best[v] == kNoNode || g.compare_values(cand, best[v]) == Ordering::Less) {
        best[v] = cand;
        pred[v] = static_cast<std::uint32_t>(it.state);
        pq.push({cand, v});
      }
    });
  }
  return collect_path(g, cs, best, pred);
}

VEPath min_cost_path_sweepline(const VEGraph& g) {
  require_cells(g);
  const CellSpace cs{g, g.m() - 1};
  const std::size_t total = cs.cells() * 8;
  std::vector<NodeId> best(total, kNoNode);
  std::vector<std::uint32_t> pred(total, 0xffffffffu);
  best[cs.source()] = g.source();
  // Topological order of the in-cell edges; aliased slots may need a second pass.
  constexpr std::array<int, 8> kOrder = {0, 4, 6, 1, 2, 5, 7, 3};
  for (std::size_t ci = 0; ci + 1 < g.n(); ++ci) {
    for (std::size_t cj = 0; cj < cs.rows; ++cj) {
      const VEGraph::Slots s = g.cell_slots(ci, cj);
      bool changed = true;
      while (changed) {
        changed = false;
        for (int a : kOrder) {
          const std::size_t u = cs.state(ci, cj, a);
          if (best[u] == kNoNode) continue;
          cs.successors(ci, cj, s, a, [&](std::size_t v) {
            const std::size_t vc = v / 8;
            const bool local = vc == ci * cs.rows + cj;
            const NodeId node = local ? s[v % 8] : g.cell_slots(vc / cs.rows, vc % cs.rows)[v % 8];
            const NodeId cand = max_node(g, best[u], node);
            if (best[v] == kNoNode || g.compare_values(cand, best[v]) == Ordering::Less) {
              best[v] = cand;
              pred[v] = static_cast<std::uint32_t>(u);
              if (local) changed = true;
            }
          });
        }
      }
    }
  }
  return collect_path(g, cs, best, pred);
}

namespace {

template <class Ok>
std::optional<std::vector<NodeId>> monotone_search(const VEGraph& g, Ok ok) {
  if (!ok(g.source())) return std::nullopt;
  std::vector<NodeId> parent(g.id_count(), kNoNode);
  std::vector<NodeId> stack{g.source()};
  parent[g.source()] = g.source();
  VEGraph::Adjacency adj;
  while (!stack.empty()) {
    const NodeId u = stack.back();
    stack.pop_back();
    if (u == g.sink()) {
      std::vector<NodeId> nodes{u};
      for (NodeId v = u; v != g.source(); v = parent[v]) nodes.push_back(parent[v]);
      std::reverse(nodes.begin(), nodes.end());
      return nodes;
    }
    g.out_edges(u, adj);
    for (std::size_t k = 0; k < adj.size; ++k) {
      const NodeId v = adj.node[k];
      if (!adj.monotone[k] || parent[v] != kNoNode || !ok(v)) continue;
      parent[v] = u;
      stack.push_back(v);
    }
  }
  return std::nullopt;
}

}  // namespace

bool monotone_path_exists(const VEGraph& g, NodeId bound) { return find_monotone_path(g, bound).has_value(); }

std::optional<VEPath> find_monotone_path(const VEGraph& g, NodeId bound) {
  auto nodes = monotone_search(g, [&](NodeId v) { return g.compare_values(v, bound) != Ordering::Greater; });
  if (!nodes) return std::nullopt;
  VEPath p;
  p.nodes = std::move(*nodes);
  p.bottleneck_node = p.nodes.front();
  for (NodeId v : p.nodes)
    if (g.compare_values(v, p.bottleneck_node) == Ordering::Greater) p.bottleneck_node = v;
  if (!g.weighted()) p.bottleneck2 = g.weight2(p.bottleneck_node);
  return p;
}

bool monotone_path_exists(const VEGraph& g, const SquaredDistance& bound) {
  return monotone_search(g, [&](NodeId v) {
    const double a = g.approx_weight(v), b = bound.to_double();
    if (std::abs(a - b) > 1e-11 * std::max(a, b)) return a < b;
    return g.weight2(v) <= bound;
  }).has_value();
}

bool is_ve_respecting(const VEGraph& g, const VEPath& p) {
  if (g.n() < 2 || g.m() < 2) return false;
  if (p.nodes.empty() || p.nodes.front() != g.source() || p.nodes.back() != g.sink()) return false;
  // Cells that can carry the step into node k, kept as the minimal frontier of a monotone
  // cell sequence.
  using Cell = std::pair<std::size_t, std::size_t>;
  std::vector<Cell> frontier{{0, 0}};
  auto has_step = [&](const Cell& c, NodeId u, NodeId v) {
    const VEGraph::Slots s = g.cell_slots(c.first, c.second);
    for (int a = 0; a < 8; ++a) {
      if (s[a] != u) continue;
      for (int b : kOut[a]) {
        if (b < 0) break;
        if (s[b] == v) return true;
      }
    }
    return false;
  };
  for (std::size_t k = 0; k + 1 < p.nodes.size(); ++k) {
    std::vector<Cell> next;
    for (std::size_t ci = 0; ci + 1 < g.n(); ++ci)
      for (std::size_t cj = 0; cj + 1 < g.m(); ++cj) {
        const Cell c{ci, cj};
        bool after = false;
        for (const Cell& f : frontier) after = after || (f.first <= ci && f.second <= cj);
        if (!after) continue;
        const VEGraph::Slots s = g.cell_slots(ci, cj);
        if (std::find(s.begin(), s.end(), p.nodes[k]) == s.end()) continue;
        if (has_step(c, p.nodes[k], p.nodes[k + 1])) next.push_back(c);
      }
    if (next.empty()) return false;
    frontier = std::move(next);
  }
  return true;
}

namespace {

bool within_band(const GridCoord& c, std::int64_t line) {
  return c.index == line || (c.index == line + 1 && c.t.is_zero());
}

template <class Coord, class Less>
std::vector<PathMonotonicityReport::Run> bad_runs(const VEPath& p, Coord coord, Less decreasing) {
  std::vector<PathMonotonicityReport::Run> runs;
  std::size_t covered = 0;
  for (std::size_t k = 0; k + 1 < p.nodes.size(); ++k) {
    if (!decreasing(p.nodes[k], p.nodes[k + 1]) || (k < covered && !runs.empty())) continue;
    const GridCoord at = coord(p.nodes[k + 1]);
    const std::int64_t line = at.index;
    std::size_t lo = k, hi = k + 1;
    while (lo > 0 && within_band(coord(p.nodes[lo - 1]), line)) --lo;
    while (hi + 1 < p.nodes.size() && within_band(coord(p.nodes[hi + 1]), line)) ++hi;
    runs.push_back({static_cast<std::size_t>(line), p.nodes[lo], p.nodes[hi]});
    covered = hi;
  }
  return runs;
}

}  // namespace

PathMonotonicityReport monotonicity_report(const VEGraph& g, const VEPath& p) {
  PathMonotonicityReport r;
  r.bad_columns = bad_runs(
      p, [&](NodeId v) { return g.x_of(v); },
      [&](NodeId a, NodeId b) { return g.compare_x(a, b) == Ordering::Greater; });
  r.bad_rows = bad_runs(
      p, [&](NodeId v) { return g.y_of(v); },
      [&](NodeId a, NodeId b) { return g.compare_y(a, b) == Ordering::Greater; });
  r.monotone = r.bad_columns.empty() && r.bad_rows.empty();
  return r;
}

namespace {

Point curve_point(const Curve& c, const IntFraction& x) {
  BigInt fl = x.num() / x.den();
  const auto last = static_cast<std::int64_t>(c.size()) - 1;
  std::int64_t i = fl.convert_to<std::int64_t>();
  if (i >= last) return c[static_cast<std::size_t>(last)];
  const IntFraction t = x - IntFraction(i);
  if (t.is_zero()) return c[static_cast<std::size_t>(i)];
  return c.point_on_edge(static_cast<std::size_t>(i), t);
}

void integer_crossings(const IntFraction& a, const IntFraction& b, std::vector<IntFraction>& taus) {
  if (a == b) return;
  const IntFraction lo = a < b ? a : b, hi = a < b ? b : a;
  BigInt k = lo.num() / lo.den() + 1;
  const IntFraction span = b - a;
  for (; IntFraction(k) < hi; ++k) taus.push_back((IntFraction(k) - a) / span);
}

}  // namespace

SquaredDistance interpolated_ve_distance(const VEGraph& g, const VEPath& p) {
  SquaredDistance best{IntFraction(0)};
  IntFraction px, py;
  bool have = false;
  auto leash = [&](const IntFraction& x, const IntFraction& y) {
    const SquaredDistance d = squared_distance(curve_point(g.pi(), x), curve_point(g.sigma(), y));
    if (d > best) best = d;
  };
  for (NodeId v : p.nodes) {
    IntFraction x = g.x_of(v).value(), y = g.y_of(v).value();
    if (have) {
      if (x < px) x = px;
      if (y < py) y = py;
      std::vector<IntFraction> taus;
      integer_crossings(px, x, taus);
      integer_crossings(py, y, taus);
      for (const IntFraction& t : taus) leash(px + t * (x - px), py + t * (y - py));
    }
    leash(x, y);
    px = std::move(x);
    py = std::move(y);
    have = true;
  }
  return best;
}

}  // namespace frechet
