#include "frechet/refinement.hpp"

#include "frechet/oracles.hpp"

#include <algorithm>
#include <map>
#include <queue>
#include <set>

namespace frechet {

namespace {

const IntFraction kZero(0);
const IntFraction kOne(1);

// Free interval of one row on edge AB as a function of delta2:
// [max(0, c - sqrt(q)), min(1, c + sqrt(q))] with q = (delta2 - p) / L.
// Sentinels have the constant interval [t, t].
struct RowModel {
  std::size_t index = 0;
  bool sentinel = false;
  IntFraction c;      // unclamped projection, or sentinel position
  IntFraction p;      // squared distance to the supporting line
  IntFraction spawn;  // eddy d2: first delta2 with a nonempty interval
  IntFraction eddy_t;
  Point point;
};

class ColumnModel {
 public:
  explicit ColumnModel(const ColumnInstance& in) : a_(in.a), dir_(in.b - in.a), len2_(dot(dir_, dir_)) {
    if (len2_.is_zero()) throw std::invalid_argument("refine_column: degenerate edge");
    const std::size_t k = in.rows.size();
    rows_.resize(k + 2);
    rows_[0] = sentinel(0, in.t_entry, in.entry_weight.value);
    for (std::size_t r = 1; r <= k; ++r) {
      RowModel& m = rows_[r];
      m.index = r;
      m.point = in.rows[r - 1];
      const SegmentFrame f(in.a, in.b);
      m.c = f.projection(m.point);
      m.p = f.line_distance2(m.point);
      const EdgeParameter e = nearest_parameter_on_segment(in.a, in.b, m.point);
      m.spawn = e.d2.value;
      m.eddy_t = e.t;
    }
    rows_[k + 1] = sentinel(k + 1, in.t_exit, in.exit_weight.value);
  }

  std::size_t size() const { return rows_.size(); }
  const RowModel& row(std::size_t r) const { return rows_[r]; }
  const IntFraction& len2() const { return len2_; }

  IntFraction q(const RowModel& r, const IntFraction& d) const { return (d - r.p) / len2_; }

  ExactRoot lo(std::size_t r, const IntFraction& d) const {
    const RowModel& m = rows_[r];
    if (m.sentinel) return ExactRoot(m.c);
    ExactRoot v(m.c, q(m, d), -1);
    if (compare_root_expressions(v, ExactRoot(kZero)) != Ordering::Greater) return ExactRoot(kZero);
    return v;
  }

  ExactRoot hi(std::size_t r, const IntFraction& d) const {
    const RowModel& m = rows_[r];
    if (m.sentinel) return ExactRoot(m.c);
    ExactRoot v(m.c, q(m, d), +1);
    if (compare_root_expressions(v, ExactRoot(kOne)) != Ordering::Less) return ExactRoot(kOne);
    return v;
  }

  // True if row x has the farther-right left endpoint at d, ties broken by the order just
  // after d.
  bool better(std::size_t x, std::size_t y, const IntFraction& d) const {
    const Ordering o = compare_root_expressions(lo(x, d), lo(y, d));
    if (o != Ordering::Equal) return o == Ordering::Greater;
    const RowModel &mx = rows_[x], &my = rows_[y];
    const bool zx = lo(x, d).is_rational() && lo(x, d).rational.is_zero();
    if (zx) return x < y;
    if (mx.sentinel != my.sentinel) return mx.sentinel;
    if (mx.p != my.p) return mx.p < my.p;
    return x < y;
  }

  // First delta2 > d at which row o overtakes current winner w.
  std::optional<IntFraction> flip(std::size_t w, std::size_t o, const IntFraction& d) const {
    const RowModel &mw = rows_[w], &mo = rows_[o];
    if (mw.sentinel) return std::nullopt;
    std::optional<IntFraction> best;
    auto offer = [&](const IntFraction& v) {
      if (v > d && (!best || v < *best)) best = v;
    };
    if (mo.sentinel) {
      if (mw.c > mo.c) {
        const IntFraction gap = mw.c - mo.c;
        offer(mw.p + len2_ * gap * gap);
      }
      return best;
    }
    if (o < w && mw.c.sign() > 0) offer(mw.p + len2_ * mw.c * mw.c);
    if (mo.p < mw.p) {
      const IntFraction u = mw.c - mo.c;
      if (u.sign() < 0) {
        const IntFraction v = (mo.p - mw.p) / len2_;
        const IntFraction sw = (u + v / u) / IntFraction(2);
        const IntFraction so = (v / u - u) / IntFraction(2);
        if (sw.sign() >= 0 && so.sign() >= 0 && (mw.c - sw).sign() > 0) offer(mw.p + len2_ * sw * sw);
      }
    }
    return best;
  }

  struct Join {
    IntFraction delta2;
    IntFraction t;
  };

  // Lowest delta2 >= d at which hi(n) reaches lo(w).
  Join join(std::size_t w, std::size_t n, const IntFraction& d) const {
    const RowModel &mw = rows_[w], &mn = rows_[n];
    Join j;
    if (mn.sentinel) {
      // hi(n) = t_n is constant; wait for lo(w) to come down to it.
      const IntFraction gap = mw.sentinel ? kZero : mw.c - mn.c;
      j.delta2 = mw.sentinel || gap.sign() <= 0 ? d : mw.p + len2_ * gap * gap;
      j.t = mn.c;
    } else if (mw.sentinel) {
      const IntFraction gap = mw.c - mn.c;
      j.delta2 = gap.sign() <= 0 ? d : mn.p + len2_ * gap * gap;
      j.t = mw.c;
    } else {
      const Point uw = mw.point - a_, un = mn.point - a_;
      const IntFraction denom = IntFraction(2) * dot(mw.point - mn.point, dir_);
      if (denom.is_zero()) {
        j.delta2 = d;
        j.t = mn.c;
      } else {
        const IntFraction t = (dot(uw, uw) - dot(un, un)) / denom;
        if (t.sign() >= 0) {
          j.t = t;
          const Point at{a_.x + t * dir_.x, a_.y + t * dir_.y};
          j.delta2 = squared_distance(at, mn.point).value;
        } else {
          j.t = kZero;
          j.delta2 = mw.p + len2_ * mw.c * mw.c;
        }
      }
    }
    if (j.delta2 < d) j.delta2 = d;
    if (j.delta2 < mn.spawn) j.delta2 = mn.spawn;
    return j;
  }

  // Interior point of the edge equidistant from rows i and j; a sentinel contributes its position.
  std::optional<IntFraction> equidistant(std::size_t i, std::size_t j) const {
    const RowModel &mi = rows_[i], &mj = rows_[j];
    std::optional<IntFraction> t;
    if (mi.sentinel || mj.sentinel) {
      t = mi.sentinel ? mi.c : mj.c;
    } else {
      const IntFraction denom = IntFraction(2) * dot(mi.point - mj.point, dir_);
      if (denom.is_zero()) return std::nullopt;
      const Point ui = mi.point - a_, uj = mj.point - a_;
      t = (dot(ui, ui) - dot(uj, uj)) / denom;
    }
    if (t->sign() <= 0 || !(*t < kOne)) return std::nullopt;
    return t;
  }

  IntFraction distance2(std::size_t r, const IntFraction& t) const {
    const RowModel& m = rows_[r];
    const IntFraction u = t - m.c;
    return m.p + len2_ * u * u;
  }

  bool reaches(std::size_t w, std::size_t n, const IntFraction& d) const {
    return compare_root_expressions(hi(n, d), lo(w, d)) != Ordering::Less;
  }

 private:
  static RowModel sentinel(std::size_t index, const IntFraction& t, const IntFraction& weight) {
    RowModel m;
    m.index = index;
    m.sentinel = true;
    m.c = t;
    m.spawn = weight;
    m.eddy_t = t;
    return m;
  }

  Point a_;
  Point dir_;
  IntFraction len2_;
  std::vector<RowModel> rows_;
};

// Tournament over the bucket: every internal node keeps the winner (farthest-right left
// endpoint) and the loser of its two children, plus a certificate version for its pending
// undertake event.
class LoserTree {
 public:
  explicit LoserTree(std::size_t leaves) {
    width_ = 1;
    while (width_ < leaves) width_ *= 2;
    win_.assign(2 * width_, kNone);
    lose_.assign(2 * width_, kNone);
    version_.assign(width_, 0);
  }

  static constexpr std::size_t kNone = static_cast<std::size_t>(-1);

  std::size_t winner() const { return win_[1]; }
  std::size_t loser(std::size_t node) const { return lose_[node]; }
  std::size_t node_winner(std::size_t node) const { return win_[node]; }
  std::uint64_t version(std::size_t node) const { return version_[node]; }
  std::uint64_t bump(std::size_t node) { return ++version_[node]; }
  std::size_t leaf(std::size_t r) const { return width_ + r; }

  template <class Better>
  void set_leaf(std::size_t r, Better&& better, std::vector<std::size_t>& touched) {
    std::size_t x = leaf(r);
    win_[x] = r;
    replay(x / 2, better, touched);
  }

  template <class Better>
  void replay(std::size_t x, Better&& better, std::vector<std::size_t>& touched) {
    for (; x >= 1; x /= 2) {
      const std::size_t a = win_[2 * x], b = win_[2 * x + 1];
      if (a == kNone || b == kNone) {
        win_[x] = a == kNone ? b : a;
        lose_[x] = kNone;
      } else if (better(a, b)) {
        win_[x] = a;
        lose_[x] = b;
      } else {
        win_[x] = b;
        lose_[x] = a;
      }
      touched.push_back(x);
    }
  }

 private:
  std::size_t width_;
  std::vector<std::size_t> win_, lose_;
  std::vector<std::uint64_t> version_;
};

struct QueuedEvent {
  IntFraction delta2;
  EventKind kind;
  std::size_t a;
  std::size_t b;
  std::uint64_t version;
  std::uint64_t seq;
};

struct LaterEvent {
  bool operator()(const QueuedEvent& x, const QueuedEvent& y) const {
    if (auto c = x.delta2 <=> y.delta2; c != 0) return c > 0;
    if (x.kind != y.kind) return static_cast<int>(x.kind) > static_cast<int>(y.kind);
    return x.seq > y.seq;
  }
};

std::optional<IntFraction> as_rational(const ExactRoot& x) {
  if (x.is_rational()) return x.rational;
  const BigInt &n = x.radicand.num(), &d = x.radicand.den();
  const BigInt rn = isqrt_floor(n), rd = isqrt_floor(d);
  if (rn * rn != n || rd * rd != d) return std::nullopt;
  return x.rational + IntFraction(rn * x.sign, rd);
}

bool less_eq(const ExactRoot& a, const ExactRoot& b) { return compare_root_expressions(a, b) != Ordering::Greater; }

const ExactRoot& max_root(const ExactRoot& a, const ExactRoot& b) { return less_eq(a, b) ? b : a; }
const ExactRoot& min_root(const ExactRoot& a, const ExactRoot& b) { return less_eq(a, b) ? a : b; }

// Minimum vertex placement at a fixed threshold. Each row is crossed at its eddy, at an edge
// endpoint, or at an inserted vertex inside its free interval, and crossings never move left.
// Rows sharing one inserted vertex form a consecutive group.
class Placement {
 public:
  Placement(const ColumnModel& model, const IntFraction& delta) : model_(model), delta_(delta) {
    const std::size_t size = model.size();
    lo_.reserve(size);
    hi_.reserve(size);
    for (std::size_t r = 0; r < size; ++r) {
      lo_.push_back(model.lo(r, delta));
      hi_.push_back(model.hi(r, delta));
    }
  }

  std::vector<EdgeParameter> solve() {
    const std::size_t last = model_.size() - 1;
    states_.assign(last + 1, {});
    states_[0].push_back({ExactRoot(model_.row(0).c), 0, Step::Start, 0, 0});
    for (std::size_t r = 1; r < last; ++r) {
      for (std::size_t k = 0; k < states_[r - 1].size(); ++k) {
        const State from = states_[r - 1][k];
        if (auto p = free_position(r, from.x)) offer(r, {ExactRoot(*p), from.cost, Step::Free, r - 1, k});
        ExactRoot low = from.x, high = hi_[r];
        for (std::size_t s = r; s < last; ++s) {
          low = max_root(low, lo_[s]);
          high = min_root(high, hi_[s]);
          if (!less_eq(low, high)) break;
          offer(s, {low, from.cost + 1, Step::Group, r - 1, k});
        }
      }
    }
    const ExactRoot exit(model_.row(last).c);
    const auto& final_states = states_[last - 1];
    std::size_t pick = final_states.size();
    for (std::size_t k = 0; k < final_states.size() && pick == final_states.size(); ++k)
      if (less_eq(final_states[k].x, exit)) pick = k;
    if (pick == final_states.size()) throw std::logic_error("refine_column: threshold admits no placement");
    return reconstruct(last - 1, pick);
  }

 private:
  enum class Step { Start, Free, Group };
  struct State {
    ExactRoot x;
    std::size_t cost;
    Step step;
    std::size_t from_row;
    std::size_t from_state;
  };

  std::optional<IntFraction> free_position(std::size_t r, const ExactRoot& x) const {
    std::optional<IntFraction> best;
    for (const IntFraction& p : {model_.row(r).eddy_t, kZero, kOne}) {
      const ExactRoot e(p);
      if (!less_eq(x, e) || !less_eq(lo_[r], e) || !less_eq(e, hi_[r])) continue;
      if (!best || p < *best) best = p;
    }
    return best;
  }

  // Keeps, per row, states with increasing cost and strictly decreasing position.
  void offer(std::size_t row, State s) {
    auto& v = states_[row];
    for (const State& o : v)
      if (o.cost <= s.cost && less_eq(o.x, s.x)) return;
    v.erase(std::remove_if(v.begin(), v.end(),
                           [&](const State& o) { return o.cost >= s.cost && less_eq(s.x, o.x); }),
            v.end());
    v.insert(std::find_if(v.begin(), v.end(), [&](const State& o) { return o.cost > s.cost; }), std::move(s));
  }

  struct Group {
    std::size_t first;
    std::size_t last;
  };

  std::vector<EdgeParameter> reconstruct(std::size_t row, std::size_t k) {
    std::vector<Group> groups;
    std::vector<ExactRoot> position(row + 2);
    for (;;) {
      const State& s = states_[row][k];
      if (s.step == Step::Start) break;
      if (s.step == Step::Group) groups.push_back({s.from_row + 1, row});
      for (std::size_t r = s.from_row + 1; r <= row; ++r) position[r] = s.x;
      const std::size_t next_row = s.from_row, next_k = s.from_state;
      row = next_row;
      k = next_k;
    }
    std::reverse(groups.begin(), groups.end());
    const std::size_t end = position.size() - 1;
    position[0] = ExactRoot(model_.row(0).c);
    position[end] = ExactRoot(model_.row(model_.size() - 1).c);
    std::vector<EdgeParameter> out;
    for (const Group& g : groups) {
      ExactRoot low = position[g.first - 1], high = position[g.last + 1];
      for (std::size_t r = g.first; r <= g.last; ++r) {
        low = max_root(low, lo_[r]);
        high = min_root(high, hi_[r]);
      }
      const IntFraction t = pick_rational(g, low, high);
      for (std::size_t r = g.first; r <= g.last; ++r) position[r] = ExactRoot(t);
      IntFraction d2 = kZero;
      for (std::size_t r = g.first; r <= g.last; ++r) d2 = std::max(d2, model_.distance2(r, t));
      out.push_back({t, {d2}});
    }
    return out;
  }

  IntFraction pick_rational(const Group& g, const ExactRoot& low, const ExactRoot& high) const {
    auto inside = [&](const IntFraction& t) {
      const ExactRoot e(t);
      return less_eq(low, e) && less_eq(e, high);
    };
    std::optional<IntFraction> best;
    auto consider = [&](const IntFraction& t) {
      if (inside(t) && (!best || t < *best)) best = t;
    };
    for (std::size_t j = g.first; j <= g.last; ++j)
      for (std::size_t i = 0; i < model_.size(); ++i)
        if (i != j)
          if (auto t = model_.equidistant(i, j)) consider(*t);
    if (best) return *best;
    for (std::size_t r = g.first; r <= g.last; ++r) consider(model_.row(r).eddy_t);
    if (best) return *best;
    if (auto t = as_rational(low)) return *t;
    for (unsigned slack = 8; slack <= 4096; slack *= 2) {
      const IntFraction t = rational_upper_bound(low, slack).value;
      if (inside(t)) return t;
    }
    throw std::logic_error("refine_column: no rational vertex in a degenerate range");
  }

  const ColumnModel& model_;
  IntFraction delta_;
  std::vector<ExactRoot> lo_, hi_;
  std::vector<std::vector<State>> states_;
};

void finish(ColumnResult& res, const ColumnModel& model, const IntFraction& delta) {
  res.final_delta2 = {delta};
  res.vertices = Placement(model, delta).solve();
}

}  // namespace

ColumnResult refine_column(const ColumnInstance& instance, bool keep_log) {
  const ColumnModel model(instance);
  const std::size_t last = model.size() - 1;
  ColumnResult res;
  IntFraction delta = model.row(0).spawn;
  LoserTree tree(last);
  std::priority_queue<QueuedEvent, std::vector<QueuedEvent>, LaterEvent> heap;
  std::uint64_t seq = 0, join_version = 0;
  bool join_pending = false;
  std::size_t next = 1;
  std::vector<std::size_t> touched;

  auto log = [&](EventKind kind, std::size_t a, std::size_t b) {
    if (keep_log) res.log.push_back({kind, {delta}, a, b});
  };
  auto better = [&](std::size_t x, std::size_t y) { return model.better(x, y, delta); };
  auto certify = [&]() {
    for (std::size_t x : touched) {
      const std::uint64_t v = tree.bump(x);
      const std::size_t w = tree.node_winner(x), o = tree.loser(x);
      if (o == LoserTree::kNone) continue;
      if (auto f = model.flip(w, o, delta)) heap.push({*f, EventKind::Undertake, x, o, v, seq++});
    }
    touched.clear();
  };
  auto push_spawn = [&](std::size_t r) {
    heap.push({std::max(delta, model.row(r).spawn), EventKind::Spawn, r, r, 0, seq++});
  };
  auto schedule_join = [&]() {
    const std::size_t w = tree.winner();
    const auto j = model.join(w, next, delta);
    heap.push({j.delta2, EventKind::Join, w, next, ++join_version, seq++});
    join_pending = true;
  };
  auto merge = [&](std::size_t r) {
    join_pending = false;
    if (r == last) return;
    tree.set_leaf(r, better, touched);
    certify();
    next = r + 1;
    push_spawn(next);
  };

  tree.set_leaf(0, better, touched);
  certify();
  push_spawn(next);
  while (!heap.empty()) {
    const QueuedEvent e = heap.top();
    heap.pop();
    if (e.kind == EventKind::Undertake && e.version != tree.version(e.a)) continue;
    if (e.kind == EventKind::Join && (e.version != join_version || !join_pending)) continue;
    if (e.kind == EventKind::Spawn && e.a != next) continue;
    if (delta < e.delta2) delta = e.delta2;
    switch (e.kind) {
      case EventKind::Spawn: {
        log(EventKind::Spawn, e.a, e.a);
        const std::size_t w = tree.winner();
        if (model.reaches(w, next, delta)) {
          merge(next);
          if (e.a == last) {
            finish(res, model, delta);
            return res;
          }
        } else {
          schedule_join();
        }
        break;
      }
      case EventKind::Undertake: {
        log(EventKind::Undertake, tree.node_winner(e.a), e.b);
        tree.replay(e.a, better, touched);
        certify();
        if (join_pending) schedule_join();
        break;
      }
      case EventKind::Join: {
        log(EventKind::Join, e.a, e.b);
        if (!model.reaches(e.a, e.b, delta))
          throw std::logic_error("refine_column: join event without contact");
        const std::size_t r = e.b;
        merge(r);
        if (r == last) {
          finish(res, model, delta);
          return res;
        }
        break;
      }
    }
  }
  throw std::logic_error("refine_column: event queue exhausted");
}

ColumnResult refine_column_reference(const ColumnInstance& instance) {
  const ColumnModel model(instance);
  const std::size_t last = model.size() - 1;
  ColumnResult res;
  IntFraction delta = model.row(0).spawn;
  std::size_t top = 0, next = 1;
  for (;;) {
    std::size_t w = 0;
    for (std::size_t r = 1; r <= top; ++r)
      if (model.better(r, w, delta)) w = r;
    const bool spawned = delta >= model.row(next).spawn;
    if (spawned && model.reaches(w, next, delta)) {
      if (next == last) break;
      top = next++;
      continue;
    }
    IntFraction step;
    if (!spawned) {
      step = model.row(next).spawn;
    } else {
      step = model.join(w, next, delta).delta2;
      for (std::size_t o = 0; o <= top; ++o) {
        if (o == w) continue;
        if (auto f = model.flip(w, o, delta); f && *f < step) step = *f;
      }
    }
    delta = step;
  }
  finish(res, model, delta);
  return res;
}

namespace {

IntFraction offset_in(const GridCoord& c, std::size_t line) {
  return static_cast<std::size_t>(c.index) == line ? c.t : kOne;
}

}  // namespace

std::vector<std::pair<std::size_t, ColumnInstance>> column_instances(const VEGraph& g, const VEPath& path,
                                                                     const PathMonotonicityReport& report,
                                                                     bool rows) {
  (void)path;
  std::vector<std::pair<std::size_t, ColumnInstance>> out;
  const Curve& along = rows ? g.sigma() : g.pi();
  const Curve& across = rows ? g.pi() : g.sigma();
  for (const auto& run : rows ? report.bad_rows : report.bad_columns) {
    const GridCoord ea = rows ? g.y_of(run.entry) : g.x_of(run.entry);
    const GridCoord eb = rows ? g.y_of(run.exit) : g.x_of(run.exit);
    const IntFraction ya = (rows ? g.x_of(run.entry) : g.y_of(run.entry)).value();
    const IntFraction yb = (rows ? g.x_of(run.exit) : g.y_of(run.exit)).value();
    if (yb <= ya) continue;
    ColumnInstance in;
    in.a = along[run.line];
    in.b = along[run.line + 1];
    in.t_entry = offset_in(ea, run.line);
    in.t_exit = offset_in(eb, run.line);
    in.entry_weight = g.weight2(run.entry);
    in.exit_weight = g.weight2(run.exit);
    const BigInt first = ya.num() / ya.den() + 1;
    for (BigInt j = first; IntFraction(j) < yb; ++j) in.rows.push_back(across[j.convert_to<std::size_t>()]);
    out.emplace_back(run.line, std::move(in));
  }
  return out;
}

RefineStepResult refine_step(const VEGraph& g, const VEPath& path, const PathMonotonicityReport& report) {
  RefineStepResult out;
  for (bool rows : {false, true}) {
    const Curve& along = rows ? g.sigma() : g.pi();
    std::set<std::pair<std::size_t, IntFraction>> params;
    for (const auto& [line, in] : column_instances(g, path, report, rows)) {
      const ColumnResult r = refine_column(in);
      for (const auto& v : r.vertices) params.insert({line, v.t});
    }
    out.inserted += params.size();
    Curve refined = params.empty() ? along : along.with_inserted({params.begin(), params.end()});
    (rows ? out.sigma : out.pi) = std::move(refined);
  }
  return out;
}

const char* to_string(Engine e) { return e == Engine::Dijkstra ? "dijkstra" : "sweepline"; }

std::optional<Engine> parse_engine(std::string_view s) {
  if (s == "dijkstra") return Engine::Dijkstra;
  if (s == "sweepline") return Engine::Sweepline;
  return std::nullopt;
}

VEPath solve(const VEGraph& g, Engine engine) {
  return engine == Engine::Dijkstra ? min_cost_path_dijkstra(g) : min_cost_path_sweepline(g);
}

namespace {

SquaredDistance point_curve_distance(const Point& p, const Curve& c) {
  SquaredDistance best{kZero};
  for (const Point& q : c.vertices()) best = std::max(best, squared_distance(p, q));
  return best;
}

}  // namespace

FrechetResult compute_exact_frechet(const Curve& pi, const Curve& sigma, const ExactOptions& options) {
  if (pi.size() == 0 || sigma.size() == 0) throw std::invalid_argument("compute_exact_frechet: empty curve");
  FrechetResult res;
  res.pi = pi;
  res.sigma = sigma;
  if (pi.size() == 1 || sigma.size() == 1) {
    res.value2 = pi.size() == 1 ? point_curve_distance(pi[0], sigma) : point_curve_distance(sigma[0], pi);
    return res;
  }
  const std::size_t n = pi.size(), m = sigma.size();
  const std::size_t bound = options.max_solves ? options.max_solves : std::max<std::size_t>(n * m * m + m * n * n, 4);
  while (res.solves < bound) {
    const VEGraph g(res.pi, res.sigma);
    const VEPath path = solve(g, options.engine);
    ++res.solves;
    const PathMonotonicityReport report = monotonicity_report(g, path);
    IterationTrace step{res.solves, path.bottleneck2, res.pi.size(), res.sigma.size(), 0};
    std::optional<VEPath> witness;
    if (report.monotone) witness = path;
    else witness = find_monotone_path(g, path.bottleneck_node);
    if (witness || decide_frechet(res.pi, res.sigma, path.bottleneck2)) {
      res.value2 = path.bottleneck2;
      res.path = witness ? std::move(*witness) : path;
      res.trace.push_back(step);
      return res;
    }
    RefineStepResult r = refine_step(g, path, report);
    if (r.inserted == 0) throw std::logic_error("compute_exact_frechet: refinement made no progress");
    step.inserted = r.inserted;
    res.trace.push_back(step);
    res.vertices_inserted += r.inserted;
    res.pi = std::move(r.pi);
    res.sigma = std::move(r.sigma);
  }
  throw IterationBoundExceeded("compute_exact_frechet: iteration bound exceeded");
}

}  // namespace frechet
