#include "frechet/simplification.hpp"

#include "frechet/ve_graph.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace frechet {

namespace {

const IntFraction kZero(0);
const IntFraction kOne(1);

double approx_weight2(std::span<const Point> sub) {
  const double ax = sub.front().x.to_double(), ay = sub.front().y.to_double();
  const double dx = sub.back().x.to_double() - ax, dy = sub.back().y.to_double() - ay;
  const double len2 = dx * dx + dy * dy;
  double tau = 0, best = 0;
  for (const Point& p : sub) {
    const double px = p.x.to_double() - ax, py = p.y.to_double() - ay;
    const double t = len2 > 0 ? std::clamp((px * dx + py * dy) / len2, 0.0, 1.0) : 0.0;
    tau = std::max(tau, t);
    const double ex = px - tau * dx, ey = py - tau * dy;
    best = std::max(best, ex * ex + ey * ey);
  }
  return best;
}

}  // namespace

EdgeTraversal greedy_joint_traversal(std::span<const Point> sub) {
  if (sub.empty()) throw std::invalid_argument("greedy_joint_traversal: empty subcurve");
  EdgeTraversal r;
  r.weight2.value = kZero;
  const Point& a = sub.front();
  const Point d = sub.back() - a;
  const IntFraction len2 = dot(d, d);
  IntFraction tau = kZero;
  bool have_split = false;
  for (std::size_t k = 0; k < sub.size(); ++k) {
    if (!len2.is_zero()) {
      IntFraction t = dot(sub[k] - a, d) / len2;
      if (t > tau) tau = t > kOne ? kOne : std::move(t);
    }
    if (k + 1 == sub.size()) tau = kOne;
    const SquaredDistance d2 = squared_distance(sub[k], lerp(a, sub.back(), tau));
    const bool interior = k > 0 && k + 1 < sub.size();
    if (interior && (!have_split || d2 > r.weight2)) {
      r.split = k;
      have_split = true;
    }
    if (d2 > r.weight2) r.weight2 = d2;
    r.tau.push_back(tau);
  }
  return r;
}

SimplificationState::SimplificationState(const Curve& base, std::vector<std::size_t> selected)
    : base_(base), selected_(std::move(selected)) {
  rebuild();
}

void SimplificationState::rebuild() {
  std::sort(selected_.begin(), selected_.end());
  selected_.erase(std::unique(selected_.begin(), selected_.end()), selected_.end());
  if (base_.size() == 0) {
    selected_.clear();
    edges_.clear();
    return;
  }
  if (selected_.empty() || selected_.front() != 0) selected_.insert(selected_.begin(), 0);
  if (selected_.back() != base_.size() - 1) selected_.push_back(base_.size() - 1);
  // A zero-length edge is replaced by the original vertices it spans.
  std::vector<std::size_t> fixed;
  for (std::size_t e = 0; e < selected_.size(); ++e) {
    if (e > 0 && base_[selected_[e - 1]] == base_[selected_[e]])
      for (std::size_t k = selected_[e - 1] + 1; k < selected_[e]; ++k) fixed.push_back(k);
    fixed.push_back(selected_[e]);
  }
  selected_ = std::move(fixed);
  const auto& v = base_.vertices();
  edges_.clear();
  for (std::size_t e = 0; e + 1 < selected_.size(); ++e)
    edges_.push_back(greedy_joint_traversal(std::span<const Point>(v).subspan(
        selected_[e], selected_[e + 1] - selected_[e] + 1)));
}

Curve SimplificationState::curve() const {
  Curve c;
  for (std::size_t k : selected_) c.push_back(base_[k], k, false);
  return c;
}

IntFraction SimplificationState::offset(std::size_t e, unsigned slack_bits) const {
  const SquaredDistance& w = edges_[e].weight2;
  if (w.value.is_zero()) return kZero;
  return rational_upper_bound(w.root(), slack_bits).value;
}

IntFraction SimplificationState::max_offset(unsigned slack_bits) const {
  std::size_t best = edges_.size();
  for (std::size_t e = 0; e < edges_.size(); ++e)
    if (best == edges_.size() || edges_[e].weight2 > edges_[best].weight2) best = e;
  return best == edges_.size() ? kZero : offset(best, slack_bits);
}

std::size_t SimplificationState::split(const std::vector<std::size_t>& edges) {
  const std::size_t before = selected_.size();
  std::vector<std::size_t> next = selected_;
  for (std::size_t e : edges) {
    if (original(e)) continue;
    const std::size_t k = selected_[e] + edges_[e].split;
    if (base_[k] == base_[selected_[e]] || base_[k] == base_[selected_[e + 1]]) {
      for (std::size_t i = selected_[e] + 1; i < selected_[e + 1]; ++i) next.push_back(i);
    } else {
      next.push_back(k);
    }
  }
  selected_ = std::move(next);
  rebuild();
  return selected_.size() - before;
}

std::size_t SimplificationState::merge(const SimplificationState& other) {
  if (other.base_.size() != base_.size()) throw std::invalid_argument("SimplificationState::merge: base mismatch");
  const std::size_t before = selected_.size();
  selected_.insert(selected_.end(), other.selected_.begin(), other.selected_.end());
  rebuild();
  return selected_.size() - before;
}

SimplificationState initial_simplification(const Curve& c, const SquaredDistance& mu2) {
  const std::size_t n = c.size();
  std::vector<std::size_t> sel;
  if (n > 0) sel.push_back(0);
  const auto& v = c.vertices();
  const double mu = mu2.to_double();
  auto fits = [&](std::size_t i, std::size_t j) {
    if (c[i] == c[j]) return false;
    const std::span<const Point> sub = std::span<const Point>(v).subspan(i, j - i + 1);
    const double w = approx_weight2(sub);
    if (w < mu * (1 - 1e-9)) return true;
    if (w > mu * (1 + 1e-9) + 1e-300) return false;
    return greedy_joint_traversal(sub).weight2 <= mu2;
  };
  for (std::size_t i = 0; i + 1 < n;) {
    std::size_t j = i + 1;
    while (j + 1 < n && fits(i, j + 1)) ++j;
    sel.push_back(j);
    i = j;
  }
  return SimplificationState(c, std::move(sel));
}

SquaredDistance default_mu2(const Curve& pi, const Curve& sigma) {
  std::optional<IntFraction> lx, hx, ly, hy;
  for (const Curve* c : {&pi, &sigma})
    for (const Point& p : c->vertices()) {
      if (!lx || p.x < *lx) lx = p.x;
      if (!hx || p.x > *hx) hx = p.x;
      if (!ly || p.y < *ly) ly = p.y;
      if (!hy || p.y > *hy) hy = p.y;
    }
  if (!lx) return {kZero};
  const IntFraction dx = *hx - *lx, dy = *hy - *ly;
  return {(dx * dx + dy * dy) / IntFraction(256)};
}

namespace {

// Simplified edge containing each edge of a refinement of the simplified curve.
std::vector<std::size_t> parent_edges(const Curve& refined) {
  std::vector<std::size_t> out;
  std::size_t e = 0;
  for (std::size_t r = 0; r + 1 < refined.size(); ++r) {
    if (r > 0 && !refined.inserted(r)) ++e;
    out.push_back(e);
  }
  return out;
}

void fill_offsets(const Curve& refined, const std::vector<IntFraction>& base, std::vector<IntFraction>& edge,
                  std::vector<bool>& interior) {
  for (std::size_t e : parent_edges(refined)) edge.push_back(base[e]);
  for (std::size_t r = 0; r < refined.size(); ++r) interior.push_back(refined.inserted(r));
}

std::vector<IntFraction> offsets_of(const SimplificationState& s, unsigned slack_bits) {
  std::vector<IntFraction> out;
  for (std::size_t e = 0; e < s.edge_count(); ++e) out.push_back(s.offset(e, slack_bits));
  return out;
}

}  // namespace

LowerBound weighted_lower_bound(const SimplificationState& sp, const SimplificationState& ss,
                                const SquaredDistance& m2, unsigned slack_bits, Engine engine,
                                std::size_t max_solves) {
  LowerBound lb;
  lb.global = ExactRoot(-(sp.max_offset(slack_bits) + ss.max_offset(slack_bits)), m2.value, 1);
  lb.weighted = lb.global;
  lb.value = lb.global;
  Curve pr = sp.curve(), sr = ss.curve();
  if (pr.size() < 2 || sr.size() < 2) return lb;
  const std::vector<IntFraction> op = offsets_of(sp, slack_bits), os = offsets_of(ss, slack_bits);
  while (lb.solves < max_solves) {
    EdgeOffsets off;
    fill_offsets(pr, op, off.pi_edge, off.pi_vertex_interior);
    fill_offsets(sr, os, off.sigma_edge, off.sigma_vertex_interior);
    const VEGraph g(pr, sr, std::move(off));
    const VEPath path = solve(g, engine);
    ++lb.solves;
    lb.weighted = g.value(path.bottleneck_node);
    const PathMonotonicityReport report = monotonicity_report(g, path);
    if (report.monotone || monotone_path_exists(g, path.bottleneck_node)) {
      lb.converged = true;
      break;
    }
    RefineStepResult r = refine_step(g, path, report);
    if (r.inserted == 0) break;
    pr = std::move(r.pi);
    sr = std::move(r.sigma);
  }
  lb.value = lb.weighted < lb.global ? lb.global : lb.weighted;
  return lb;
}

namespace {

// Parameter along the simplified curve of every vertex of its refinement.
std::vector<IntFraction> simplified_parameters(const Curve& refined) {
  std::vector<IntFraction> out;
  std::size_t e = 0, start = 0, next = 0;
  for (std::size_t r = 0; r < refined.size(); ++r) {
    if (!refined.inserted(r)) {
      if (r > 0) ++e;
      start = r;
      next = r + 1;
      while (next < refined.size() && refined.inserted(next)) ++next;
      out.push_back(IntFraction(static_cast<std::int64_t>(e)));
      continue;
    }
    const Point d = refined[next] - refined[start];
    out.push_back(IntFraction(static_cast<std::int64_t>(e)) + dot(refined[r] - refined[start], d) / dot(d, d));
  }
  return out;
}

IntFraction map_coord(const std::vector<IntFraction>& params, const GridCoord& c) {
  const auto i = static_cast<std::size_t>(c.index);
  if (c.t.is_zero()) return params[i];
  return params[i] + c.t * (params[i + 1] - params[i]);
}

// Parameter along the simplified curve of every base vertex.
std::vector<IntFraction> base_parameters(const SimplificationState& s) {
  std::vector<IntFraction> out(s.base().size());
  const auto& sel = s.selected();
  for (std::size_t e = 0; e < s.edge_count(); ++e) {
    const EdgeTraversal& t = s.traversal(e);
    for (std::size_t k = 0; k < t.tau.size(); ++k)
      out[sel[e] + k] = IntFraction(static_cast<std::int64_t>(e)) + t.tau[k];
  }
  return out;
}

// Position on a base curve while the simplified parameter is x and vertex k was the last
// one passed.
Point base_point(const Curve& c, const std::vector<IntFraction>& par, std::size_t k, const IntFraction& x) {
  if (k + 1 >= c.size() || x <= par[k]) return c[k];
  if (x >= par[k + 1]) return c[k + 1];
  return lerp(c[k], c[k + 1], (x - par[k]) / (par[k + 1] - par[k]));
}

void crossings(const IntFraction& a, const IntFraction& b, std::vector<IntFraction>& taus) {
  if (!(a < b)) return;
  BigInt k = a.num() / a.den() + 1;
  const IntFraction len = b - a;
  for (; IntFraction(k) < b; k += 1) taus.push_back((IntFraction(k) - a) / len);
}

}  // namespace

ComposedTraversal composed_traversal(const SimplificationState& sp, const SimplificationState& ss,
                                     const FrechetResult& simplified) {
  const Curve& pi = sp.base();
  const Curve& sigma = ss.base();
  ComposedTraversal out;
  out.g2_pi.assign(pi.size(), SquaredDistance{kZero});
  out.g2_sigma.assign(sigma.size(), SquaredDistance{kZero});
  out.ub2.value = kZero;
  const VEGraph g(simplified.pi, simplified.sigma);
  const std::vector<IntFraction> rx = simplified_parameters(simplified.pi), ry = simplified_parameters(simplified.sigma);
  const std::vector<IntFraction> px = base_parameters(sp), py = base_parameters(ss);

  // Monotone polyline in the simplified parameter space.
  std::vector<std::pair<IntFraction, IntFraction>> poly;
  IntFraction ax, ay;
  for (NodeId v : simplified.path.nodes) {
    IntFraction x = g.x_of(v).value(), y = g.y_of(v).value();
    if (!poly.empty()) {
      if (x < ax) x = ax;
      if (y < ay) y = ay;
      std::vector<IntFraction> taus;
      crossings(ax, x, taus);
      crossings(ay, y, taus);
      std::sort(taus.begin(), taus.end());
      for (const IntFraction& t : taus) {
        const IntFraction qx = ax + t * (x - ax), qy = ay + t * (y - ay);
        poly.emplace_back(qx, qy);
      }
    }
    ax = x;
    ay = y;
    poly.emplace_back(x, y);
  }
  for (auto& [x, y] : poly) {
    const std::int64_t fx = BigInt(x.num() / x.den()).convert_to<std::int64_t>();
    const std::int64_t fy = BigInt(y.num() / y.den()).convert_to<std::int64_t>();
    x = map_coord(rx, {fx, x - IntFraction(fx)});
    y = map_coord(ry, {fy, y - IntFraction(fy)});
  }

  std::size_t k = 0, l = 0;
  auto note = [&](SquaredDistance d, bool to_pi, bool to_sigma) {
    if (to_pi && d > out.g2_pi[k]) out.g2_pi[k] = d;
    if (to_sigma && d > out.g2_sigma[l]) out.g2_sigma[l] = d;
    if (d > out.ub2) out.ub2 = std::move(d);
  };
  note(squared_distance(pi[0], sigma[0]), true, true);
  for (std::size_t s = 1; s < poly.size(); ++s) {
    const auto& [x0, y0] = poly[s - 1];
    const auto& [x1, y1] = poly[s];
    struct Event {
      IntFraction at;
      bool on_pi;
      std::size_t index;
    };
    std::vector<Event> events;
    for (std::size_t kk = k + 1; kk < pi.size() && px[kk] <= x1; ++kk)
      events.push_back({x1 == x0 || px[kk] <= x0 ? kZero : (px[kk] - x0) / (x1 - x0), true, kk});
    for (std::size_t ll = l + 1; ll < sigma.size() && py[ll] <= y1; ++ll)
      events.push_back({y1 == y0 || py[ll] <= y0 ? kZero : (py[ll] - y0) / (y1 - y0), false, ll});
    std::stable_sort(events.begin(), events.end(), [](const Event& a, const Event& b) {
      if (a.at != b.at) return a.at < b.at;
      return a.on_pi && !b.on_pi;
    });
    for (const Event& ev : events) {
      const IntFraction x = x0 + ev.at * (x1 - x0), y = y0 + ev.at * (y1 - y0);
      if (ev.on_pi) {
        k = ev.index;
        note(squared_distance(pi[k], base_point(sigma, py, l, y)), true, false);
      } else {
        l = ev.index;
        note(squared_distance(base_point(pi, px, k, x), sigma[l]), false, true);
      }
    }
    note(squared_distance(base_point(pi, px, k, x1), base_point(sigma, py, l, y1)), true, true);
  }
  return out;
}

SlackMap compute_slack(const SimplificationState& s, const std::vector<SquaredDistance>& base_g2,
                       const ExactRoot& lb) {
  SlackMap out;
  const auto& sel = s.selected();
  for (std::size_t v = 0; v < sel.size(); ++v) {
    const std::size_t end = v + 1 < sel.size() ? sel[v + 1] : sel[v] + 1;
    SquaredDistance g = base_g2[sel[v]];
    for (std::size_t k = sel[v] + 1; k < end; ++k)
      if (base_g2[k] > g) g = base_g2[k];
    out.negative.push_back(lb < g.root());
    out.g2.push_back(std::move(g));
  }
  return out;
}

SlackMap propagate_slack(const SlackMap& s, const ExactRoot& lb, std::size_t radius) {
  SlackMap out;
  const std::size_t n = s.g2.size();
  for (std::size_t v = 0; v < n; ++v) {
    std::size_t best = v;
    for (std::size_t u = v > radius ? v - radius : 0; u <= std::min(n - 1, v + radius); ++u)
      if (s.g2[u] > s.g2[best]) best = u;
    out.g2.push_back(s.g2[best]);
    out.negative.push_back(s.negative[best] || lb < s.g2[best].root());
  }
  return out;
}

std::vector<std::size_t> marked_edges(const SimplificationState& s, const SlackMap& slack) {
  std::vector<std::size_t> out;
  for (std::size_t e = 0; e < s.edge_count(); ++e)
    if (!s.original(e) && (slack.negative[e] || slack.negative[e + 1])) out.push_back(e);
  return out;
}

LosslessResult lossless_compute(const Curve& pi, const Curve& sigma, const LosslessOptions& options) {
  LosslessResult res;
  const ExactOptions exact{options.engine};
  if (pi.size() < 2 || sigma.size() < 2) {
    const FrechetResult r = compute_exact_frechet(pi, sigma, exact);
    res.value2 = r.value2;
    res.solves = r.solves;
    return res;
  }
  SquaredDistance mu2 = options.mu2 ? *options.mu2 : default_mu2(pi, sigma);
  SimplificationState sp = initial_simplification(pi, mu2), ss = initial_simplification(sigma, mu2);
  for (;;) {
    const FrechetResult m = compute_exact_frechet(sp.curve(), ss.curve(), exact);
    res.solves += m.solves;
    res.vertices_inserted += m.vertices_inserted;
    LosslessRound round{sp.selected().size(), ss.selected().size(), m.value2, m.value2.root(), m.value2, 0, false};
    if (sp.all_original() && ss.all_original()) {
      res.rounds.push_back(round);
      res.value2 = m.value2;
      return res;
    }
    const LowerBound lb = weighted_lower_bound(sp, ss, m.value2, options.slack_bits, options.engine);
    res.solves += lb.solves;
    const ComposedTraversal comp = composed_traversal(sp, ss, m);
    round.lower = lb.value;
    round.upper2 = comp.ub2;
    if (!(lb.value < comp.ub2.root())) {
      res.rounds.push_back(round);
      res.value2 = comp.ub2;
      return res;
    }
    if (!(ExactRoot(kZero) < lb.value) && mu2.value.sign() > 0) {
      mu2.value = mu2.value / IntFraction(4);
      round.added = sp.merge(initial_simplification(pi, mu2)) + ss.merge(initial_simplification(sigma, mu2));
      if (round.added > 0) {
        res.rounds.push_back(round);
        continue;
      }
    }
    const std::size_t r = options.propagation_radius;
    const SlackMap slp = propagate_slack(compute_slack(sp, comp.g2_pi, lb.value), lb.value, r);
    const SlackMap sls = propagate_slack(compute_slack(ss, comp.g2_sigma, lb.value), lb.value, r);
    round.added = sp.split(marked_edges(sp, slp)) + ss.split(marked_edges(ss, sls));
    if (round.added == 0) {
      round.fallback = true;
      std::vector<std::size_t> all_p(sp.edge_count()), all_s(ss.edge_count());
      for (std::size_t e = 0; e < all_p.size(); ++e) all_p[e] = e;
      for (std::size_t e = 0; e < all_s.size(); ++e) all_s[e] = e;
      round.added = sp.split(all_p) + ss.split(all_s);
    }
    res.rounds.push_back(round);
  }
}

}  // namespace frechet
