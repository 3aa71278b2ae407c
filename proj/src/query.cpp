#include "mcroute/query.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <memory>
#include <queue>

#include "mcroute/dijkstra.hpp"
#include "mcroute/error.hpp"

namespace mcroute {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

constexpr std::uint32_t kNone = 0xffffffffu;

} // namespace

PairTable::PairTable(const PartitionIndex &index) : dims_(index.dims) {
  const auto &layout = index.layout;
  const std::size_t n = layout.vertex_count();
  first_.assign(n + 1, 0);
  std::uint32_t point_count = 0;
  for (VertexId v = 0; v < n; ++v) {
    first_[v] = static_cast<std::uint32_t>(pairs_.size());
    if (!layout.is_entry[v]) continue;
    const EntrySkylines &tree = index.from_entry(v);
    const auto &exits = layout.exits[layout.subset_of(v)];
    for (std::size_t x = 0; x < exits.size(); ++x) {
      if (exits[x] == v || tree.exit_labels[x].empty()) continue;
      const ContourSkylineSet &contour = tree.contours[x];
      Pair pair{exits[x], static_cast<std::uint32_t>(x), point_count,
                static_cast<std::uint32_t>(contour.groups.size())};
      point_count += 1 + pair.group_count;
      if (contour.groups.empty()) {
        points_.insert(points_.end(), dims_, 0.0);
      } else {
        points_.insert(points_.end(), contour.floor.values().begin(), contour.floor.values().end());
        for (const auto &group : contour.groups)
          points_.insert(points_.end(), group.contour_point.values().begin(), group.contour_point.values().end());
      }
      pairs_.push_back(pair);
    }
  }
  first_[n] = static_cast<std::uint32_t>(pairs_.size());
}

ShrunkGraph::ShrunkGraph(const MultiCostGraph &g, const PartitionIndex &index, VertexId s, VertexId e,
                         const PairTable *pairs)
    : g_(g), index_(index), pairs_(pairs), s_(s), e_(e) {
  if (s >= g.vertex_count() || e >= g.vertex_count())
    throw GraphError("query vertex outside the graph");
  ps_ = index.layout.subset_of(s);
  pe_ = index.layout.subset_of(e);
}

std::vector<VertexId> ShrunkGraph::vertices() const {
  std::vector<VertexId> out;
  const auto &layout = index_.layout;
  for (VertexId v = 0; v < layout.vertex_count(); ++v)
    if (contains(v)) out.push_back(v);
  return out;
}

std::size_t ShrunkGraph::edge_count(std::span<const char> alive) const {
  std::size_t count = 0;
  auto ok = [&](VertexId v) { return alive.empty() || alive[v]; };
  for (VertexId v : vertices()) {
    if (!ok(v)) continue;
    for_each_plain(v, [&](VertexId w, EdgeId) { count += ok(w); });
    for_each_pair(v, [&](VertexId j, const EntrySkylines &, const std::vector<std::uint32_t> &labels,
                         const ContourSkylineSet &) {
      if (ok(j)) count += labels.size();
    });
  }
  return count;
}

std::vector<ShrunkGraph::Edge> ShrunkGraph::materialize() const {
  std::vector<Edge> out;
  for (VertexId v : vertices()) {
    for_each_plain(v, [&](VertexId w, EdgeId edge) { out.push_back(Edge{v, w, g_.cost(edge), {v, w}}); });
    for_each_pair(v, [&](VertexId j, const EntrySkylines &tree, const std::vector<std::uint32_t> &labels,
                         const ContourSkylineSet &) {
      for (auto l : labels) out.push_back(Edge{v, j, tree.label_cost(l), tree.label_path(l)});
    });
  }
  return out;
}

namespace {

// Shortest path of the shrunk graph under edge weight lambda . w(edge); a
// unit lambda gives the shortest path over one dimension. lambda . h is a
// consistent heuristic because every component of h is an exact distance.
// Returns the walk in the original graph, empty when e is unreachable.
std::vector<VertexId> shrunk_witness(const ShrunkGraph &shrunk, std::span<const double> lambda,
                                     std::span<const CostVector> h) {
  const auto &g = shrunk.graph();
  const std::size_t n = g.vertex_count(), d = g.dims();
  const VertexId s = shrunk.source(), e = shrunk.target();
  auto weigh = [&](const double *w) {
    double sum = 0.0;
    for (std::size_t x = 0; x < d; ++x)
      if (lambda[x] != 0.0) sum += lambda[x] * w[x];
    return sum;
  };
  std::vector<double> dist(n, kInfinity);
  std::vector<VertexId> prev(n, kNoVertex);
  std::vector<std::uint32_t> via(n, kNone);
  std::vector<char> done(n, 0);
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, DistanceAfter> heap;
  dist[s] = 0.0;
  heap.emplace(weigh(h[s].values().data()), s);
  auto relax = [&](VertexId from, VertexId to, double w, std::uint32_t label) {
    if (h[to].all_infinite()) return;
    const double nd = dist[from] + w;
    if (nd < dist[to]) {
      dist[to] = nd;
      prev[to] = from;
      via[to] = label;
      heap.emplace(nd + weigh(h[to].values().data()), to);
    }
  };
  while (!heap.empty()) {
    const VertexId v = heap.top().second;
    heap.pop();
    if (done[v]) continue;
    done[v] = 1;
    if (v == e) break;
    shrunk.for_each_plain(v, [&](VertexId w, EdgeId edge) { relax(v, w, weigh(g.cost(edge).values().data()), kNone); });
    shrunk.for_each_pair(v, [&](VertexId j, const EntrySkylines &tree, const std::vector<std::uint32_t> &labels,
                                const ContourSkylineSet &) {
      std::uint32_t best = labels.front();
      double best_weight = kInfinity;
      for (auto l : labels) {
        const double w = weigh(tree.label_cost_data(l));
        if (w < best_weight) {
          best_weight = w;
          best = l;
        }
      }
      relax(v, j, best_weight, best);
    });
  }
  if (!done[e]) return {};
  std::vector<std::vector<VertexId>> pieces;
  for (VertexId v = e; v != s; v = prev[v]) {
    if (via[v] == kNone)
      pieces.push_back({v});
    else {
      auto path = shrunk.index().from_entry(prev[v]).label_path(via[v]);
      pieces.emplace_back(path.begin() + 1, path.end());
    }
  }
  std::vector<VertexId> walk{s};
  for (auto it = pieces.rbegin(); it != pieces.rend(); ++it) walk.insert(walk.end(), it->begin(), it->end());
  return walk;
}

// Forward-difference gradient of f at c, scaled to a largest component of
// 1. Empty when some component is not positive and finite.
std::vector<double> score_gradient(const ScoreFunction &f, const CostVector &c) {
  const std::size_t d = c.dims();
  std::vector<double> out(d);
  const double base = f(c);
  double largest = 0.0;
  for (std::size_t x = 0; x < d; ++x) {
    CostVector step = c;
    const double delta = std::max(1e-3, 1e-6 * std::abs(c[x]));
    step[x] += delta;
    out[x] = (f(step) - base) / delta;
    if (!(out[x] > 0.0) || !std::isfinite(out[x])) return {};
    largest = std::max(largest, out[x]);
  }
  for (double &v : out) v /= largest;
  return out;
}

} // namespace

FilterResult vertex_filter(const ShrunkGraph &shrunk, const LbopEngine &lbop, const ScoreFunction &f, bool apply,
                           std::size_t gradient_rounds) {
  const auto &g = shrunk.graph();
  const std::size_t n = g.vertex_count(), d = g.dims();
  const VertexId s = shrunk.source(), e = shrunk.target();
  FilterResult out;
  out.alive.assign(n, 0);
  out.to_target.assign(n, CostVector::infinite(d));
  const auto verts = shrunk.vertices();
  out.shrunk_vertices = verts.size();

  const auto to_e = lbop.to_target(verts, e);
  for (std::size_t i = 0; i < verts.size(); ++i) out.to_target[verts[i]] = to_e[i];
  if (out.to_target[s].all_infinite()) {
    out.removed = verts.size();
    return out;
  }
  out.reachable = true;

  Path best_walk;
  auto consider = [&](std::span<const double> lambda) -> const Path * {
    auto walk = shrunk_witness(shrunk, lambda, out.to_target);
    if (walk.empty()) return nullptr;
    Path p = make_path(g, std::move(walk));
    const double score = f(p.cost);
    if (score < out.tau) {
      out.tau = score;
      best_walk = std::move(p);
      return &best_walk;
    }
    return nullptr;
  };
  for (std::size_t x = 0; x < d; ++x) {
    std::vector<double> unit(d, 0.0);
    unit[x] = 1.0;
    consider(unit);
  }
  if (best_walk.empty()) throw Error("lower bounds report a route the shrunk graph does not contain");
  // Scalarized searches along the gradient of f, first at Φ_{s,e}, then at
  // the cost of each improving path.
  CostVector at = out.to_target[s];
  for (std::size_t round = 0; round < gradient_rounds; ++round) {
    const auto lambda = score_gradient(f, at);
    if (lambda.empty()) break;
    const Path *better = consider(lambda);
    if (!better) break;
    at = better->cost;
  }
  out.seed = remove_cycles(g, best_walk);

  const auto from_s = lbop.from_source(s, verts);
  // Real-valued costs compare with a little slack so rounding never drops a
  // vertex of the optimum.
  const double slack = g.integral() ? 0.0 : 1e-9 * std::max(1.0, std::abs(out.tau));
  for (std::size_t i = 0; i < verts.size(); ++i) {
    const VertexId v = verts[i];
    const bool keep = !apply || v == s || v == e || !(out.tau + slack < f(from_s[i] + to_e[i]));
    out.alive[v] = keep;
    out.removed += !keep;
  }
  return out;
}

namespace {

struct Node {
  CostVector acc;
  VertexId v = kNoVertex;
  std::uint32_t parent = kNone;
  std::uint32_t depth = 0;
  std::uint32_t label = kNone; // skyline label in the parent's entry tree; kNone for an original edge
  std::uint32_t group = kNone; // pending pair of a virtual node
  bool dead = false;
};

struct HeapItem {
  double bound;
  std::uint32_t depth;
  VertexId v;
  std::uint32_t id;
};

struct HeapAfter {
  bool operator()(const HeapItem &a, const HeapItem &b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    if (a.depth != b.depth) return a.depth > b.depth;
    if (a.v != b.v) return a.v > b.v;
    return a.id > b.id;
  }
};

class BranchAndBound {
public:
  BranchAndBound(const MultiCostGraph &g, const ShrunkGraph *shrunk, VertexId s, VertexId e, const ScoreFunction &f,
                 std::span<const CostVector> h, std::span<const char> alive, const QueryOptions &options)
      : g_(g), shrunk_(shrunk), s_(s), e_(e), f_(f), h_(h), alive_(alive), options_(options),
        labels_(options.dominance ? g.vertex_count() : 0) {
    if (shrunk_) {
      table_ = shrunk_->pair_table();
      if (!table_) {
        own_table_ = std::make_unique<PairTable>(shrunk_->index());
        table_ = own_table_.get();
      }
    }
  }

  QueryResult run(const Path &seed) {
    const auto start = Clock::now();
    if (!seed.empty()) best_score_ = f_(seed.cost);
    push(CostVector::zero(g_.dims()), s_, kNone, kNone);

    std::size_t pops = 0;
    while (!heap_.empty()) {
      const HeapItem top = heap_.top();
      if (top.bound >= best_score_) break;
      heap_.pop();
      if (options_.time_limit_seconds > 0 && (++pops & 1023) == 0 &&
          seconds_since(start) > options_.time_limit_seconds) {
        result_.stats.timed_out = true;
        break;
      }
      const std::uint32_t id = top.id;
      if (nodes_[id].group != kNone) {
        open_virtual(id);
        continue;
      }
      if (nodes_[id].dead || nodes_[id].v == e_) continue;
      expand(id);
    }

    if (best_node_ != kNone) {
      result_.path = remove_cycles(g_, make_path(g_, expand_path(best_node_)));
    } else if (!seed.empty()) {
      result_.path = seed;
    }
    if (!result_.path.empty()) {
      result_.found = true;
      result_.cost = result_.path.cost;
      result_.score = f_(result_.cost);
    }
    result_.stats.seconds = seconds_since(start);
    return std::move(result_);
  }

private:
  double bound_of(const CostVector &c, VertexId v) const { return f_(c + h_[v]); }

  // With d == 2 each set is a staircase: first cost ascending, second
  // strictly descending.
  bool dominated_at(VertexId v, const CostVector &c) const { return dominated_at(v, c.values().data(), c.dims()); }

  bool dominated_at(VertexId v, const double *c, std::size_t d) const {
    const auto &set = labels_[v];
    const double *cost = set.costs.data();
    if (d == 2) {
      const std::size_t i = staircase_upper(set, c[0]);
      return i > 0 && cost[2 * (i - 1) + 1] <= c[1];
    }
    for (std::size_t i = 0; i < set.ids.size(); ++i, cost += d) {
      std::size_t x = 0;
      while (x < d && cost[x] <= c[x]) ++x;
      if (x == d) return true;
    }
    return false;
  }

  struct LabelSet {
    std::vector<std::uint32_t> ids;
    std::vector<double> costs; // d values per label
  };

  // First position whose first cost exceeds x.
  static std::size_t staircase_upper(const LabelSet &set, double x) {
    std::size_t lo = 0, hi = set.ids.size();
    while (lo < hi) {
      const std::size_t mid = (lo + hi) / 2;
      if (set.costs[2 * mid] <= x) lo = mid + 1;
      else hi = mid;
    }
    return lo;
  }

  // Drops (and marks dead) every label at v strictly dominated by c, then
  // adds c. c itself must not be dominated.
  void insert_label(VertexId v, const CostVector &c, std::uint32_t id) {
    auto &set = labels_[v];
    const std::size_t d = c.dims();
    if (d == 2) {
      std::size_t lo = 0, hi = set.ids.size();
      while (lo < hi) {
        const std::size_t mid = (lo + hi) / 2;
        if (set.costs[2 * mid] < c[0]) lo = mid + 1;
        else hi = mid;
      }
      std::size_t end = lo;
      while (end < set.ids.size() && set.costs[2 * end + 1] >= c[1]) nodes_[set.ids[end++]].dead = true;
      if (end == lo) {
        set.ids.insert(set.ids.begin() + lo, id);
        set.costs.insert(set.costs.begin() + 2 * lo, {c[0], c[1]});
      } else {
        set.ids[lo] = id;
        set.costs[2 * lo] = c[0];
        set.costs[2 * lo + 1] = c[1];
        set.ids.erase(set.ids.begin() + lo + 1, set.ids.begin() + end);
        set.costs.erase(set.costs.begin() + 2 * (lo + 1), set.costs.begin() + 2 * end);
      }
      return;
    }
    std::size_t keep = 0;
    for (std::size_t i = 0; i < set.ids.size(); ++i) {
      const double *cost = set.costs.data() + i * d;
      if (dominates_unchecked(c, CostVector(std::span<const double>(cost, d)))) {
        nodes_[set.ids[i]].dead = true;
        continue;
      }
      if (keep != i) {
        set.ids[keep] = set.ids[i];
        std::copy_n(cost, d, set.costs.data() + keep * d);
      }
      ++keep;
    }
    set.ids.resize(keep);
    set.costs.resize(keep * d);
    set.ids.push_back(id);
    set.costs.insert(set.costs.end(), c.values().begin(), c.values().end());
  }

  bool on_path(std::uint32_t id, VertexId w) const {
    for (; id != kNone; id = nodes_[id].parent)
      if (nodes_[id].v == w) return true;
    return false;
  }

  void push(const CostVector &c, VertexId w, std::uint32_t parent, std::uint32_t label) {
    auto &stats = result_.stats;
    if (!alive_[w]) return;
    if (!options_.dominance && on_path(parent, w)) return;
    if (h_[w].all_infinite()) {
      ++stats.pruned_unreachable;
      return;
    }
    const double bound = bound_of(c, w);
    if (options_.tau_pruning && bound >= best_score_) {
      ++stats.pruned_tau;
      return;
    }
    if (options_.dominance) {
      if (dominated_at(w, c)) {
        ++stats.pruned_dominance;
        return;
      }
    }
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    const std::uint32_t depth = parent == kNone ? 0 : nodes_[parent].depth + 1;
    nodes_.push_back(Node{c, w, parent, depth, label, kNone, false});
    if (options_.dominance) insert_label(w, c, id);
    ++stats.nodes_pushed;
    if (w == e_) {
      const double score = f_(c);
      if (score < best_score_) {
        best_score_ = score;
        best_node_ = id;
      }
      return; // never expanded
    }
    heap_.push({bound, depth, w, id});
  }

  void expand(std::uint32_t id) {
    ++result_.stats.nodes_expanded;
    const VertexId v = nodes_[id].v;
    const CostVector acc = nodes_[id].acc;
    if (!shrunk_) {
      for (EdgeId edge : g_.out_edges(v)) push(acc + g_.cost(edge), g_.target(edge), id, kNone);
      return;
    }
    shrunk_->for_each_plain(v, [&](VertexId w, EdgeId edge) { push(acc + g_.cost(edge), w, id, kNone); });
    const auto &layout = shrunk_->index().layout;
    if (shrunk_->terminal(layout.subset_of(v)) || !layout.is_entry[v]) return;
    const EntrySkylines &tree = shrunk_->index().from_entry(v);
    for (const auto &pair : table_->pairs_of(v)) {
      if (!alive_[pair.exit]) continue;
      if (!options_.contour || pair.group_count == 0) {
        for (auto l : tree.exit_labels[pair.exit_pos]) push(acc + tree.label_cost(l), pair.exit, id, l);
        continue;
      }
      push_pair(id, tree, pair);
    }
  }

  // One heap entry stands for all contour groups of a pair that survive,
  // keyed by the smallest group bound. Popping it opens that group and
  // re-queues the entry under the next bound. The floor is tried first and
  // bounds the whole pair at once.
  void push_pair(std::uint32_t parent, const EntrySkylines &tree, const PairTable::Pair &pair) {
    auto &stats = result_.stats;
    const VertexId j = pair.exit;
    stats.virtual_children += pair.group_count;
    if (h_[j].all_infinite()) {
      stats.pruned_contour += pair.group_count;
      return;
    }
    const std::size_t d = g_.dims();
    const double *acc = nodes_[parent].acc.values().data();
    const double *to_e = h_[j].values().data();
    double base[kMaxDims], c[kMaxDims];
    for (std::size_t x = 0; x < d; ++x) base[x] = acc[x] + to_e[x];
    // +inf when a child at acc + point can be discarded.
    auto bound_at = [&](const double *point) {
      for (std::size_t x = 0; x < d; ++x) c[x] = base[x] + point[x];
      const double bound = f_.evaluate(c);
      if (options_.tau_pruning && bound >= best_score_) return kInfinity;
      if (options_.dominance) {
        for (std::size_t x = 0; x < d; ++x) c[x] = acc[x] + point[x];
        if (dominated_at(j, c, d)) return kInfinity;
      }
      return bound;
    };
    const double *point = table_->points(pair);
    if (bound_at(point) == kInfinity) {
      stats.pruned_contour += pair.group_count;
      return;
    }
    const auto begin = static_cast<std::uint32_t>(order_.size());
    for (std::uint32_t gi = 0; gi < pair.group_count; ++gi) {
      point += d;
      const double bound = bound_at(point);
      if (bound == kInfinity) {
        ++stats.pruned_contour;
        continue;
      }
      order_.push_back({bound, gi});
    }
    const auto end = static_cast<std::uint32_t>(order_.size());
    if (begin == end) return;
    std::sort(order_.begin() + begin, order_.end(), [](const auto &a, const auto &b) {
      return a.first < b.first || (a.first == b.first && a.second < b.second);
    });
    const auto pending = static_cast<std::uint32_t>(pairs_.size());
    pairs_.push_back(PendingPair{&tree, &pair, begin, end});
    const auto id = static_cast<std::uint32_t>(nodes_.size());
    const std::uint32_t depth = nodes_[parent].depth + 1;
    nodes_.push_back(Node{{}, j, parent, depth, kNone, pending, false});
    heap_.push({order_[begin].first, depth, j, id});
  }

  // Opens the next group of a pending pair that is not dominated; the ones
  // skipped stay dominated for good, as labels are only ever replaced by
  // labels that dominate them.
  void open_virtual(std::uint32_t id) {
    const Node &node = nodes_[id];
    const VertexId j = node.v;
    const std::uint32_t parent_id = node.parent, depth = node.depth;
    PendingPair &pair = pairs_[node.group];
    if (nodes_[parent_id].dead) return;
    const CostVector acc = nodes_[parent_id].acc;
    const EntrySkylines &tree = *pair.tree;
    const auto &groups = tree.contours[pair.pair->exit_pos].groups;
    const ContourGroup *group = nullptr;
    while (pair.next < pair.end) {
      const ContourGroup &candidate = groups[order_[pair.next++].second];
      if (!options_.dominance || !dominated_at(j, acc + candidate.contour_point)) {
        group = &candidate;
        break;
      }
      ++result_.stats.pruned_contour;
    }
    if (!group) return;
    if (pair.next < pair.end && order_[pair.next].first < best_score_)
      heap_.push({order_[pair.next].first, depth, j, id});
    const auto &labels = tree.exit_labels[pair.pair->exit_pos];
    for (auto m : group->members) push(acc + tree.label_cost(labels[m]), j, parent_id, labels[m]);
  }

  std::vector<VertexId> expand_path(std::uint32_t id) const {
    std::vector<std::uint32_t> chain;
    for (; id != kNone; id = nodes_[id].parent) chain.push_back(id);
    std::reverse(chain.begin(), chain.end());
    std::vector<VertexId> walk{nodes_[chain.front()].v};
    for (std::size_t i = 1; i < chain.size(); ++i) {
      const Node &node = nodes_[chain[i]];
      if (node.label == kNone) {
        walk.push_back(node.v);
      } else {
        const auto piece = shrunk_->index().from_entry(nodes_[node.parent].v).label_path(node.label);
        walk.insert(walk.end(), piece.begin() + 1, piece.end());
      }
    }
    return walk;
  }

  const MultiCostGraph &g_;
  const ShrunkGraph *shrunk_;
  VertexId s_, e_;
  const ScoreFunction &f_;
  std::span<const CostVector> h_;
  std::span<const char> alive_;
  const QueryOptions &options_;
  const PairTable *table_ = nullptr;
  std::unique_ptr<PairTable> own_table_;

  struct PendingPair {
    const EntrySkylines *tree;
    const PairTable::Pair *pair;
    std::uint32_t next, end; // range of order_ not yet opened
  };

  std::vector<Node> nodes_;
  std::vector<LabelSet> labels_;
  std::vector<PendingPair> pairs_;
  std::vector<std::pair<double, std::uint32_t>> order_; // (bound, group) per pending pair
  std::priority_queue<HeapItem, std::vector<HeapItem>, HeapAfter> heap_;
  double best_score_ = kInfinity;
  std::uint32_t best_node_ = kNone;
  QueryResult result_;
};

} // namespace

QueryResult branch_and_bound(const MultiCostGraph &g, const ShrunkGraph *shrunk, VertexId s, VertexId e,
                             const ScoreFunction &f, std::span<const CostVector> to_target,
                             std::span<const char> alive, const Path &seed, const QueryOptions &options) {
  if (s == e) {
    QueryResult r;
    r.found = true;
    r.path = Path{{s}, CostVector::zero(g.dims())};
    r.cost = r.path.cost;
    r.score = f(r.cost);
    return r;
  }
  return BranchAndBound(g, shrunk, s, e, f, to_target, alive, options).run(seed);
}

QueryResult scalarized_shortest_path(const MultiCostGraph &g, VertexId s, VertexId e, const ScoreFunction &f) {
  const auto start = Clock::now();
  const std::size_t n = g.vertex_count();
  QueryResult result;
  result.stats.linear_fast_path = true;
  std::vector<double> dist(n, kInfinity);
  std::vector<VertexId> prev(n, kNoVertex);
  std::vector<char> done(n, 0);
  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, DistanceAfter> heap;
  dist[s] = 0.0;
  heap.emplace(0.0, s);
  while (!heap.empty()) {
    const VertexId v = heap.top().second;
    heap.pop();
    if (done[v]) continue;
    done[v] = 1;
    ++result.stats.nodes_expanded;
    if (v == e) break;
    for (EdgeId edge : g.out_edges(v)) {
      const VertexId w = g.target(edge);
      const double nd = dist[v] + f(g.cost(edge));
      if (nd < dist[w]) {
        dist[w] = nd;
        prev[w] = v;
        heap.emplace(nd, w);
      }
    }
  }
  if (done[e]) {
    std::vector<VertexId> walk;
    for (VertexId v = e; v != kNoVertex; v = prev[v]) walk.push_back(v);
    std::reverse(walk.begin(), walk.end());
    result.path = make_path(g, std::move(walk));
    result.found = true;
    result.cost = result.path.cost;
    result.score = f(result.cost);
  }
  result.stats.seconds = seconds_since(start);
  return result;
}

QueryEngine::QueryEngine(const MultiCostGraph &g, const PartitionIndex &index)
    : g_(g), index_(index), lbop_(g, index.layout, index.inter, index.inner_lbop), pairs_(index) {
  if (index.vertex_count != g.vertex_count() || index.dims != g.dims())
    throw IndexFormatError("index does not match the graph");
}

QueryResult QueryEngine::query(VertexId s, VertexId e, const ScoreFunction &f, const QueryOptions &options) const {
  const auto start = Clock::now();
  if (s >= g_.vertex_count() || e >= g_.vertex_count())
    throw GraphError("query vertex outside the graph (n = " + std::to_string(g_.vertex_count()) + ")");
  if (f.dims() != g_.dims())
    throw ScoreFunctionError("score function takes " + std::to_string(f.dims()) + " costs, graph has " +
                             std::to_string(g_.dims()));
  if (s == e) return branch_and_bound(g_, nullptr, s, e, f, {}, {}, {}, options);
  if (f.linear() && !options.force_bb) return scalarized_shortest_path(g_, s, e, f);

  const ShrunkGraph shrunk(g_, index_, s, e, &pairs_);
  const FilterResult filter = vertex_filter(shrunk, lbop_, f, options.filtering, options.gradient_rounds);
  const double filter_seconds = seconds_since(start);
  QueryResult result;
  if (filter.reachable)
    result = branch_and_bound(g_, &shrunk, s, e, f, filter.to_target, filter.alive,
                              options.tau_pruning ? filter.seed : Path{}, options);
  auto &stats = result.stats;
  stats.tau = filter.tau;
  stats.shrunk_vertices = filter.shrunk_vertices;
  stats.filtered_vertices = filter.removed;
  stats.filter_seconds = filter_seconds;
  if (options.collect_graph_stats) {
    stats.shrunk_edges = shrunk.edge_count();
    stats.filtered_edges = shrunk.edge_count(filter.alive);
  }
  stats.seconds = seconds_since(start);
  return result;
}

} // namespace mcroute
