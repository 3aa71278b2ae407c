#include "mcroute/oracle.hpp"

#include <algorithm>
#include <chrono>
#include <deque>
#include <map>

#include <json.hpp>

#include "mcroute/dijkstra.hpp"
#include "mcroute/error.hpp"
#include "mcroute/index.hpp"

namespace mcroute {

namespace {

std::vector<CostVector> distances_to(const MultiCostGraph &g, VertexId e) {
  const std::size_t n = g.vertex_count(), d = g.dims();
  std::vector<CostVector> out(n, CostVector::zero(d));
  for (std::size_t x = 0; x < d; ++x) {
    const auto tree = single_cost_distances(g, x, e, Direction::Backward);
    for (std::size_t v = 0; v < n; ++v) out[v][x] = tree.distance[v];
  }
  return out;
}

class SimplePathSearch {
public:
  SimplePathSearch(const MultiCostGraph &g, VertexId e, const ScoreFunction &f, const std::vector<CostVector> *bound)
      : g_(g), e_(e), f_(f), bound_(bound), on_path_(g.vertex_count(), 0) {}

  void run(VertexId s) {
    path_.push_back(s);
    on_path_[s] = 1;
    visit(s, CostVector::zero(g_.dims()));
  }

  double best_score = kInfinity;
  std::vector<VertexId> best_path;
  CostVector best_cost;

private:
  void visit(VertexId v, const CostVector &acc) {
    if (v == e_) {
      const double score = f_(acc);
      if (score < best_score || (score == best_score && best_path.empty())) {
        best_score = score;
        best_path = path_;
        best_cost = acc;
      }
      return;
    }
    for (EdgeId edge : g_.out_edges(v)) {
      const VertexId w = g_.target(edge);
      if (on_path_[w]) continue;
      const CostVector next = acc + g_.cost(edge);
      const double cut = bound_ ? f_(next + (*bound_)[w]) : f_(next);
      if (cut > best_score) continue;
      on_path_[w] = 1;
      path_.push_back(w);
      visit(w, next);
      path_.pop_back();
      on_path_[w] = 0;
    }
  }

  const MultiCostGraph &g_;
  VertexId e_;
  const ScoreFunction &f_;
  const std::vector<CostVector> *bound_;
  std::vector<char> on_path_;
  std::vector<VertexId> path_;
};

} // namespace

QueryResult oracle_optimal_path(const MultiCostGraph &g, VertexId s, VertexId e, const ScoreFunction &f,
                                const OracleOptions &options) {
  if (g.vertex_count() > options.max_vertices)
    throw Error("oracle refuses a graph with " + std::to_string(g.vertex_count()) + " vertices (limit " +
                std::to_string(options.max_vertices) + ")");
  if (s >= g.vertex_count() || e >= g.vertex_count()) throw GraphError("oracle endpoint outside the graph");
  const auto start = std::chrono::steady_clock::now();
  QueryResult result;
  std::vector<CostVector> bound;
  if (options.distance_cut) bound = distances_to(g, e);
  SimplePathSearch search(g, e, f, options.distance_cut ? &bound : nullptr);
  search.run(s);
  if (!search.best_path.empty()) {
    result.found = true;
    result.path = Path{search.best_path, search.best_cost};
    result.cost = search.best_cost;
    result.score = search.best_score;
  }
  result.stats.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  return result;
}

double oracle_multigraph_score(std::size_t vertex_count, const std::vector<OracleEdge> &edges, VertexId s,
                               VertexId e, const ScoreFunction &f) {
  const std::size_t d = f.dims();
  std::vector<std::vector<std::size_t>> out(vertex_count);
  for (std::size_t i = 0; i < edges.size(); ++i) out[edges[i].from].push_back(i);
  // Label-correcting Pareto search over walks. With non-negative costs
  // cutting a cycle never costs more, so the walk minimum equals the
  // simple-path minimum, and a monotone f attains it on the frontier.
  std::vector<std::vector<CostVector>> front(vertex_count);
  std::deque<std::pair<VertexId, CostVector>> queue;
  front[s].push_back(CostVector::zero(d));
  queue.emplace_back(s, CostVector::zero(d));
  while (!queue.empty()) {
    auto [v, acc] = queue.front();
    queue.pop_front();
    if (std::find(front[v].begin(), front[v].end(), acc) == front[v].end()) continue; // since dominated
    for (auto i : out[v]) {
      const VertexId w = edges[i].to;
      const CostVector next = acc + edges[i].cost;
      auto &labels = front[w];
      if (std::any_of(labels.begin(), labels.end(), [&](const CostVector &c) { return weakly_dominates(c, next); }))
        continue;
      std::erase_if(labels, [&](const CostVector &c) { return weakly_dominates(next, c); });
      labels.push_back(next);
      queue.emplace_back(w, next);
    }
  }
  double best = kInfinity;
  for (const auto &c : front[e]) best = std::min(best, f(c));
  return best;
}

SkylinePathSet oracle_skyline_set(const MultiCostGraph &g, VertexId s, VertexId e, std::size_t max_vertices) {
  if (g.vertex_count() > max_vertices)
    throw Error("skyline oracle refuses a graph with " + std::to_string(g.vertex_count()) + " vertices");
  SkylinePathSet result{s, e, {}};
  if (s == e) {
    result.paths.push_back(Path{{s}, CostVector::zero(g.dims())});
    return result;
  }
  // Smallest vertex sequence per distinct cost; DFS order is lexicographic.
  std::map<std::vector<double>, std::vector<VertexId>> by_cost;
  std::vector<char> on_path(g.vertex_count(), 0);
  std::vector<VertexId> path{s};
  auto visit = [&](auto &self, VertexId v, const CostVector &acc) -> void {
    if (v == e) {
      by_cost.try_emplace(std::vector<double>(acc.values().begin(), acc.values().end()), path);
      return;
    }
    for (EdgeId edge : g.out_edges(v)) {
      const VertexId w = g.target(edge);
      if (on_path[w]) continue;
      on_path[w] = 1;
      path.push_back(w);
      self(self, w, acc + g.cost(edge));
      path.pop_back();
      on_path[w] = 0;
    }
  };
  on_path[s] = 1;
  visit(visit, s, CostVector::zero(g.dims()));

  std::vector<Path> all;
  for (auto &[cost, vertices] : by_cost) all.push_back(Path{vertices, CostVector(std::span<const double>(cost))});
  for (const auto &p : all) {
    bool dominated = false;
    for (const auto &q : all)
      if (dominates_unchecked(q.cost, p.cost)) {
        dominated = true;
        break;
      }
    if (!dominated) result.paths.push_back(p);
  }
  std::sort(result.paths.begin(), result.paths.end(),
            [](const Path &a, const Path &b) { return lex_less(a.cost, b.cost); });
  return result;
}

QueryResult bf_search_baseline(const MultiCostGraph &g, VertexId s, VertexId e, const ScoreFunction &f,
                               const QueryOptions &options) {
  if (s >= g.vertex_count() || e >= g.vertex_count()) throw GraphError("query vertex outside the graph");
  if (f.dims() != g.dims()) throw ScoreFunctionError("score function arity does not match the graph");
  const auto start = std::chrono::steady_clock::now();
  const std::size_t n = g.vertex_count(), d = g.dims();
  std::vector<CostVector> h(n, CostVector::zero(d));
  Path seed;
  double seed_score = kInfinity;
  for (std::size_t x = 0; x < d; ++x) {
    const auto tree = single_cost_distances(g, x, e, Direction::Backward);
    for (std::size_t v = 0; v < n; ++v) h[v][x] = tree.distance[v];
    auto vertices = tree.path_to(s, Direction::Backward);
    if (vertices.empty()) continue;
    Path p = make_path(g, std::move(vertices));
    if (f(p.cost) < seed_score) {
      seed_score = f(p.cost);
      seed = std::move(p);
    }
  }
  const double setup = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  QueryResult result;
  if (s != e && seed.empty()) {
    result.stats.seconds = setup;
    return result;
  }
  const std::vector<char> alive(n, 1);
  result = branch_and_bound(g, nullptr, s, e, f, h, alive, options.tau_pruning ? seed : Path{}, options);
  result.stats.tau = seed_score;
  result.stats.filter_seconds = setup;
  result.stats.seconds += setup;
  return result;
}

std::size_t all_pairs_skyline_bytes(const MultiCostGraph &g) {
  std::string body;
  const std::size_t n = g.vertex_count();
  for (VertexId source = 0; source < n; ++source) {
    const ParetoTree tree = pareto_search(g, source);
    EntrySkylines out;
    out.entry = source;
    out.dims = g.dims();
    out.exit_labels.resize(n);
    std::vector<std::uint32_t> remap(tree.labels.size(), ParetoTree::kNoLabel);
    std::vector<char> keep(tree.labels.size(), 0);
    for (VertexId v = 0; v < n; ++v)
      if (v != source)
        for (auto l : tree.at_vertex[v])
          for (auto a = l; a != ParetoTree::kNoLabel && !keep[a]; a = tree.labels[a].parent) keep[a] = 1;
    for (std::uint32_t l = 0; l < tree.labels.size(); ++l) {
      if (!keep[l]) continue;
      const auto &label = tree.labels[l];
      remap[l] = static_cast<std::uint32_t>(out.vertex.size());
      out.vertex.push_back(label.vertex);
      out.parent.push_back(label.parent == ParetoTree::kNoLabel ? ParetoTree::kNoLabel : remap[label.parent]);
      out.cost.insert(out.cost.end(), label.cost.values().begin(), label.cost.values().end());
    }
    for (VertexId v = 0; v < n; ++v)
      if (v != source)
        for (auto l : tree.at_vertex[v]) out.exit_labels[v].push_back(remap[l]);
    encode_entry_skylines(body, out, g.integral());
  }
  nlohmann::json header = {{"format", "mcroute-all-pairs-skyline"}, {"version", kIndexFormatVersion},
                           {"d", g.dims()}, {"n", n}, {"m", g.edge_count()}, {"graph_hash", graph_hash(g)},
                           {"integral", g.integral()}};
  // Same container as an index file: one section with its 8-byte checksum trailer.
  header["sections"].push_back({"skyline", 0, body.size() + 8});
  return 8 + 4 + 4 + 8 + header.dump().size() + body.size() + 8;
}

} // namespace mcroute
