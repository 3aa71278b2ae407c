#ifndef MCROUTE_QUERY_HPP
#define MCROUTE_QUERY_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mcroute/cost.hpp"
#include "mcroute/graph.hpp"
#include "mcroute/index.hpp"
#include "mcroute/lbop.hpp"
#include "mcroute/score.hpp"

namespace mcroute {

/// Contour data of every skyline pair, stored flat and grouped by entry so
/// the search reads it sequentially. Per pair: the floor (componentwise
/// minimum of its contour points) followed by one point per group.
class PairTable {
public:
  explicit PairTable(const PartitionIndex &index);

  struct Pair {
    VertexId exit = kNoVertex;
    std::uint32_t exit_pos = 0;     // position among the entry's subset exits
    std::uint32_t first_point = 0;  // floor; group points follow
    std::uint32_t group_count = 0;
  };

  std::span<const Pair> pairs_of(VertexId entry) const noexcept {
    return {pairs_.data() + first_[entry], pairs_.data() + first_[entry + 1]};
  }
  const double *points(const Pair &pair) const noexcept { return points_.data() + std::size_t{pair.first_point} * dims_; }
  std::size_t dims() const noexcept { return dims_; }

private:
  std::size_t dims_ = 0;
  std::vector<std::uint32_t> first_;
  std::vector<Pair> pairs_;
  std::vector<double> points_;
};

/// Implicit view of the reduced multigraph for one query (s, e).
///
/// Vertices: every member of the terminal subsets (those of s and e) plus
/// the borders of all other subsets. Edges: original edges inside a
/// terminal subset, original edges between different subsets, and for each
/// entry i of a non-terminal subset one edge per stored skyline path to
/// every other exit j of that subset.
class ShrunkGraph {
public:
  ShrunkGraph(const MultiCostGraph &g, const PartitionIndex &index, VertexId s, VertexId e,
              const PairTable *pairs = nullptr);

  VertexId source() const noexcept { return s_; }
  VertexId target() const noexcept { return e_; }
  bool terminal(SubsetId p) const noexcept { return p == ps_ || p == pe_; }
  bool contains(VertexId v) const noexcept {
    return terminal(index_.layout.subset_of(v)) || index_.layout.is_border(v);
  }
  std::vector<VertexId> vertices() const;

  /// fn(target, edge id) for every original edge of v kept in the view.
  template <typename Fn>
  void for_each_plain(VertexId v, Fn &&fn) const {
    const auto &layout = index_.layout;
    const SubsetId p = layout.subset_of(v);
    const bool inside_ok = terminal(p);
    for (EdgeId edge : g_.out_edges(v)) {
      const VertexId w = g_.target(edge);
      const SubsetId q = layout.subset_of(w);
      if (q != p || inside_ok) fn(w, edge); // a cross edge always ends at an entry
    }
  }

  /// fn(exit, tree, labels, contour) for every non-empty skyline pair
  /// leaving v, when v is an entry of a non-terminal subset.
  template <typename Fn>
  void for_each_pair(VertexId v, Fn &&fn) const {
    const auto &layout = index_.layout;
    const SubsetId p = layout.subset_of(v);
    if (terminal(p) || !layout.is_entry[v]) return;
    const EntrySkylines &tree = index_.from_entry(v);
    const auto &exits = layout.exits[p];
    for (std::size_t x = 0; x < exits.size(); ++x) {
      if (exits[x] == v || tree.exit_labels[x].empty()) continue;
      fn(exits[x], tree, tree.exit_labels[x], tree.contours[x]);
    }
  }

  /// Multi-edges counted individually. With `alive`, only edges whose both
  /// endpoints survive.
  std::size_t edge_count(std::span<const char> alive = {}) const;

  struct Edge {
    VertexId from = kNoVertex;
    VertexId to = kNoVertex;
    CostVector cost;
    std::vector<VertexId> expansion; // vertex sequence in the original graph
  };
  std::vector<Edge> materialize() const;

  const MultiCostGraph &graph() const noexcept { return g_; }
  const PartitionIndex &index() const noexcept { return index_; }
  /// Null unless supplied at construction.
  const PairTable *pair_table() const noexcept { return pairs_; }

private:
  const MultiCostGraph &g_;
  const PartitionIndex &index_;
  const PairTable *pairs_;
  VertexId s_, e_;
  SubsetId ps_, pe_;
};

struct FilterResult {
  bool reachable = false;
  double tau = kInfinity;
  /// Best witness, expanded to the original graph with cycles removed.
  Path seed;
  /// Dense over all vertices; 1 for shrunk-graph vertices that survive.
  std::vector<char> alive;
  std::size_t shrunk_vertices = 0;
  std::size_t removed = 0;
  /// Φ_{v,e} for shrunk-graph vertices, dense over all vertices.
  std::vector<CostVector> to_target;
};

/// τ from the per-dimension shortest witnesses, then drops every vertex v
/// with τ < f(Φ_{s,v} + Φ_{v,e}). `apply = false` keeps all vertices.
/// Up to `gradient_rounds` extra scalarized searches, weighted by the
/// gradient of f, may lower τ further; 0 uses the witnesses only.
FilterResult vertex_filter(const ShrunkGraph &shrunk, const LbopEngine &lbop, const ScoreFunction &f,
                           bool apply = true, std::size_t gradient_rounds = 3);

struct QueryOptions {
  bool tau_pruning = true;
  bool dominance = true;
  bool contour = true;
  bool filtering = true;
  /// Use branch and bound even for linear score functions.
  bool force_bb = false;
  /// Scalarized searches along the gradient of f that may tighten τ.
  std::size_t gradient_rounds = 3;
  /// Count shrunk-graph edges before and after filtering.
  bool collect_graph_stats = false;
  /// 0 = none. An exceeded limit returns the best path found so far.
  double time_limit_seconds = 0.0;
};

struct QueryStats {
  std::size_t nodes_pushed = 0;
  std::size_t nodes_expanded = 0;
  std::size_t pruned_tau = 0;
  std::size_t pruned_dominance = 0;
  std::size_t pruned_unreachable = 0;
  std::size_t virtual_children = 0;
  std::size_t pruned_contour = 0;
  std::size_t shrunk_vertices = 0;
  std::size_t shrunk_edges = 0;
  std::size_t filtered_vertices = 0; // removed by filtering
  std::size_t filtered_edges = 0;    // edges left after filtering
  double tau = kInfinity;
  double filter_seconds = 0.0;
  double seconds = 0.0;
  bool linear_fast_path = false;
  bool timed_out = false;
};

struct QueryResult {
  bool found = false;
  Path path;
  CostVector cost;
  double score = kInfinity;
  QueryStats stats;
};

/// Best-first branch and bound over `shrunk` (or over `g` itself when
/// `shrunk` is null). `to_target` and `alive` are dense over all vertices;
/// `seed`, when non-empty, is the initial incumbent.
QueryResult branch_and_bound(const MultiCostGraph &g, const ShrunkGraph *shrunk, VertexId s, VertexId e,
                             const ScoreFunction &f, std::span<const CostVector> to_target,
                             std::span<const char> alive, const Path &seed, const QueryOptions &options);

/// Minimum of Σ weights·w over all paths, by Dijkstra on scalar edge weights.
QueryResult scalarized_shortest_path(const MultiCostGraph &g, VertexId s, VertexId e, const ScoreFunction &f);

/// Answers queries over one loaded index. Safe to share between threads.
class QueryEngine {
public:
  QueryEngine(const MultiCostGraph &g, const PartitionIndex &index);

  QueryResult query(VertexId s, VertexId e, const ScoreFunction &f, const QueryOptions &options = {}) const;

  ShrunkGraph shrunk_graph(VertexId s, VertexId e) const { return ShrunkGraph(g_, index_, s, e, &pairs_); }
  const LbopEngine &lbop() const noexcept { return lbop_; }

private:
  const MultiCostGraph &g_;
  const PartitionIndex &index_;
  LbopEngine lbop_;
  PairTable pairs_;
};

} // namespace mcroute

#endif // MCROUTE_QUERY_HPP
