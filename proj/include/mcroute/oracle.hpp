#ifndef MCROUTE_ORACLE_HPP
#define MCROUTE_ORACLE_HPP

#include <cstddef>
#include <vector>

#include "mcroute/cost.hpp"
#include "mcroute/graph.hpp"
#include "mcroute/query.hpp"
#include "mcroute/score.hpp"
#include "mcroute/skyline.hpp"

namespace mcroute {

struct OracleOptions {
  /// Refuse graphs larger than this (Error).
  std::size_t max_vertices = 25;
  /// Also cut a prefix when f(prefix + exact remaining per-dimension
  /// distance) exceeds the best score. Off = plain prefix cut only.
  bool distance_cut = true;
};

/// Exhaustive DFS over all simple s-e paths in ascending neighbour order.
/// A prefix is cut once its own score (or its bound) exceeds the best, which
/// is sound for monotone f and non-negative costs. Ties go to the
/// lexicographically smallest vertex sequence.
QueryResult oracle_optimal_path(const MultiCostGraph &g, VertexId s, VertexId e, const ScoreFunction &f,
                                const OracleOptions &options = {});

struct OracleEdge {
  VertexId from = kNoVertex;
  VertexId to = kNoVertex;
  CostVector cost;
};

/// Optimal score over simple paths of an explicit multigraph (parallel
/// edges allowed), from the full Pareto frontier at e. +inf when e is
/// unreachable.
double oracle_multigraph_score(std::size_t vertex_count, const std::vector<OracleEdge> &edges, VertexId s,
                               VertexId e, const ScoreFunction &f);

/// All simple s-e paths, reduced to the non-dominated cost vectors. One
/// path per distinct cost (the lexicographically smallest vertex sequence),
/// sorted by cost.
SkylinePathSet oracle_skyline_set(const MultiCostGraph &g, VertexId s, VertexId e,
                                  std::size_t max_vertices = 14);

/// Best-first branch and bound directly on g, bounded by per-dimension
/// distances to e from d backward searches and seeded with the best of the d
/// single-cost shortest paths. No partition, no shrunk graph, no filtering.
QueryResult bf_search_baseline(const MultiCostGraph &g, VertexId s, VertexId e, const ScoreFunction &f,
                               const QueryOptions &options = {});

/// Serialized size of the all-pairs skyline index (every source's Pareto
/// label tree over the whole graph) in the same encoding as the partition
/// index.
std::size_t all_pairs_skyline_bytes(const MultiCostGraph &g);

} // namespace mcroute

#endif // MCROUTE_ORACLE_HPP
