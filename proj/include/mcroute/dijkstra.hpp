#ifndef MCROUTE_DIJKSTRA_HPP
#define MCROUTE_DIJKSTRA_HPP

#include <cstddef>
#include <span>
#include <utility>
#include <vector>

#include "mcroute/graph.hpp"

namespace mcroute {

/// Min-heap order for (distance, vertex) entries.
struct DistanceAfter {
  bool operator()(const std::pair<double, VertexId> &a, const std::pair<double, VertexId> &b) const noexcept {
    return a.first > b.first || (a.first == b.first && a.second > b.second);
  }
};

enum class Direction { Forward, Backward };

/// Single-criterion distances from one root. For a backward search,
/// `distance[v]` is the cost from v to the root and `parent[v]` is the next
/// vertex towards the root.
struct ShortestPathTree {
  std::vector<double> distance; // kInfinity when unreachable
  std::vector<VertexId> parent; // kNoVertex for the root and unreachable vertices

  /// Vertex sequence root..v (forward) or v..root (backward); empty if unreachable.
  std::vector<VertexId> path_to(VertexId v, Direction direction) const;
};

/// Dijkstra over dimension `dim` of the full graph.
ShortestPathTree single_cost_distances(const MultiCostGraph &g, std::size_t dim, VertexId source,
                                       Direction direction);

/// Same search, but stops once every vertex of `targets` is settled.
/// Distances of settled vertices are exact; the rest are upper bounds.
ShortestPathTree single_cost_distances_until(const MultiCostGraph &g, std::size_t dim,
                                             VertexId source, Direction direction,
                                             std::span<const VertexId> targets);

} // namespace mcroute

#endif // MCROUTE_DIJKSTRA_HPP
