#include "mcroute/dijkstra.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <utility>

namespace mcroute {

std::vector<VertexId> ShortestPathTree::path_to(VertexId v, Direction direction) const {
  if (distance[v] == kInfinity) return {};
  std::vector<VertexId> out;
  for (VertexId cur = v; cur != kNoVertex; cur = parent[cur]) out.push_back(cur);
  if (direction == Direction::Forward) std::reverse(out.begin(), out.end());
  return out;
}

namespace {

ShortestPathTree run(const MultiCostGraph &g, std::size_t dim, VertexId source, Direction direction,
                     std::span<const VertexId> targets, bool bounded) {
  const std::size_t n = g.vertex_count();
  ShortestPathTree tree{std::vector<double>(n, kInfinity), std::vector<VertexId>(n, kNoVertex)};
  std::vector<char> settled(n, 0);
  std::vector<char> wanted;
  std::size_t remaining = 0;
  if (bounded) {
    wanted.assign(n, 0);
    for (VertexId t : targets)
      if (!wanted[t]) {
        wanted[t] = 1;
        ++remaining;
      }
    if (remaining == 0) {
      tree.distance[source] = 0.0;
      return tree;
    }
  }

  using Item = std::pair<double, VertexId>;
  std::priority_queue<Item, std::vector<Item>, DistanceAfter> heap;
  tree.distance[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [dist, v] = heap.top();
    heap.pop();
    if (settled[v]) continue;
    settled[v] = 1;
    if (bounded && wanted[v] && --remaining == 0) break;
    auto relax = [&](VertexId w, EdgeId e) {
      double nd = dist + g.cost(e, dim);
      if (nd < tree.distance[w]) {
        tree.distance[w] = nd;
        tree.parent[w] = v;
        heap.emplace(nd, w);
      }
    };
    if (direction == Direction::Forward) {
      for (EdgeId e : g.out_edges(v)) relax(g.target(e), e);
    } else {
      for (EdgeId e : g.in_edges(v)) relax(g.source(e), e);
    }
  }
  return tree;
}

} // namespace

ShortestPathTree single_cost_distances(const MultiCostGraph &g, std::size_t dim, VertexId source,
                                       Direction direction) {
  return run(g, dim, source, direction, {}, false);
}

ShortestPathTree single_cost_distances_until(const MultiCostGraph &g, std::size_t dim,
                                             VertexId source, Direction direction,
                                             std::span<const VertexId> targets) {
  return run(g, dim, source, direction, targets, true);
}

} // namespace mcroute
