#ifndef MCROUTE_SKYLINE_HPP
#define MCROUTE_SKYLINE_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mcroute/cost.hpp"
#include "mcroute/graph.hpp"

namespace mcroute {

/// Mutually non-dominated paths between one (entry, exit) pair, sorted
/// lexicographically by cost. Equal-cost alternatives are collapsed to one.
struct SkylinePathSet {
  VertexId entry = kNoVertex;
  VertexId exit = kNoVertex;
  std::vector<Path> paths;

  std::vector<CostVector> costs() const;
};

struct SkylineOptions {
  /// Per-vertex lower bound on the cost to reach the exit. When given, a
  /// partial path whose cost plus bound is weakly dominated by a confirmed
  /// result is dropped.
  std::span<const CostVector> bounds_to_exit;
  /// Seed the result set with the d lexicographic single-cost shortest paths.
  bool seed_with_shortest = true;
  /// 0 = unlimited. Exceeding the cap throws SkylineCapExceeded.
  std::size_t max_paths = 0;
};

/// Complete skyline between `entry` and `exit` of `g` (typically an induced
/// subgraph). Label-setting search in lexicographic cost order with per-vertex
/// Pareto label sets.
SkylinePathSet compute_skyline_paths(const MultiCostGraph &g, VertexId entry, VertexId exit,
                                     const SkylineOptions &options = {});

/// Permanent Pareto labels of a one-to-all search. Each label records its
/// predecessor, so labels form a tree rooted at the source.
struct ParetoTree {
  struct Label {
    CostVector cost;
    VertexId vertex = kNoVertex;
    std::uint32_t parent = kNoLabel;
  };
  static constexpr std::uint32_t kNoLabel = 0xffffffffu;

  VertexId source = kNoVertex;
  std::vector<Label> labels;
  /// Surviving labels per vertex in lexicographic cost order.
  std::vector<std::vector<std::uint32_t>> at_vertex;

  std::vector<VertexId> vertices_of(std::uint32_t label) const;
};

/// Skyline paths from `source` to every vertex at once.
ParetoTree pareto_search(const MultiCostGraph &g, VertexId source);

/// Single-cost shortest path over dimension `dim`, ties broken
/// lexicographically on the remaining dimensions, so the result is itself
/// a skyline path. Empty when unreachable.
Path lexicographic_shortest_path(const MultiCostGraph &g, VertexId from, VertexId to, std::size_t dim);

} // namespace mcroute

#endif // MCROUTE_SKYLINE_HPP
