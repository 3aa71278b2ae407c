#ifndef MCROUTE_GRAPH_HPP
#define MCROUTE_GRAPH_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <limits>
#include <optional>
#include <ranges>
#include <span>
#include <string>
#include <vector>

#include "mcroute/cost.hpp"

namespace mcroute {

using VertexId = std::uint32_t;
using EdgeId = std::uint32_t;
inline constexpr VertexId kNoVertex = std::numeric_limits<VertexId>::max();

struct EdgeInput {
  VertexId source = 0;
  VertexId target = 0;
  CostVector cost;
};

/// Simple directed graph carrying a d-dimensional cost vector per edge.
///
/// Edges are kept sorted by (source, target), so the out-edges of a vertex
/// are a contiguous id range; in-edges are a sorted id list per vertex.
/// Immutable after construction.
class MultiCostGraph {
public:
  MultiCostGraph() = default;

  /// Validates and freezes an edge list. Rejects self-loops, duplicate
  /// (source, target) pairs, out-of-range ids, negative or non-finite costs
  /// and cost vectors whose dimensionality differs from `dims`.
  static MultiCostGraph from_edges(std::size_t vertex_count, std::size_t dims,
                                   std::vector<EdgeInput> edges);

  std::size_t vertex_count() const noexcept { return out_offsets_.empty() ? 0 : out_offsets_.size() - 1; }
  std::size_t edge_count() const noexcept { return sources_.size(); }
  std::size_t dims() const noexcept { return dims_; }
  /// True when every cost component is an integer.
  bool integral() const noexcept { return integral_; }

  VertexId source(EdgeId e) const noexcept { return sources_[e]; }
  VertexId target(EdgeId e) const noexcept { return targets_[e]; }
  double cost(EdgeId e, std::size_t dim) const noexcept { return costs_[e * dims_ + dim]; }
  CostVector cost(EdgeId e) const noexcept {
    return CostVector(std::span<const double>(costs_.data() + e * dims_, dims_));
  }

  auto out_edges(VertexId v) const noexcept {
    return std::views::iota(out_offsets_[v], out_offsets_[v + 1]);
  }
  std::span<const EdgeId> in_edges(VertexId v) const noexcept {
    return {in_edges_.data() + in_offsets_[v], in_edges_.data() + in_offsets_[v + 1]};
  }
  std::size_t out_degree(VertexId v) const noexcept { return out_offsets_[v + 1] - out_offsets_[v]; }
  std::size_t in_degree(VertexId v) const noexcept { return in_offsets_[v + 1] - in_offsets_[v]; }

  std::optional<EdgeId> find_edge(VertexId from, VertexId to) const noexcept;

  friend bool operator==(const MultiCostGraph &, const MultiCostGraph &) = default;

private:
  std::size_t dims_ = 0;
  bool integral_ = true;
  std::vector<VertexId> sources_;
  std::vector<VertexId> targets_;
  std::vector<double> costs_;
  std::vector<EdgeId> out_offsets_;
  std::vector<EdgeId> in_offsets_;
  std::vector<EdgeId> in_edges_;
};

/// A vertex sequence together with its summed cost vector.
struct Path {
  std::vector<VertexId> vertices;
  CostVector cost;

  bool empty() const noexcept { return vertices.empty(); }
  friend bool operator==(const Path &, const Path &) = default;
};

/// Builds a Path along `vertices`, summing edge costs. Throws GraphError
/// when a consecutive pair is not an edge.
Path make_path(const MultiCostGraph &g, std::vector<VertexId> vertices);

bool is_simple(std::span<const VertexId> vertices);

/// Removes cycles by cutting back to the first occurrence of any repeated
/// vertex. With non-negative costs the result never costs more.
Path remove_cycles(const MultiCostGraph &g, const Path &walk);

struct LoadOptions {
  /// Keep the first of several (source, target) duplicates instead of
  /// rejecting the file.
  bool collapse_duplicates = false;
};

struct LoadReport {
  std::size_t duplicates_collapsed = 0;
};

/// Reads the text edge-list format:
///   n m d directed|undirected
///   u v w1 ... wd        (m lines)
/// `#` starts a comment. Undirected edges expand to two directed edges.
MultiCostGraph load_graph(std::istream &in, const LoadOptions &options = {},
                          LoadReport *report = nullptr);
MultiCostGraph load_graph_file(const std::string &path, const LoadOptions &options = {},
                               LoadReport *report = nullptr);

/// Canonical directed form, edges in (source, target) order.
void save_graph(std::ostream &out, const MultiCostGraph &g);
void save_graph_file(const std::string &path, const MultiCostGraph &g);

/// FNV-1a 64 over the canonical serialization.
std::uint64_t graph_hash(const MultiCostGraph &g);

/// Optional sidecar mapping dense ids to external labels: lines `id label`.
std::vector<std::string> load_vertex_labels(std::istream &in, std::size_t vertex_count);

struct CostRange {
  std::int64_t lo = 1;
  std::int64_t hi = 10;
};

/// Uniform random simple digraph with exactly `m` distinct edges and integer
/// costs drawn uniformly from `costs`. Deterministic for a fixed seed.
MultiCostGraph generate_random_graph(std::size_t n, std::size_t m, std::size_t d, CostRange costs,
                                     std::uint64_t seed);

/// Connected planar-ish "road-like" network: random points in the unit
/// square, a Euclidean spanning tree plus the shortest remaining
/// nearest-neighbour links up to `m_undirected` roads. Every road becomes two
/// directed edges carrying the same cost vector.
MultiCostGraph generate_road_graph(std::size_t n, std::size_t m_undirected, std::size_t d,
                                   CostRange costs, std::uint64_t seed);

/// Induced subgraph with a translation table back to parent ids.
struct Subgraph {
  MultiCostGraph graph;
  std::vector<VertexId> to_parent; // sorted ascending

  /// Local id of a parent vertex, or kNoVertex when absent.
  VertexId to_local(VertexId parent) const noexcept;
};

/// Throws GraphError on an id outside the parent graph.
Subgraph induced_subgraph(const MultiCostGraph &g, std::span<const VertexId> subset);

} // namespace mcroute

#endif // MCROUTE_GRAPH_HPP
