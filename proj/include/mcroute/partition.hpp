#ifndef MCROUTE_PARTITION_HPP
#define MCROUTE_PARTITION_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <vector>

#include "mcroute/graph.hpp"

namespace mcroute {

using SubsetId = std::uint32_t;

inline constexpr std::size_t kDefaultSubsetCount = 50;

/// k disjoint vertex subsets covering V plus their border sets.
///
/// A vertex is an entry of its subset when some in-neighbour lies outside
/// the subset, and an exit when some out-neighbour does. All vertex lists
/// are sorted ascending.
struct PartitionLayout {
  std::size_t k = 0;
  std::vector<SubsetId> assignment;
  std::vector<std::vector<VertexId>> members;
  std::vector<std::vector<VertexId>> entries;
  std::vector<std::vector<VertexId>> exits;
  std::vector<char> is_entry;
  std::vector<char> is_exit;
  std::size_t cut_edges = 0; // directed edges whose endpoints lie in different subsets

  SubsetId subset_of(VertexId v) const noexcept { return assignment[v]; }
  bool is_border(VertexId v) const noexcept { return is_entry[v] || is_exit[v]; }
  std::size_t vertex_count() const noexcept { return assignment.size(); }

  std::vector<VertexId> all_entries() const;
  std::vector<VertexId> all_exits() const;
  /// Entries ∪ exits, sorted.
  std::vector<VertexId> borders() const;
  std::size_t largest_subset() const;

  friend bool operator==(const PartitionLayout &, const PartitionLayout &) = default;
};

/// Derives members, entries, exits and the cut size from a total
/// assignment. `k == 0` infers k as max id + 1. Throws PartitionError on a
/// partial assignment or an id >= k.
PartitionLayout compute_borders(const MultiCostGraph &g, std::vector<SubsetId> assignment,
                                std::size_t k = 0);

struct PartitionOptions {
  /// Allowed subset weight deviation from n/k.
  double imbalance = 0.25;
  std::size_t refinement_passes = 8;
};

/// Multilevel k-way partitioning on the undirected topology: heavy-edge
/// matching coarsening, greedy region growing on the coarsest level and
/// boundary refinement while projecting back. Minimizes the number of cut
/// edges under a soft balance constraint. Every subset is non-empty.
PartitionLayout partition_graph(const MultiCostGraph &g, std::size_t k, std::uint64_t seed,
                                const PartitionOptions &options = {});

/// One subset id per line, line i for vertex i. Borders are recomputed.
PartitionLayout load_partition(std::istream &in, const MultiCostGraph &g);
void save_partition(std::ostream &out, const PartitionLayout &layout);

} // namespace mcroute

#endif // MCROUTE_PARTITION_HPP
