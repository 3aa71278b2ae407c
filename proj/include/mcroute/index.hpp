#ifndef MCROUTE_INDEX_HPP
#define MCROUTE_INDEX_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "mcroute/contour.hpp"
#include "mcroute/cost.hpp"
#include "mcroute/graph.hpp"
#include "mcroute/lbop.hpp"
#include "mcroute/partition.hpp"
#include "mcroute/skyline.hpp"

namespace mcroute {

/// Skyline paths from one entry to every exit of its subset, stored as a
/// pruned Pareto label tree: only labels on some stored path are kept.
/// Parents always precede their children.
struct EntrySkylines {
  VertexId entry = kNoVertex;
  std::size_t dims = 0;
  std::vector<VertexId> vertex;      // per label, parent-graph id
  std::vector<std::uint32_t> parent; // per label, ParetoTree::kNoLabel for the root
  std::vector<double> cost;          // per label, dims values
  /// Per exit position of the subset: terminal labels in lexicographic
  /// cost order. Empty for the entry itself and for unreachable exits.
  std::vector<std::vector<std::uint32_t>> exit_labels;
  /// Per exit position: grouping of exit_labels (member = position in that list).
  std::vector<ContourSkylineSet> contours;

  std::size_t label_count() const noexcept { return vertex.size(); }
  CostVector label_cost(std::uint32_t label) const {
    return CostVector(std::span<const double>(cost.data() + label * dims, dims));
  }
  const double *label_cost_data(std::uint32_t label) const noexcept { return cost.data() + label * dims; }
  std::vector<VertexId> label_path(std::uint32_t label) const;

  friend bool operator==(const EntrySkylines &, const EntrySkylines &) = default;
};

struct IndexSizes {
  std::size_t header = 0;
  std::size_t layout = 0;
  std::size_t inter = 0;
  std::size_t inner_lbop = 0;
  std::size_t skyline = 0;
  std::size_t contour = 0;
  std::size_t total = 0;
};

struct BuildMeta {
  std::size_t k = 0;
  std::size_t r = 0;
  std::uint64_t seed = 0;
  std::uint64_t contour_seed = 0;
  double partition_seconds = 0.0;
  double lbop_seconds = 0.0;
  double skyline_seconds = 0.0;
  double contour_seconds = 0.0;
  IndexSizes sizes;
};

class PartitionIndex {
public:
  PartitionLayout layout;
  InterIndex inter;
  LbopInnerIndex inner_lbop;
  /// [subset][entry position]
  std::vector<std::vector<EntrySkylines>> skylines;
  BuildMeta meta;

  std::uint64_t graph_hash = 0;
  std::size_t dims = 0;
  std::size_t vertex_count = 0;
  std::size_t edge_count = 0;
  bool integral = true;

  const EntrySkylines &from_entry(VertexId entry) const;
  /// Labels of the skyline paths from `entry` to `exit` (same subset).
  const std::vector<std::uint32_t> &pair_labels(VertexId entry, VertexId exit) const;
  const ContourSkylineSet &contour_set(VertexId entry, VertexId exit) const;
  SkylinePathSet skyline_set(VertexId entry, VertexId exit) const;

  std::size_t pair_count() const;           // entry != exit pairs with a stored set
  std::size_t skyline_path_count() const;   // total over all pairs

  /// Structural equality; timings are ignored.
  bool same_content(const PartitionIndex &other) const;
};

struct IndexBuildOptions {
  std::size_t k = kDefaultSubsetCount;
  std::size_t r = 8;
  std::uint64_t seed = 0;
  std::uint64_t contour_seed = 0;
  int threads = 1;
  /// 0 = unlimited; a larger skyline between one pair throws SkylineCapExceeded.
  std::size_t max_skyline = 0;
  /// Reuse a given partition instead of computing one.
  std::optional<PartitionLayout> layout;
  bool measure_sizes = true;
};

/// partition -> LBOP indexes -> per-entry skyline trees -> contour sets.
PartitionIndex build_index(const MultiCostGraph &g, const IndexBuildOptions &options = {});

/// Skyline trees of every entry, computed on each subset's induced subgraph.
/// `threads > 1` spreads entries over OpenMP threads; the output is the same.
std::vector<std::vector<EntrySkylines>> build_skyline_trees(const MultiCostGraph &g,
                                                            const PartitionLayout &layout,
                                                            int threads = 1,
                                                            std::size_t max_skyline = 0);

void build_contours(std::vector<std::vector<EntrySkylines>> &skylines, std::size_t r,
                    std::uint64_t seed, int threads = 1);

inline constexpr std::uint32_t kIndexFormatVersion = 2;

void save_index(std::ostream &out, const PartitionIndex &index);
void save_index_file(const std::string &path, const PartitionIndex &index);
/// Throws IndexFormatError on a bad magic, version, checksum, truncation or
/// when the index was built for a different graph.
PartitionIndex load_index(std::istream &in, const MultiCostGraph &g);
PartitionIndex load_index_file(const std::string &path, const MultiCostGraph &g);

/// Byte counts of each serialized section.
IndexSizes measure_index(const PartitionIndex &index);

/// Label-tree encoding shared by the index and the all-pairs baseline.
void encode_entry_skylines(std::string &out, const EntrySkylines &tree, bool integral,
                           bool with_exit_lists = true);

} // namespace mcroute

#endif // MCROUTE_INDEX_HPP
