#ifndef MCROUTE_LBOP_HPP
#define MCROUTE_LBOP_HPP

#include <cstddef>
#include <memory>
#include <mutex>
#include <optional>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include "mcroute/cost.hpp"
#include "mcroute/graph.hpp"
#include "mcroute/partition.hpp"

namespace mcroute {

/// Lower bound of the optimal path between a pair: component x is the
/// shortest distance over dimension x of the full graph. `witnesses`, when
/// filled, holds one shortest path per dimension.
struct Lbop {
  CostVector phi;
  std::vector<Path> witnesses;
};

/// Componentwise min over relays r of (left_r + right_r). The minimizing
/// relay may differ per dimension. No candidates yields all +inf.
CostVector combine_min(std::span<const std::pair<CostVector, CostVector>> candidates, std::size_t dims);

/// Dense matrix of LBOPs from every border vertex (row) to every entry
/// (column) of a different subset. Same-subset cells are absent.
class InterIndex {
public:
  InterIndex() = default;
  InterIndex(const PartitionLayout &layout, std::size_t dims);

  std::size_t dims() const noexcept { return dims_; }
  std::span<const VertexId> row_vertices() const noexcept { return rows_; }
  std::span<const VertexId> col_vertices() const noexcept { return cols_; }
  std::size_t row_of(VertexId v) const noexcept { return row_pos_[v]; }
  std::size_t col_of(VertexId v) const noexcept { return col_pos_[v]; }
  static constexpr std::size_t npos = static_cast<std::size_t>(-1);

  /// Value for a border `from` and an entry `to` of another subset, or
  /// nullopt when the cell is absent.
  std::optional<CostVector> cell(VertexId from, VertexId to) const;

  double *cell_data(std::size_t row, std::size_t col) noexcept {
    return values_.data() + (row * cols_.size() + col) * dims_;
  }
  const double *cell_data(std::size_t row, std::size_t col) const noexcept {
    return values_.data() + (row * cols_.size() + col) * dims_;
  }
  bool present(std::size_t row, std::size_t col) const noexcept {
    return row_subset_[row] != col_subset_[col];
  }
  std::size_t present_cells() const;

  friend bool operator==(const InterIndex &, const InterIndex &) = default;

private:
  std::size_t dims_ = 0;
  std::vector<VertexId> rows_;
  std::vector<VertexId> cols_;
  std::vector<SubsetId> row_subset_;
  std::vector<SubsetId> col_subset_;
  std::vector<std::size_t> row_pos_;
  std::vector<std::size_t> col_pos_;
  std::vector<double> values_;
};

/// Per subset: LBOPs from each entry to every member, and from every member
/// to each exit. Rows are stored contiguously over the subset's members.
class LbopInnerIndex {
public:
  LbopInnerIndex() = default;
  LbopInnerIndex(const PartitionLayout &layout, std::size_t dims);

  std::size_t dims() const noexcept { return dims_; }
  /// Position of a vertex among the members of its subset.
  std::size_t member_pos(VertexId v) const noexcept { return member_pos_[v]; }
  std::size_t entry_pos(VertexId v) const noexcept { return entry_pos_[v]; }
  std::size_t exit_pos(VertexId v) const noexcept { return exit_pos_[v]; }

  /// Φ(entry, member) over the members of the entry's subset.
  double *entry_row(SubsetId p, std::size_t entry_index) noexcept {
    return entry_rows_[p].data() + entry_index * members_[p] * dims_;
  }
  const double *entry_row(SubsetId p, std::size_t entry_index) const noexcept {
    return entry_rows_[p].data() + entry_index * members_[p] * dims_;
  }
  /// Φ(member, exit) over the members of the exit's subset.
  double *exit_col(SubsetId p, std::size_t exit_index) noexcept {
    return exit_cols_[p].data() + exit_index * members_[p] * dims_;
  }
  const double *exit_col(SubsetId p, std::size_t exit_index) const noexcept {
    return exit_cols_[p].data() + exit_index * members_[p] * dims_;
  }
  std::size_t subset_count() const noexcept { return members_.size(); }
  std::size_t stored_cells() const;

  friend bool operator==(const LbopInnerIndex &, const LbopInnerIndex &) = default;

private:
  std::size_t dims_ = 0;
  std::vector<std::size_t> members_;
  std::vector<std::size_t> member_pos_;
  std::vector<std::size_t> entry_pos_;
  std::vector<std::size_t> exit_pos_;
  std::vector<std::vector<double>> entry_rows_;
  std::vector<std::vector<double>> exit_cols_;
};

struct BuildThreads {
  int threads = 1; // <= 1 runs the serial loops
};

/// Both LBOP indexes from one sweep of per-dimension searches over the full
/// graph: a forward search per border fills its inter-index row (and its
/// entry row), a bounded backward search per exit fills its exit column.
std::pair<InterIndex, LbopInnerIndex> build_lbop_indexes(const MultiCostGraph &g,
                                                         const PartitionLayout &layout,
                                                         BuildThreads threads = {});
InterIndex build_inter_index(const MultiCostGraph &g, const PartitionLayout &layout,
                             BuildThreads threads = {});
LbopInnerIndex build_lbop_inner_index(const MultiCostGraph &g, const PartitionLayout &layout,
                                      BuildThreads threads = {});

/// Evaluates Φ for arbitrary vertex pairs from the two LBOP indexes.
///
/// Rows of the full subset matrix that are not stored (a non-entry source
/// or a non-exit target inside one subset) are computed on demand with
/// bounded searches and cached. The cache is internally synchronized.
class LbopEngine {
public:
  LbopEngine(const MultiCostGraph &g, const PartitionLayout &layout, const InterIndex &inter,
             const LbopInnerIndex &inner);

  /// Φ_{s,e}. All components are +inf when e is unreachable from s.
  Lbop compute_lbop(VertexId s, VertexId e) const;

  /// Φ_{s,v} for each v in `targets`.
  std::vector<CostVector> from_source(VertexId s, std::span<const VertexId> targets) const;
  /// Φ_{v,e} for each v in `sources`.
  std::vector<CostVector> to_target(std::span<const VertexId> sources, VertexId e) const;

  std::size_t on_demand_searches() const;

  const PartitionLayout &layout() const noexcept { return layout_; }
  std::size_t dims() const noexcept { return g_.dims(); }

private:
  using Row = std::shared_ptr<const std::vector<double>>;

  // Φ(s, member) over the members of s's subset.
  const double *row_from(VertexId s, Row &hold) const;
  // Φ(member, e) over the members of e's subset.
  const double *col_to(VertexId e, Row &hold) const;
  // Φ(s, i) for every entry i (columns of the inter-index) outside s's subset.
  std::vector<double> to_entries(VertexId s) const;
  // Φ(b, e) for every border b (rows of the inter-index) outside e's subset.
  std::vector<double> from_borders(VertexId e) const;

  const MultiCostGraph &g_;
  const PartitionLayout &layout_;
  const InterIndex &inter_;
  const LbopInnerIndex &inner_;

  mutable std::mutex mutex_;
  mutable std::unordered_map<VertexId, Row> rows_;
  mutable std::unordered_map<VertexId, Row> cols_;
  mutable std::size_t searches_ = 0;
};

} // namespace mcroute

#endif // MCROUTE_LBOP_HPP
