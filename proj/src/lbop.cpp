#include "mcroute/lbop.hpp"

#include <algorithm>

#include "mcroute/dijkstra.hpp"

namespace mcroute {

CostVector combine_min(std::span<const std::pair<CostVector, CostVector>> candidates, std::size_t dims) {
  CostVector out = CostVector::infinite(dims);
  for (const auto &[left, right] : candidates)
    for (std::size_t x = 0; x < dims; ++x) out[x] = std::min(out[x], left[x] + right[x]);
  return out;
}

InterIndex::InterIndex(const PartitionLayout &layout, std::size_t dims)
    : dims_(dims), rows_(layout.borders()), cols_(layout.all_entries()) {
  const std::size_t n = layout.vertex_count();
  row_pos_.assign(n, npos);
  col_pos_.assign(n, npos);
  for (std::size_t r = 0; r < rows_.size(); ++r) {
    row_pos_[rows_[r]] = r;
    row_subset_.push_back(layout.subset_of(rows_[r]));
  }
  for (std::size_t c = 0; c < cols_.size(); ++c) {
    col_pos_[cols_[c]] = c;
    col_subset_.push_back(layout.subset_of(cols_[c]));
  }
  values_.assign(rows_.size() * cols_.size() * dims_, kInfinity);
}

std::optional<CostVector> InterIndex::cell(VertexId from, VertexId to) const {
  if (from >= row_pos_.size() || to >= col_pos_.size()) return std::nullopt;
  std::size_t r = row_pos_[from], c = col_pos_[to];
  if (r == npos || c == npos || !present(r, c)) return std::nullopt;
  return CostVector(std::span<const double>(cell_data(r, c), dims_));
}

std::size_t InterIndex::present_cells() const {
  std::size_t count = 0;
  for (std::size_t r = 0; r < rows_.size(); ++r)
    for (std::size_t c = 0; c < cols_.size(); ++c) count += present(r, c);
  return count;
}

LbopInnerIndex::LbopInnerIndex(const PartitionLayout &layout, std::size_t dims) : dims_(dims) {
  const std::size_t n = layout.vertex_count();
  member_pos_.assign(n, InterIndex::npos);
  entry_pos_.assign(n, InterIndex::npos);
  exit_pos_.assign(n, InterIndex::npos);
  members_.resize(layout.k);
  entry_rows_.resize(layout.k);
  exit_cols_.resize(layout.k);
  for (SubsetId p = 0; p < layout.k; ++p) {
    members_[p] = layout.members[p].size();
    for (std::size_t i = 0; i < layout.members[p].size(); ++i) member_pos_[layout.members[p][i]] = i;
    for (std::size_t i = 0; i < layout.entries[p].size(); ++i) entry_pos_[layout.entries[p][i]] = i;
    for (std::size_t i = 0; i < layout.exits[p].size(); ++i) exit_pos_[layout.exits[p][i]] = i;
    entry_rows_[p].assign(layout.entries[p].size() * members_[p] * dims_, kInfinity);
    exit_cols_[p].assign(layout.exits[p].size() * members_[p] * dims_, kInfinity);
  }
}

std::size_t LbopInnerIndex::stored_cells() const {
  std::size_t count = 0;
  for (std::size_t p = 0; p < members_.size(); ++p)
    count += (entry_rows_[p].size() + exit_cols_[p].size()) / std::max<std::size_t>(dims_, 1);
  return count;
}

namespace {

void fill_lbops(const MultiCostGraph &g, const PartitionLayout &layout, InterIndex *inter,
                LbopInnerIndex *inner, BuildThreads threads) {
  const std::size_t d = g.dims();
  const auto borders = layout.borders();
  const auto exits = layout.all_exits();
  const int nthreads = std::max(1, threads.threads);
  const auto border_count = static_cast<std::ptrdiff_t>(borders.size());
  const auto exit_count = static_cast<std::ptrdiff_t>(exits.size());

  // Forward sweep: one full search per border and dimension. Iterations
  // write disjoint rows.
  if (inter || inner) {
#pragma omp parallel for schedule(dynamic, 4) num_threads(nthreads) if (nthreads > 1)
    for (std::ptrdiff_t bi = 0; bi < border_count; ++bi) {
      const VertexId b = borders[bi];
      const SubsetId p = layout.subset_of(b);
      const bool need_row = inter != nullptr;
      const bool need_entry = inner != nullptr && layout.is_entry[b];
      if (!need_row && !need_entry) continue;
      for (std::size_t x = 0; x < d; ++x) {
        const auto tree = need_row ? single_cost_distances(g, x, b, Direction::Forward)
                                   : single_cost_distances_until(g, x, b, Direction::Forward,
                                                                 layout.members[p]);
        if (need_row) {
          const std::size_t r = inter->row_of(b);
          const auto cols = inter->col_vertices();
          for (std::size_t c = 0; c < cols.size(); ++c)
            if (inter->present(r, c)) inter->cell_data(r, c)[x] = tree.distance[cols[c]];
        }
        if (need_entry) {
          double *row = inner->entry_row(p, inner->entry_pos(b));
          const auto &members = layout.members[p];
          for (std::size_t i = 0; i < members.size(); ++i) row[i * d + x] = tree.distance[members[i]];
        }
      }
    }
  }

  if (inner) {
#pragma omp parallel for schedule(dynamic, 4) num_threads(nthreads) if (nthreads > 1)
    for (std::ptrdiff_t ji = 0; ji < exit_count; ++ji) {
      const VertexId j = exits[ji];
      const SubsetId p = layout.subset_of(j);
      const auto &members = layout.members[p];
      double *col = inner->exit_col(p, inner->exit_pos(j));
      for (std::size_t x = 0; x < d; ++x) {
        const auto tree = single_cost_distances_until(g, x, j, Direction::Backward, members);
        for (std::size_t i = 0; i < members.size(); ++i) col[i * d + x] = tree.distance[members[i]];
      }
    }
  }
}

} // namespace

std::pair<InterIndex, LbopInnerIndex> build_lbop_indexes(const MultiCostGraph &g,
                                                         const PartitionLayout &layout,
                                                         BuildThreads threads) {
  InterIndex inter(layout, g.dims());
  LbopInnerIndex inner(layout, g.dims());
  fill_lbops(g, layout, &inter, &inner, threads);
  return {std::move(inter), std::move(inner)};
}

InterIndex build_inter_index(const MultiCostGraph &g, const PartitionLayout &layout, BuildThreads threads) {
  InterIndex inter(layout, g.dims());
  fill_lbops(g, layout, &inter, nullptr, threads);
  return inter;
}

LbopInnerIndex build_lbop_inner_index(const MultiCostGraph &g, const PartitionLayout &layout,
                                      BuildThreads threads) {
  LbopInnerIndex inner(layout, g.dims());
  fill_lbops(g, layout, nullptr, &inner, threads);
  return inner;
}

LbopEngine::LbopEngine(const MultiCostGraph &g, const PartitionLayout &layout, const InterIndex &inter,
                       const LbopInnerIndex &inner)
    : g_(g), layout_(layout), inter_(inter), inner_(inner) {}

std::size_t LbopEngine::on_demand_searches() const {
  std::lock_guard lock(mutex_);
  return searches_;
}

const double *LbopEngine::row_from(VertexId s, Row &hold) const {
  const SubsetId p = layout_.subset_of(s);
  if (layout_.is_entry[s]) return inner_.entry_row(p, inner_.entry_pos(s));
  {
    std::lock_guard lock(mutex_);
    auto it = rows_.find(s);
    if (it != rows_.end()) {
      hold = it->second;
      return hold->data();
    }
  }
  const std::size_t d = g_.dims();
  const auto &members = layout_.members[p];
  auto row = std::make_shared<std::vector<double>>(members.size() * d);
  for (std::size_t x = 0; x < d; ++x) {
    auto tree = single_cost_distances_until(g_, x, s, Direction::Forward, members);
    for (std::size_t i = 0; i < members.size(); ++i) (*row)[i * d + x] = tree.distance[members[i]];
  }
  std::lock_guard lock(mutex_);
  searches_ += d;
  hold = rows_.emplace(s, std::move(row)).first->second;
  return hold->data();
}

const double *LbopEngine::col_to(VertexId e, Row &hold) const {
  const SubsetId p = layout_.subset_of(e);
  if (layout_.is_exit[e]) return inner_.exit_col(p, inner_.exit_pos(e));
  {
    std::lock_guard lock(mutex_);
    auto it = cols_.find(e);
    if (it != cols_.end()) {
      hold = it->second;
      return hold->data();
    }
  }
  const std::size_t d = g_.dims();
  const auto &members = layout_.members[p];
  auto col = std::make_shared<std::vector<double>>(members.size() * d);
  for (std::size_t x = 0; x < d; ++x) {
    auto tree = single_cost_distances_until(g_, x, e, Direction::Backward, members);
    for (std::size_t i = 0; i < members.size(); ++i) (*col)[i * d + x] = tree.distance[members[i]];
  }
  std::lock_guard lock(mutex_);
  searches_ += d;
  hold = cols_.emplace(e, std::move(col)).first->second;
  return hold->data();
}

std::vector<double> LbopEngine::to_entries(VertexId s) const {
  const std::size_t d = g_.dims();
  const auto cols = inter_.col_vertices();
  std::vector<double> out(cols.size() * d, kInfinity);
  const SubsetId ps = layout_.subset_of(s);
  if (layout_.is_border(s)) {
    const std::size_t r = inter_.row_of(s);
    for (std::size_t c = 0; c < cols.size(); ++c)
      if (inter_.present(r, c)) std::copy_n(inter_.cell_data(r, c), d, out.data() + c * d);
    return out;
  }
  // Any path leaving the subset passes one of its exits.
  const std::size_t si = inner_.member_pos(s);
  for (VertexId j : layout_.exits[ps]) {
    const double *to_exit = inner_.exit_col(ps, inner_.exit_pos(j)) + si * d;
    const std::size_t r = inter_.row_of(j);
    for (std::size_t c = 0; c < cols.size(); ++c) {
      if (!inter_.present(r, c)) continue;
      const double *cell = inter_.cell_data(r, c);
      for (std::size_t x = 0; x < d; ++x) out[c * d + x] = std::min(out[c * d + x], to_exit[x] + cell[x]);
    }
  }
  return out;
}

std::vector<double> LbopEngine::from_borders(VertexId e) const {
  const std::size_t d = g_.dims();
  const auto rows = inter_.row_vertices();
  std::vector<double> out(rows.size() * d, kInfinity);
  const SubsetId pe = layout_.subset_of(e);
  const std::size_t ei = inner_.member_pos(e);
  for (VertexId i : layout_.entries[pe]) {
    const double *from_entry = inner_.entry_row(pe, inner_.entry_pos(i)) + ei * d;
    const std::size_t c = inter_.col_of(i);
    for (std::size_t r = 0; r < rows.size(); ++r) {
      if (!inter_.present(r, c)) continue;
      const double *cell = inter_.cell_data(r, c);
      for (std::size_t x = 0; x < d; ++x) out[r * d + x] = std::min(out[r * d + x], cell[x] + from_entry[x]);
    }
  }
  return out;
}

Lbop LbopEngine::compute_lbop(VertexId s, VertexId e) const {
  const std::size_t d = g_.dims();
  Lbop result{CostVector::zero(d), {}};
  if (s == e) return result;
  const SubsetId ps = layout_.subset_of(s), pe = layout_.subset_of(e);
  CostVector &phi = result.phi;

  if (ps == pe) {
    Row hold;
    const double *values = nullptr;
    std::size_t at = 0;
    if (layout_.is_entry[s]) {
      values = inner_.entry_row(ps, inner_.entry_pos(s));
      at = inner_.member_pos(e);
    } else if (layout_.is_exit[e]) {
      values = inner_.exit_col(pe, inner_.exit_pos(e));
      at = inner_.member_pos(s);
    } else {
      values = row_from(s, hold);
      at = inner_.member_pos(e);
    }
    for (std::size_t x = 0; x < d; ++x) phi[x] = values[at * d + x];
    return result;
  }

  // Every path into V_e passes through one of its entries.
  const auto &entries = layout_.entries[pe];
  const std::size_t ei = inner_.member_pos(e);
  std::vector<std::pair<CostVector, CostVector>> relays;
  relays.reserve(entries.size());
  for (VertexId i : entries) {
    CostVector to_i = CostVector::infinite(d);
    if (layout_.is_border(s)) {
      to_i = *inter_.cell(s, i);
    } else {
      const std::size_t si = inner_.member_pos(s);
      std::vector<std::pair<CostVector, CostVector>> via_exits;
      for (VertexId j : layout_.exits[ps])
        via_exits.emplace_back(
            CostVector(std::span<const double>(inner_.exit_col(ps, inner_.exit_pos(j)) + si * d, d)),
            *inter_.cell(j, i));
      to_i = combine_min(via_exits, d);
    }
    relays.emplace_back(to_i,
                        CostVector(std::span<const double>(inner_.entry_row(pe, inner_.entry_pos(i)) + ei * d, d)));
  }
  phi = combine_min(relays, d);
  return result;
}

std::vector<CostVector> LbopEngine::from_source(VertexId s, std::span<const VertexId> targets) const {
  const std::size_t d = g_.dims();
  const SubsetId ps = layout_.subset_of(s);
  std::vector<CostVector> out(targets.size(), CostVector::infinite(d));
  std::vector<double> entries_phi;
  bool have_entries = false;
  Row hold;
  const double *own_row = nullptr;

  for (std::size_t t = 0; t < targets.size(); ++t) {
    const VertexId v = targets[t];
    CostVector &phi = out[t];
    if (v == s) {
      phi = CostVector::zero(d);
      continue;
    }
    const SubsetId pv = layout_.subset_of(v);
    if (pv == ps) {
      const double *values = nullptr;
      std::size_t at = 0;
      if (!layout_.is_entry[s] && layout_.is_exit[v]) {
        values = inner_.exit_col(pv, inner_.exit_pos(v));
        at = inner_.member_pos(s);
      } else {
        if (!own_row) own_row = row_from(s, hold);
        values = own_row;
        at = inner_.member_pos(v);
      }
      for (std::size_t x = 0; x < d; ++x) phi[x] = values[at * d + x];
      continue;
    }
    if (!have_entries) {
      entries_phi = to_entries(s);
      have_entries = true;
    }
    const std::size_t vi = inner_.member_pos(v);
    for (VertexId i : layout_.entries[pv]) {
      const double *left = entries_phi.data() + inter_.col_of(i) * d;
      const double *right = inner_.entry_row(pv, inner_.entry_pos(i)) + vi * d;
      for (std::size_t x = 0; x < d; ++x) phi[x] = std::min(phi[x], left[x] + right[x]);
    }
  }
  return out;
}

std::vector<CostVector> LbopEngine::to_target(std::span<const VertexId> sources, VertexId e) const {
  const std::size_t d = g_.dims();
  const SubsetId pe = layout_.subset_of(e);
  std::vector<CostVector> out(sources.size(), CostVector::infinite(d));
  std::vector<double> borders_phi;
  bool have_borders = false;
  Row hold;
  const double *own_col = nullptr;

  for (std::size_t t = 0; t < sources.size(); ++t) {
    const VertexId v = sources[t];
    CostVector &phi = out[t];
    if (v == e) {
      phi = CostVector::zero(d);
      continue;
    }
    const SubsetId pv = layout_.subset_of(v);
    if (pv == pe) {
      const double *values = nullptr;
      std::size_t at = 0;
      if (!layout_.is_exit[e] && layout_.is_entry[v]) {
        values = inner_.entry_row(pv, inner_.entry_pos(v));
        at = inner_.member_pos(e);
      } else {
        if (!own_col) own_col = col_to(e, hold);
        values = own_col;
        at = inner_.member_pos(v);
      }
      for (std::size_t x = 0; x < d; ++x) phi[x] = values[at * d + x];
      continue;
    }
    if (!have_borders) {
      borders_phi = from_borders(e);
      have_borders = true;
    }
    if (layout_.is_border(v)) {
      const double *cell = borders_phi.data() + inter_.row_of(v) * d;
      for (std::size_t x = 0; x < d; ++x) phi[x] = cell[x];
      continue;
    }
    const std::size_t vi = inner_.member_pos(v);
    for (VertexId j : layout_.exits[pv]) {
      const double *left = inner_.exit_col(pv, inner_.exit_pos(j)) + vi * d;
      const double *right = borders_phi.data() + inter_.row_of(j) * d;
      for (std::size_t x = 0; x < d; ++x) phi[x] = std::min(phi[x], left[x] + right[x]);
    }
  }
  return out;
}

} // namespace mcroute
