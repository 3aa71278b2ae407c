#include "mcroute/partition.hpp"

#include <algorithm>
#include <cmath>
#include <istream>
#include <numeric>
#include <ostream>
#include <queue>
#include <random>
#include <string>

#include "mcroute/error.hpp"

namespace mcroute {

std::vector<VertexId> PartitionLayout::all_entries() const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < is_entry.size(); ++v)
    if (is_entry[v]) out.push_back(v);
  return out;
}

std::vector<VertexId> PartitionLayout::all_exits() const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < is_exit.size(); ++v)
    if (is_exit[v]) out.push_back(v);
  return out;
}

std::vector<VertexId> PartitionLayout::borders() const {
  std::vector<VertexId> out;
  for (VertexId v = 0; v < is_exit.size(); ++v)
    if (is_border(v)) out.push_back(v);
  return out;
}

std::size_t PartitionLayout::largest_subset() const {
  std::size_t best = 0;
  for (const auto &m : members) best = std::max(best, m.size());
  return best;
}

PartitionLayout compute_borders(const MultiCostGraph &g, std::vector<SubsetId> assignment,
                                std::size_t k) {
  const std::size_t n = g.vertex_count();
  if (assignment.size() != n)
    throw PartitionError("assignment covers " + std::to_string(assignment.size()) + " of " +
                         std::to_string(n) + " vertices");
  if (k == 0 && n > 0) k = *std::max_element(assignment.begin(), assignment.end()) + std::size_t{1};
  PartitionLayout layout;
  layout.k = k;
  layout.members.resize(k);
  layout.entries.resize(k);
  layout.exits.resize(k);
  layout.is_entry.assign(n, 0);
  layout.is_exit.assign(n, 0);
  for (VertexId v = 0; v < n; ++v) {
    if (assignment[v] >= k)
      throw PartitionError("vertex " + std::to_string(v) + " assigned to subset " +
                           std::to_string(assignment[v]) + " >= k=" + std::to_string(k));
    layout.members[assignment[v]].push_back(v);
  }
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    VertexId u = g.source(e), v = g.target(e);
    if (assignment[u] != assignment[v]) {
      layout.is_exit[u] = 1;
      layout.is_entry[v] = 1;
      ++layout.cut_edges;
    }
  }
  for (VertexId v = 0; v < n; ++v) {
    if (layout.is_entry[v]) layout.entries[assignment[v]].push_back(v);
    if (layout.is_exit[v]) layout.exits[assignment[v]].push_back(v);
  }
  layout.assignment = std::move(assignment);
  return layout;
}

namespace {

// Undirected weighted graph used on every level of the hierarchy.
struct LevelGraph {
  std::vector<std::int64_t> vertex_weight;
  std::vector<std::size_t> offsets;
  std::vector<VertexId> adjacency;
  std::vector<std::int64_t> edge_weight;

  std::size_t size() const { return vertex_weight.size(); }
};

LevelGraph from_multicost(const MultiCostGraph &g) {
  const std::size_t n = g.vertex_count();
  std::vector<std::pair<std::uint64_t, std::int64_t>> links;
  links.reserve(2 * g.edge_count());
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    std::uint64_t u = g.source(e), v = g.target(e);
    links.emplace_back((u << 32) | v, 1);
    links.emplace_back((v << 32) | u, 1);
  }
  std::sort(links.begin(), links.end());
  LevelGraph lg;
  lg.vertex_weight.assign(n, 1);
  lg.offsets.assign(n + 1, 0);
  for (std::size_t i = 0; i < links.size();) {
    std::size_t j = i;
    std::int64_t w = 0;
    while (j < links.size() && links[j].first == links[i].first) w += links[j++].second;
    VertexId u = static_cast<VertexId>(links[i].first >> 32);
    lg.adjacency.push_back(static_cast<VertexId>(links[i].first & 0xffffffffu));
    lg.edge_weight.push_back(w);
    ++lg.offsets[u + 1];
    i = j;
  }
  std::partial_sum(lg.offsets.begin(), lg.offsets.end(), lg.offsets.begin());
  return lg;
}

struct Coarsening {
  LevelGraph coarse;
  std::vector<VertexId> fine_to_coarse;
};

Coarsening coarsen(const LevelGraph &g, std::int64_t max_weight, std::mt19937_64 &rng) {
  const std::size_t n = g.size();
  std::vector<VertexId> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);

  std::vector<VertexId> mate(n, kNoVertex);
  for (VertexId v : order) {
    if (mate[v] != kNoVertex) continue;
    VertexId best = kNoVertex;
    std::int64_t best_w = -1;
    for (std::size_t i = g.offsets[v]; i < g.offsets[v + 1]; ++i) {
      VertexId u = g.adjacency[i];
      if (mate[u] != kNoVertex || g.vertex_weight[u] + g.vertex_weight[v] > max_weight) continue;
      if (g.edge_weight[i] > best_w || (g.edge_weight[i] == best_w && u < best)) {
        best = u;
        best_w = g.edge_weight[i];
      }
    }
    if (best == kNoVertex) {
      mate[v] = v;
    } else {
      mate[v] = best;
      mate[best] = v;
    }
  }

  Coarsening c;
  c.fine_to_coarse.assign(n, kNoVertex);
  VertexId next = 0;
  for (VertexId v = 0; v < n; ++v) {
    if (c.fine_to_coarse[v] != kNoVertex) continue;
    c.fine_to_coarse[v] = next;
    c.fine_to_coarse[mate[v]] = next;
    ++next;
  }
  const std::size_t cn = next;
  c.coarse.vertex_weight.assign(cn, 0);
  for (VertexId v = 0; v < n; ++v) c.coarse.vertex_weight[c.fine_to_coarse[v]] += g.vertex_weight[v];

  std::vector<std::pair<std::uint64_t, std::int64_t>> links;
  links.reserve(g.adjacency.size());
  for (VertexId v = 0; v < n; ++v)
    for (std::size_t i = g.offsets[v]; i < g.offsets[v + 1]; ++i) {
      std::uint64_t cu = c.fine_to_coarse[v], cv = c.fine_to_coarse[g.adjacency[i]];
      if (cu != cv) links.emplace_back((cu << 32) | cv, g.edge_weight[i]);
    }
  std::sort(links.begin(), links.end());
  c.coarse.offsets.assign(cn + 1, 0);
  for (std::size_t i = 0; i < links.size();) {
    std::size_t j = i;
    std::int64_t w = 0;
    while (j < links.size() && links[j].first == links[i].first) w += links[j++].second;
    VertexId u = static_cast<VertexId>(links[i].first >> 32);
    c.coarse.adjacency.push_back(static_cast<VertexId>(links[i].first & 0xffffffffu));
    c.coarse.edge_weight.push_back(w);
    ++c.coarse.offsets[u + 1];
    i = j;
  }
  std::partial_sum(c.coarse.offsets.begin(), c.coarse.offsets.end(), c.coarse.offsets.begin());
  return c;
}

// BFS sweep order starting from a pseudo-peripheral vertex of each component.
std::vector<VertexId> sweep_order(const LevelGraph &g) {
  const std::size_t n = g.size();
  std::vector<VertexId> order;
  order.reserve(n);
  std::vector<char> seen(n, 0);
  std::vector<VertexId> queue;
  auto bfs = [&](VertexId root, std::vector<char> &mark, std::vector<VertexId> &out) {
    out.clear();
    out.push_back(root);
    mark[root] = 1;
    for (std::size_t head = 0; head < out.size(); ++head) {
      VertexId v = out[head];
      for (std::size_t i = g.offsets[v]; i < g.offsets[v + 1]; ++i)
        if (!mark[g.adjacency[i]]) {
          mark[g.adjacency[i]] = 1;
          out.push_back(g.adjacency[i]);
        }
    }
  };
  for (VertexId v = 0; v < n; ++v) {
    if (seen[v]) continue;
    std::vector<char> probe = seen;
    bfs(v, probe, queue);
    VertexId far = queue.back();
    bfs(far, seen, queue);
    order.insert(order.end(), queue.begin(), queue.end());
  }
  return order;
}

std::vector<SubsetId> grow_regions(const LevelGraph &g, std::size_t k) {
  const std::size_t n = g.size();
  const std::int64_t total = std::accumulate(g.vertex_weight.begin(), g.vertex_weight.end(), std::int64_t{0});
  std::vector<SubsetId> part(n, static_cast<SubsetId>(k));
  const auto order = sweep_order(g);
  std::size_t cursor = 0;
  std::int64_t remaining = total;
  std::vector<std::int64_t> gain(n, 0);

  for (SubsetId p = 0; p + 1 < k; ++p) {
    const std::int64_t target = remaining / static_cast<std::int64_t>(k - p);
    std::int64_t weight = 0;
    using Item = std::pair<std::int64_t, VertexId>;
    auto cmp = [](const Item &a, const Item &b) {
      return a.first != b.first ? a.first < b.first : a.second > b.second;
    };
    std::priority_queue<Item, std::vector<Item>, decltype(cmp)> frontier(cmp);
    while (weight < target) {
      VertexId v = kNoVertex;
      while (!frontier.empty()) {
        auto [g_v, cand] = frontier.top();
        frontier.pop();
        if (part[cand] == k && g_v == gain[cand]) {
          v = cand;
          break;
        }
      }
      if (v == kNoVertex) {
        while (cursor < order.size() && part[order[cursor]] != k) ++cursor;
        if (cursor == order.size()) break;
        v = order[cursor];
      }
      part[v] = p;
      weight += g.vertex_weight[v];
      for (std::size_t i = g.offsets[v]; i < g.offsets[v + 1]; ++i) {
        VertexId u = g.adjacency[i];
        if (part[u] != k) continue;
        gain[u] += g.edge_weight[i];
        frontier.emplace(gain[u], u);
      }
    }
    for (VertexId v = 0; v < n; ++v)
      if (part[v] == k) gain[v] = 0;
    remaining -= weight;
  }
  for (auto &p : part)
    if (p == k) p = static_cast<SubsetId>(k - 1);
  return part;
}

void refine(const LevelGraph &g, std::vector<SubsetId> &part, std::size_t k, std::int64_t max_w,
            std::int64_t min_w, std::size_t passes) {
  const std::size_t n = g.size();
  std::vector<std::int64_t> pw(k, 0);
  for (VertexId v = 0; v < n; ++v) pw[part[v]] += g.vertex_weight[v];
  std::vector<std::int64_t> conn(k, 0);
  std::vector<SubsetId> touched;

  auto best_move = [&](VertexId v, bool force) -> std::pair<SubsetId, std::int64_t> {
    touched.clear();
    const SubsetId own = part[v];
    for (std::size_t i = g.offsets[v]; i < g.offsets[v + 1]; ++i) {
      SubsetId q = part[g.adjacency[i]];
      if (conn[q] == 0) touched.push_back(q);
      conn[q] += g.edge_weight[i];
    }
    const std::int64_t w = g.vertex_weight[v];
    SubsetId best = own;
    std::int64_t best_gain = 0;
    bool found = false;
    for (SubsetId q : touched) {
      if (q == own || pw[q] + w > max_w) continue;
      std::int64_t gain = conn[q] - conn[own];
      bool better = !found || gain > best_gain || (gain == best_gain && q < best);
      if (better) {
        best = q;
        best_gain = gain;
        found = true;
      }
    }
    for (SubsetId q : touched) conn[q] = 0;
    if (!found) return {own, 0};
    if (pw[own] - w < std::max<std::int64_t>(min_w, 1) && !force) return {own, 0};
    if (force) return {best, best_gain};
    if (best_gain > 0 || (best_gain == 0 && pw[best] + w < pw[own])) return {best, best_gain};
    return {own, 0};
  };

  for (std::size_t pass = 0; pass < passes; ++pass) {
    std::size_t moved = 0;
    for (VertexId v = 0; v < n; ++v) {
      auto [q, gain] = best_move(v, false);
      if (q == part[v]) continue;
      pw[part[v]] -= g.vertex_weight[v];
      pw[q] += g.vertex_weight[v];
      part[v] = q;
      ++moved;
    }
    // Drain overweight subsets through their boundary.
    for (VertexId v = 0; v < n; ++v) {
      if (pw[part[v]] <= max_w) continue;
      auto [q, gain] = best_move(v, true);
      if (q == part[v]) continue;
      pw[part[v]] -= g.vertex_weight[v];
      pw[q] += g.vertex_weight[v];
      part[v] = q;
      ++moved;
    }
    if (moved == 0) break;
  }
}

// Refills empty subsets with the highest-degree boundary vertex of the
// largest subset.
void repair_empty(const MultiCostGraph &g, std::vector<SubsetId> &part, std::size_t k) {
  for (;;) {
    std::vector<std::size_t> size(k, 0);
    for (auto p : part) ++size[p];
    auto empty = std::find(size.begin(), size.end(), std::size_t{0});
    if (empty == size.end()) return;
    const SubsetId target = static_cast<SubsetId>(empty - size.begin());
    const SubsetId largest = static_cast<SubsetId>(std::max_element(size.begin(), size.end()) - size.begin());
    VertexId pick = kNoVertex, fallback = kNoVertex;
    std::size_t pick_deg = 0, fallback_deg = 0;
    for (VertexId v = 0; v < part.size(); ++v) {
      if (part[v] != largest) continue;
      std::size_t deg = g.out_degree(v) + g.in_degree(v);
      bool boundary = false;
      for (EdgeId e : g.out_edges(v)) boundary |= part[g.target(e)] != largest;
      for (EdgeId e : g.in_edges(v)) boundary |= part[g.source(e)] != largest;
      if (boundary && (pick == kNoVertex || deg > pick_deg)) {
        pick = v;
        pick_deg = deg;
      }
      if (fallback == kNoVertex || deg > fallback_deg) {
        fallback = v;
        fallback_deg = deg;
      }
    }
    part[pick != kNoVertex ? pick : fallback] = target;
  }
}

} // namespace

PartitionLayout partition_graph(const MultiCostGraph &g, std::size_t k, std::uint64_t seed,
                                const PartitionOptions &options) {
  const std::size_t n = g.vertex_count();
  if (k < 1) throw PartitionError("k must be at least 1");
  if (k > n)
    throw PartitionError("k=" + std::to_string(k) + " exceeds the vertex count " + std::to_string(n));
  if (k == 1) return compute_borders(g, std::vector<SubsetId>(n, 0), 1);
  if (k == n) {
    std::vector<SubsetId> identity(n);
    std::iota(identity.begin(), identity.end(), 0);
    return compute_borders(g, std::move(identity), k);
  }

  std::mt19937_64 rng(seed);
  const double ideal = static_cast<double>(n) / static_cast<double>(k);
  const auto max_w = static_cast<std::int64_t>(std::ceil(ideal * (1.0 + options.imbalance)));
  const auto min_w = static_cast<std::int64_t>(std::floor(ideal * (1.0 - options.imbalance)));
  const std::int64_t max_vertex_weight = std::max<std::int64_t>(1, static_cast<std::int64_t>(ideal / 4));

  std::vector<LevelGraph> levels;
  std::vector<std::vector<VertexId>> maps;
  levels.push_back(from_multicost(g));
  const std::size_t coarsest_target = std::max<std::size_t>(20 * k, 64);
  while (levels.back().size() > coarsest_target) {
    auto c = coarsen(levels.back(), max_vertex_weight, rng);
    if (c.coarse.size() > 0.95 * static_cast<double>(levels.back().size())) break;
    maps.push_back(std::move(c.fine_to_coarse));
    levels.push_back(std::move(c.coarse));
  }

  std::vector<SubsetId> part = grow_regions(levels.back(), k);
  refine(levels.back(), part, k, max_w, min_w, options.refinement_passes);
  for (std::size_t level = levels.size() - 1; level-- > 0;) {
    const auto &map = maps[level];
    std::vector<SubsetId> finer(levels[level].size());
    for (VertexId v = 0; v < finer.size(); ++v) finer[v] = part[map[v]];
    part = std::move(finer);
    refine(levels[level], part, k, max_w, min_w, options.refinement_passes);
  }
  repair_empty(g, part, k);
  return compute_borders(g, std::move(part), k);
}

PartitionLayout load_partition(std::istream &in, const MultiCostGraph &g) {
  const std::size_t n = g.vertex_count();
  std::vector<SubsetId> assignment;
  assignment.reserve(n);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto hash = raw.find('#');
    if (hash != std::string::npos) raw.resize(hash);
    auto first = raw.find_first_not_of(" \t\r");
    if (first == std::string::npos) continue;
    auto last = raw.find_last_not_of(" \t\r");
    std::string token = raw.substr(first, last - first + 1);
    if (token.find_first_not_of("0123456789") != std::string::npos)
      throw ParseError(line_no, "invalid subset id '" + token + "'");
    if (assignment.size() == n) throw ParseError(line_no, "more lines than the " + std::to_string(n) + " vertices");
    unsigned long long id = 0;
    try {
      id = std::stoull(token);
    } catch (const std::exception &) {
      throw ParseError(line_no, "invalid subset id '" + token + "'");
    }
    if (id >= n) throw ParseError(line_no, "subset id " + token + " out of range [0," + std::to_string(n) + ")");
    assignment.push_back(static_cast<SubsetId>(id));
  }
  if (assignment.size() != n)
    throw ParseError(line_no, "expected " + std::to_string(n) + " subset ids, found " +
                                  std::to_string(assignment.size()));
  auto layout = compute_borders(g, std::move(assignment));
  for (std::size_t p = 0; p < layout.k; ++p)
    if (layout.members[p].empty())
      throw PartitionError("subset " + std::to_string(p) + " is empty (ids must be dense)");
  return layout;
}

void save_partition(std::ostream &out, const PartitionLayout &layout) {
  for (SubsetId p : layout.assignment) out << p << '\n';
}

} // namespace mcroute
