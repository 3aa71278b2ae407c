#include "mcroute/graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <istream>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <string_view>
#include <unordered_map>
#include <unordered_set>

#include "mcroute/error.hpp"

namespace mcroute {

MultiCostGraph MultiCostGraph::from_edges(std::size_t vertex_count, std::size_t dims,
                                          std::vector<EdgeInput> edges) {
  if (dims == 0 || dims > kMaxDims)
    throw GraphError("cost dimensionality must be in [1," + std::to_string(kMaxDims) + "], got " +
                     std::to_string(dims));
  if (vertex_count >= kNoVertex) throw GraphError("too many vertices");

  for (const auto &e : edges) {
    if (e.source >= vertex_count || e.target >= vertex_count)
      throw GraphError("edge " + std::to_string(e.source) + "->" + std::to_string(e.target) +
                       " references a vertex outside [0," + std::to_string(vertex_count) + ")");
    if (e.source == e.target) throw GraphError("self-loop at vertex " + std::to_string(e.source));
    if (e.cost.dims() != dims)
      throw GraphError("edge " + std::to_string(e.source) + "->" + std::to_string(e.target) +
                       " has " + std::to_string(e.cost.dims()) + " costs, expected " +
                       std::to_string(dims));
    for (std::size_t x = 0; x < dims; ++x)
      if (!(e.cost[x] >= 0.0) || !std::isfinite(e.cost[x]))
        throw GraphError("edge " + std::to_string(e.source) + "->" + std::to_string(e.target) +
                         " has a negative or non-finite cost");
  }

  std::stable_sort(edges.begin(), edges.end(), [](const EdgeInput &a, const EdgeInput &b) {
    return a.source != b.source ? a.source < b.source : a.target < b.target;
  });
  for (std::size_t i = 1; i < edges.size(); ++i)
    if (edges[i].source == edges[i - 1].source && edges[i].target == edges[i - 1].target)
      throw GraphError("duplicate edge " + std::to_string(edges[i].source) + "->" +
                       std::to_string(edges[i].target));

  MultiCostGraph g;
  g.dims_ = dims;
  const std::size_t m = edges.size();
  g.sources_.resize(m);
  g.targets_.resize(m);
  g.costs_.resize(m * dims);
  g.out_offsets_.assign(vertex_count + 1, 0);
  g.in_offsets_.assign(vertex_count + 1, 0);
  for (std::size_t i = 0; i < m; ++i) {
    g.sources_[i] = edges[i].source;
    g.targets_[i] = edges[i].target;
    for (std::size_t x = 0; x < dims; ++x) {
      double c = edges[i].cost[x];
      g.costs_[i * dims + x] = c;
      if (c != std::floor(c)) g.integral_ = false;
    }
    ++g.out_offsets_[edges[i].source + 1];
    ++g.in_offsets_[edges[i].target + 1];
  }
  std::partial_sum(g.out_offsets_.begin(), g.out_offsets_.end(), g.out_offsets_.begin());
  std::partial_sum(g.in_offsets_.begin(), g.in_offsets_.end(), g.in_offsets_.begin());
  g.in_edges_.resize(m);
  std::vector<EdgeId> fill(g.in_offsets_.begin(), g.in_offsets_.end() - 1);
  // Edges are visited in (source, target) order, so each in-list ends up
  // sorted by source.
  for (EdgeId e = 0; e < m; ++e) g.in_edges_[fill[g.targets_[e]]++] = e;
  return g;
}

std::optional<EdgeId> MultiCostGraph::find_edge(VertexId from, VertexId to) const noexcept {
  if (from >= vertex_count()) return std::nullopt;
  auto first = targets_.begin() + out_offsets_[from];
  auto last = targets_.begin() + out_offsets_[from + 1];
  auto it = std::lower_bound(first, last, to);
  if (it == last || *it != to) return std::nullopt;
  return static_cast<EdgeId>(it - targets_.begin());
}

Path make_path(const MultiCostGraph &g, std::vector<VertexId> vertices) {
  Path p;
  p.cost = CostVector::zero(g.dims());
  for (std::size_t i = 1; i < vertices.size(); ++i) {
    auto e = g.find_edge(vertices[i - 1], vertices[i]);
    if (!e)
      throw GraphError("no edge " + std::to_string(vertices[i - 1]) + "->" +
                       std::to_string(vertices[i]) + " on path");
    p.cost += g.cost(*e);
  }
  p.vertices = std::move(vertices);
  return p;
}

bool is_simple(std::span<const VertexId> vertices) {
  std::vector<VertexId> sorted(vertices.begin(), vertices.end());
  std::sort(sorted.begin(), sorted.end());
  return std::adjacent_find(sorted.begin(), sorted.end()) == sorted.end();
}

Path remove_cycles(const MultiCostGraph &g, const Path &walk) {
  std::vector<VertexId> out;
  std::unordered_map<VertexId, std::size_t> position;
  for (VertexId v : walk.vertices) {
    auto it = position.find(v);
    if (it != position.end()) {
      for (std::size_t i = it->second + 1; i < out.size(); ++i) position.erase(out[i]);
      out.resize(it->second + 1);
      continue;
    }
    position.emplace(v, out.size());
    out.push_back(v);
  }
  return make_path(g, std::move(out));
}

namespace {

std::string_view strip_comment(std::string_view line) {
  auto hash = line.find('#');
  if (hash != std::string_view::npos) line = line.substr(0, hash);
  return line;
}

std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> tokens;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    std::size_t start = i;
    while (i < line.size() && !std::isspace(static_cast<unsigned char>(line[i]))) ++i;
    if (i > start) tokens.push_back(line.substr(start, i - start));
  }
  return tokens;
}

template <typename T>
T parse_number(std::string_view token, std::size_t line, const char *what) {
  T value{};
  auto [ptr, ec] = std::from_chars(token.data(), token.data() + token.size(), value);
  if (ec != std::errc() || ptr != token.data() + token.size())
    throw ParseError(line, std::string("invalid ") + what + " '" + std::string(token) + "'");
  return value;
}

} // namespace

MultiCostGraph load_graph(std::istream &in, const LoadOptions &options, LoadReport *report) {
  std::string raw;
  std::size_t line_no = 0;
  std::size_t n = 0, m = 0, d = 0;
  bool directed = true;
  bool have_header = false;
  std::vector<EdgeInput> edges;
  std::unordered_set<std::uint64_t> seen;
  std::size_t edge_lines = 0;
  std::size_t collapsed = 0;

  auto add = [&](VertexId u, VertexId v, const CostVector &c, std::size_t line) {
    std::uint64_t key = (std::uint64_t(u) << 32) | v;
    if (!seen.insert(key).second) {
      if (!options.collapse_duplicates)
        throw ParseError(line, "duplicate edge " + std::to_string(u) + "->" + std::to_string(v));
      ++collapsed;
      return;
    }
    edges.push_back({u, v, c});
  };

  while (std::getline(in, raw)) {
    ++line_no;
    auto tokens = split_ws(strip_comment(raw));
    if (tokens.empty()) continue;
    if (!have_header) {
      if (tokens.size() != 3 && tokens.size() != 4)
        throw ParseError(line_no, "header must be 'n m d [directed|undirected]'");
      n = parse_number<std::size_t>(tokens[0], line_no, "vertex count");
      m = parse_number<std::size_t>(tokens[1], line_no, "edge count");
      d = parse_number<std::size_t>(tokens[2], line_no, "dimensionality");
      if (d == 0 || d > kMaxDims)
        throw ParseError(line_no, "dimensionality must be in [1," + std::to_string(kMaxDims) + "]");
      if (tokens.size() == 4) {
        if (tokens[3] == "directed")
          directed = true;
        else if (tokens[3] == "undirected")
          directed = false;
        else
          throw ParseError(line_no, "expected 'directed' or 'undirected', got '" +
                                        std::string(tokens[3]) + "'");
      }
      have_header = true;
      edges.reserve(directed ? m : 2 * m);
      continue;
    }
    if (edge_lines == m) throw ParseError(line_no, "more than the declared " + std::to_string(m) + " edges");
    if (tokens.size() != 2 + d)
      throw ParseError(line_no, "expected " + std::to_string(2 + d) + " fields (u v and " +
                                    std::to_string(d) + " costs), got " + std::to_string(tokens.size()));
    auto u = parse_number<std::uint64_t>(tokens[0], line_no, "vertex id");
    auto v = parse_number<std::uint64_t>(tokens[1], line_no, "vertex id");
    if (u >= n || v >= n)
      throw ParseError(line_no, "vertex id out of range [0," + std::to_string(n) + ")");
    if (u == v) throw ParseError(line_no, "self-loop at vertex " + std::to_string(u));
    CostVector c(d);
    for (std::size_t x = 0; x < d; ++x) {
      double w = parse_number<double>(tokens[2 + x], line_no, "cost");
      if (w < 0.0) throw ParseError(line_no, "negative cost " + std::string(tokens[2 + x]));
      if (!std::isfinite(w)) throw ParseError(line_no, "non-finite cost");
      c[x] = w;
    }
    add(static_cast<VertexId>(u), static_cast<VertexId>(v), c, line_no);
    if (!directed) add(static_cast<VertexId>(v), static_cast<VertexId>(u), c, line_no);
    ++edge_lines;
  }
  if (!have_header) throw ParseError(0, "empty graph file (missing header)");
  if (edge_lines != m)
    throw ParseError(line_no, "declared " + std::to_string(m) + " edges but found " +
                                  std::to_string(edge_lines));
  if (report) report->duplicates_collapsed = collapsed;
  return MultiCostGraph::from_edges(n, d, std::move(edges));
}

MultiCostGraph load_graph_file(const std::string &path, const LoadOptions &options, LoadReport *report) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open graph file '" + path + "'");
  return load_graph(in, options, report);
}

namespace {

void append_number(std::string &out, double value) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, value);
  out.append(buf, res.ptr);
}

std::string canonical_text(const MultiCostGraph &g) {
  std::string out;
  out.reserve(g.edge_count() * (8 + 4 * g.dims()) + 32);
  out += std::to_string(g.vertex_count()) + ' ' + std::to_string(g.edge_count()) + ' ' +
         std::to_string(g.dims()) + " directed\n";
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    out += std::to_string(g.source(e));
    out += ' ';
    out += std::to_string(g.target(e));
    for (std::size_t x = 0; x < g.dims(); ++x) {
      out += ' ';
      append_number(out, g.cost(e, x));
    }
    out += '\n';
  }
  return out;
}

} // namespace

void save_graph(std::ostream &out, const MultiCostGraph &g) { out << canonical_text(g); }

void save_graph_file(const std::string &path, const MultiCostGraph &g) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write graph file '" + path + "'");
  save_graph(out, g);
}

std::uint64_t graph_hash(const MultiCostGraph &g) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char c : canonical_text(g)) {
    h ^= c;
    h *= 1099511628211ULL;
  }
  return h;
}

std::vector<std::string> load_vertex_labels(std::istream &in, std::size_t vertex_count) {
  std::vector<std::string> labels(vertex_count);
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    auto tokens = split_ws(strip_comment(raw));
    if (tokens.empty()) continue;
    if (tokens.size() != 2) throw ParseError(line_no, "expected 'id label'");
    auto id = parse_number<std::size_t>(tokens[0], line_no, "vertex id");
    if (id >= vertex_count) throw ParseError(line_no, "vertex id out of range");
    labels[id] = std::string(tokens[1]);
  }
  return labels;
}

namespace {

CostVector draw_costs(std::mt19937_64 &rng, std::size_t d, CostRange costs) {
  std::uniform_int_distribution<std::int64_t> dist(costs.lo, costs.hi);
  CostVector c(d);
  for (std::size_t x = 0; x < d; ++x) c[x] = static_cast<double>(dist(rng));
  return c;
}

void check_costs(std::size_t d, CostRange costs) {
  if (d == 0 || d > kMaxDims) throw GraphError("dimensionality must be in [1,8]");
  if (costs.lo < 0 || costs.hi < costs.lo) throw GraphError("invalid cost range");
}

} // namespace

MultiCostGraph generate_random_graph(std::size_t n, std::size_t m, std::size_t d, CostRange costs,
                                     std::uint64_t seed) {
  check_costs(d, costs);
  const std::size_t max_edges = n < 2 ? 0 : n * (n - 1);
  if (m > max_edges)
    throw GraphError("infeasible edge count " + std::to_string(m) + " for " + std::to_string(n) +
                     " vertices (max " + std::to_string(max_edges) + ")");
  std::mt19937_64 rng(seed);
  std::vector<std::pair<VertexId, VertexId>> pairs;
  if (2 * m > max_edges) {
    pairs.reserve(max_edges);
    for (VertexId u = 0; u < n; ++u)
      for (VertexId v = 0; v < n; ++v)
        if (u != v) pairs.emplace_back(u, v);
    std::shuffle(pairs.begin(), pairs.end(), rng);
    pairs.resize(m);
  } else {
    std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
    std::unordered_set<std::uint64_t> seen;
    pairs.reserve(m);
    while (pairs.size() < m) {
      VertexId u = pick(rng), v = pick(rng);
      if (u == v) continue;
      if (seen.insert((std::uint64_t(u) << 32) | v).second) pairs.emplace_back(u, v);
    }
  }
  std::sort(pairs.begin(), pairs.end());
  std::vector<EdgeInput> edges;
  edges.reserve(m);
  for (auto [u, v] : pairs) edges.push_back({u, v, draw_costs(rng, d, costs)});
  return MultiCostGraph::from_edges(n, d, std::move(edges));
}

namespace {

struct DisjointSets {
  std::vector<VertexId> parent;
  explicit DisjointSets(std::size_t n) : parent(n) { std::iota(parent.begin(), parent.end(), 0); }
  VertexId find(VertexId v) {
    while (parent[v] != v) v = parent[v] = parent[parent[v]];
    return v;
  }
  bool unite(VertexId a, VertexId b) {
    a = find(a);
    b = find(b);
    if (a == b) return false;
    parent[std::max(a, b)] = std::min(a, b);
    return true;
  }
};

struct Candidate {
  double length;
  VertexId u, v;
  bool operator<(const Candidate &o) const {
    if (length != o.length) return length < o.length;
    return u != o.u ? u < o.u : v < o.v;
  }
};

// Unique undirected k-nearest-neighbour links, sorted by length.
std::vector<Candidate> knn_candidates(const std::vector<double> &xs, const std::vector<double> &ys,
                                      std::size_t k) {
  const std::size_t n = xs.size();
  const std::size_t side = std::max<std::size_t>(1, static_cast<std::size_t>(std::sqrt(n / 2.0)));
  std::vector<std::vector<VertexId>> cells(side * side);
  auto cell_of = [&](double c) { return std::min(side - 1, static_cast<std::size_t>(c * side)); };
  for (VertexId v = 0; v < n; ++v) cells[cell_of(ys[v]) * side + cell_of(xs[v])].push_back(v);

  std::vector<Candidate> out;
  out.reserve(n * k);
  std::vector<std::pair<double, VertexId>> near;
  for (VertexId v = 0; v < n; ++v) {
    const std::size_t cx = cell_of(xs[v]), cy = cell_of(ys[v]);
    near.clear();
    for (std::size_t ring = 0;; ++ring) {
      const auto lo_x = cx >= ring ? cx - ring : 0, hi_x = std::min(side - 1, cx + ring);
      const auto lo_y = cy >= ring ? cy - ring : 0, hi_y = std::min(side - 1, cy + ring);
      for (std::size_t y = lo_y; y <= hi_y; ++y)
        for (std::size_t x = lo_x; x <= hi_x; ++x) {
          if (std::max(x > cx ? x - cx : cx - x, y > cy ? y - cy : cy - y) != ring) continue;
          for (VertexId w : cells[y * side + x]) {
            if (w == v) continue;
            double dx = xs[v] - xs[w], dy = ys[v] - ys[w];
            near.emplace_back(std::sqrt(dx * dx + dy * dy), w);
          }
        }
      // Everything within `ring` cells of v has been seen; points closer than
      // ring/side cannot be missing.
      const bool covers_all = lo_x == 0 && lo_y == 0 && hi_x == side - 1 && hi_y == side - 1;
      if (near.size() >= k) {
        std::nth_element(near.begin(), near.begin() + (k - 1), near.end());
        if (near[k - 1].first <= static_cast<double>(ring) / side || covers_all) break;
      } else if (covers_all) {
        break;
      }
    }
    std::sort(near.begin(), near.end());
    for (std::size_t i = 0; i < std::min(k, near.size()); ++i) {
      VertexId w = near[i].second;
      out.push_back({near[i].first, std::min(v, w), std::max(v, w)});
    }
  }
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [](const Candidate &a, const Candidate &b) { return a.u == b.u && a.v == b.v; }),
            out.end());
  return out;
}

} // namespace

MultiCostGraph generate_road_graph(std::size_t n, std::size_t m_undirected, std::size_t d,
                                   CostRange costs, std::uint64_t seed) {
  check_costs(d, costs);
  if (n < 2) throw GraphError("road graph needs at least 2 vertices");
  if (m_undirected < n - 1)
    throw GraphError("road graph needs at least n-1 = " + std::to_string(n - 1) + " roads");
  if (m_undirected > n * (n - 1) / 2) throw GraphError("infeasible road count");

  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  std::vector<double> xs(n), ys(n);
  for (std::size_t v = 0; v < n; ++v) {
    xs[v] = unit(rng);
    ys[v] = unit(rng);
  }

  std::size_t k = std::min(n - 1, 2 * ((2 * m_undirected + n - 1) / n) + 4);
  std::vector<std::pair<VertexId, VertexId>> roads;
  for (;;) {
    auto candidates = knn_candidates(xs, ys, k);
    DisjointSets sets(n);
    std::vector<char> used(candidates.size(), 0);
    std::size_t joined = 0;
    for (std::size_t i = 0; i < candidates.size() && joined + 1 < n; ++i)
      if (sets.unite(candidates[i].u, candidates[i].v)) {
        used[i] = 1;
        ++joined;
      }
    if (joined + 1 < n || candidates.size() < m_undirected) {
      if (k == n - 1) throw GraphError("could not build a connected road graph");
      k = std::min(n - 1, 2 * k);
      continue;
    }
    roads.clear();
    for (std::size_t i = 0; i < candidates.size(); ++i)
      if (used[i]) roads.emplace_back(candidates[i].u, candidates[i].v);
    for (std::size_t i = 0; i < candidates.size() && roads.size() < m_undirected; ++i)
      if (!used[i]) roads.emplace_back(candidates[i].u, candidates[i].v);
    break;
  }
  std::sort(roads.begin(), roads.end());
  std::vector<EdgeInput> edges;
  edges.reserve(2 * roads.size());
  for (auto [u, v] : roads) {
    CostVector c = draw_costs(rng, d, costs);
    edges.push_back({u, v, c});
    edges.push_back({v, u, c});
  }
  return MultiCostGraph::from_edges(n, d, std::move(edges));
}

VertexId Subgraph::to_local(VertexId parent) const noexcept {
  auto it = std::lower_bound(to_parent.begin(), to_parent.end(), parent);
  if (it == to_parent.end() || *it != parent) return kNoVertex;
  return static_cast<VertexId>(it - to_parent.begin());
}

Subgraph induced_subgraph(const MultiCostGraph &g, std::span<const VertexId> subset) {
  Subgraph sub;
  sub.to_parent.assign(subset.begin(), subset.end());
  std::sort(sub.to_parent.begin(), sub.to_parent.end());
  sub.to_parent.erase(std::unique(sub.to_parent.begin(), sub.to_parent.end()), sub.to_parent.end());
  for (VertexId v : sub.to_parent)
    if (v >= g.vertex_count()) throw GraphError("unknown vertex id " + std::to_string(v));

  std::vector<EdgeInput> edges;
  for (VertexId local = 0; local < sub.to_parent.size(); ++local)
    for (EdgeId e : g.out_edges(sub.to_parent[local])) {
      VertexId t = sub.to_local(g.target(e));
      if (t != kNoVertex) edges.push_back({local, t, g.cost(e)});
    }
  sub.graph = MultiCostGraph::from_edges(sub.to_parent.size(), g.dims(), std::move(edges));
  return sub;
}

} // namespace mcroute
