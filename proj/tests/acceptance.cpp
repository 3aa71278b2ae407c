// One PASS/FAIL line per acceptance criterion. `acceptance 1 7` runs only
// those criteria. Exit status 1 when any criterion fails.

#include <algorithm>
#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <random>
#include <set>
#include <sstream>
#include <string>

#include "contour_oracles.hpp"
#include "helpers.hpp"
#include "mcroute/dijkstra.hpp"
#include "mcroute/index.hpp"
#include "mcroute/oracle.hpp"
#include "mcroute/query.hpp"
#include "mcroute/skyline.hpp"

using namespace mcroute;

namespace {

constexpr std::uint64_t kCorpusSize = 200;

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int failures = 0;

void report(int id, const char *title, bool pass, const std::string &detail) {
  std::printf("%s criterion %d (%s): %s\n", pass ? "PASS" : "FAIL", id, title, detail.c_str());
  std::fflush(stdout);
  failures += !pass;
}

struct CorpusGraph {
  std::uint64_t seed;
  MultiCostGraph g;
  std::size_t k;
  PartitionIndex index;
};

const std::vector<CorpusGraph> &corpus() {
  static const std::vector<CorpusGraph> graphs = [] {
    std::vector<CorpusGraph> out;
    for (std::uint64_t seed = 1; seed <= kCorpusSize; ++seed) {
      CorpusGraph c{seed, test::corpus_graph(seed), 2 + seed % 3, {}};
      IndexBuildOptions options;
      options.k = c.k;
      options.r = 2 + seed % 3;
      options.seed = seed;
      c.index = build_index(c.g, options);
      out.push_back(std::move(c));
    }
    return out;
  }();
  return graphs;
}

std::vector<std::pair<VertexId, VertexId>> sample_pairs(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
  std::vector<std::pair<VertexId, VertexId>> out;
  while (out.size() < count) {
    const VertexId s = pick(rng), e = pick(rng);
    if (s != e) out.emplace_back(s, e);
  }
  return out;
}

std::vector<std::string> corpus_scores(std::size_t d) {
  std::string weighted = "weighted:1";
  for (std::size_t i = 1; i < d; ++i) weighted += "," + std::to_string(i + 1);
  return {"sum_sq", "sum_cube", weighted};
}

std::string format(const char *fmt, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

void oracle_exactness() {
  const auto start = std::chrono::steady_clock::now();
  std::size_t instances = 0, mismatches = 0;
  for (const auto &c : corpus()) {
    const QueryEngine engine(c.g, c.index);
    for (const auto &spec : corpus_scores(c.g.dims())) {
      const auto f = register_score_function(spec, c.g.dims());
      for (auto [s, e] : sample_pairs(c.g.vertex_count(), 8, c.seed * 31 + spec.size())) {
        ++instances;
        if (engine.query(s, e, f).score != oracle_optimal_path(c.g, s, e, f).score) ++mismatches;
      }
    }
  }
  const double t = seconds_since(start);
  report(1, "oracle exactness", mismatches == 0 && t < 120.0,
         format("%zu graphs, %zu instances, %zu mismatches, %.1f s", corpus().size(), instances, mismatches, t));
}

void shrunk_equivalence() {
  std::size_t instances = 0, mismatches = 0;
  for (const auto &c : corpus()) {
    const auto f = register_score_function("sum_sq", c.g.dims());
    for (std::size_t k = 2; k <= 4; ++k) {
      IndexBuildOptions options;
      options.k = k;
      options.r = 2;
      options.seed = c.seed;
      const auto index = build_index(c.g, options);
      for (auto [s, e] : sample_pairs(c.g.vertex_count(), 4, c.seed * 7 + k)) {
        const ShrunkGraph shrunk(c.g, index, s, e);
        std::vector<OracleEdge> edges;
        for (const auto &edge : shrunk.materialize()) edges.push_back({edge.from, edge.to, edge.cost});
        ++instances;
        if (oracle_multigraph_score(c.g.vertex_count(), edges, s, e, f) != oracle_optimal_path(c.g, s, e, f).score)
          ++mismatches;
      }
    }
  }
  report(2, "shrunk-graph equivalence", mismatches == 0,
         format("%zu instances over k = 2, 3, 4, %zu mismatches", instances, mismatches));
}

// A random simple s-e path by randomized DFS, or empty when none exists.
std::vector<VertexId> random_simple_path(const MultiCostGraph &g, VertexId s, VertexId e, std::mt19937_64 &rng) {
  std::vector<char> seen(g.vertex_count(), 0);
  std::vector<VertexId> path{s};
  std::vector<std::vector<VertexId>> options;
  auto fill = [&](VertexId v) {
    std::vector<VertexId> next;
    for (EdgeId edge : g.out_edges(v)) next.push_back(g.target(edge));
    std::shuffle(next.begin(), next.end(), rng);
    options.push_back(std::move(next));
  };
  seen[s] = 1;
  fill(s);
  while (!path.empty()) {
    if (path.back() == e) return path;
    auto &next = options.back();
    while (!next.empty() && seen[next.back()]) next.pop_back();
    if (next.empty()) {
      path.pop_back();
      options.pop_back();
      continue;
    }
    const VertexId w = next.back();
    next.pop_back();
    seen[w] = 1;
    path.push_back(w);
    fill(w);
  }
  return {};
}

void lbop_bounds() {
  std::size_t events = 0, violations = 0, pairs = 0, wrong = 0;
  std::mt19937_64 rng(2024);
  for (std::size_t round = 0; events < 10000; ++round) {
    const auto &c = corpus()[round % corpus().size()];
    const LbopEngine engine(c.g, c.index.layout, c.index.inter, c.index.inner_lbop);
    for (auto [s, e] : sample_pairs(c.g.vertex_count(), 5, round)) {
      const CostVector phi = engine.compute_lbop(s, e).phi;
      CostVector direct(c.g.dims());
      for (std::size_t x = 0; x < c.g.dims(); ++x)
        direct[x] = single_cost_distances(c.g, x, s, Direction::Forward).distance[e];
      ++pairs;
      wrong += !(phi == direct);
      const auto vertices = random_simple_path(c.g, s, e, rng);
      if (vertices.empty()) continue;
      ++events;
      violations += !weakly_dominates(phi, make_path(c.g, vertices).cost);
    }
  }
  report(3, "LBOP lower bound and exactness", violations == 0 && wrong == 0,
         format("%zu path events, %zu violations; %zu pairs, %zu differ from direct search", events, violations, pairs,
                wrong));
}

void filtering() {
  std::size_t checked = 0, lost = 0;
  for (const auto &c : corpus()) {
    const QueryEngine engine(c.g, c.index);
    const auto f = register_score_function("sum_sq", c.g.dims());
    for (auto [s, e] : sample_pairs(c.g.vertex_count(), 6, c.seed + 99)) {
      const auto best = oracle_optimal_path(c.g, s, e, f);
      if (!best.found) continue;
      const auto shrunk = engine.shrunk_graph(s, e);
      const auto filter = vertex_filter(shrunk, engine.lbop(), f);
      for (VertexId v : best.path.vertices)
        if (shrunk.contains(v)) {
          ++checked;
          lost += !filter.alive[v];
        }
    }
  }

  const auto g = generate_road_graph(5000, 6000, 2, {1, 10}, 7);
  IndexBuildOptions options;
  options.k = 50;
  options.r = 8;
  options.seed = 7;
  const auto index = build_index(g, options);
  const QueryEngine engine(g, index);
  const auto f = register_score_function("sum_sq", 2);
  double fraction = 0.0;
  std::size_t counted = 0;
  for (auto [s, e] : sample_pairs(g.vertex_count(), 100, 7)) {
    const auto r = engine.query(s, e, f);
    if (r.stats.shrunk_vertices == 0) continue;
    fraction += static_cast<double>(r.stats.filtered_vertices) / static_cast<double>(r.stats.shrunk_vertices);
    ++counted;
  }
  fraction /= static_cast<double>(std::max<std::size_t>(counted, 1));
  report(4, "filtering soundness and effectiveness", lost == 0 && fraction >= 0.30,
         format("%zu optimal-path vertices checked, %zu filtered; road n=5000 m=%zu k=50: mean filtered %.1f%%",
                checked, lost, g.edge_count(), fraction * 100.0));
}

void contour() {
  std::size_t exact_sets = 0, exact_wrong = 0;
  for (const auto &c : corpus()) {
    if (c.g.dims() != 2) continue;
    for (const auto &trees : c.index.skylines)
      for (const auto &tree : trees)
        for (std::size_t x = 0; x < tree.exit_labels.size(); ++x) {
          const auto &labels = tree.exit_labels[x];
          if (labels.empty() || labels.size() > 12) continue;
          std::vector<CostVector> points;
          for (auto l : labels) points.push_back(tree.label_cost(l));
          for (std::size_t r = 1; r <= 4; ++r) {
            ++exact_sets;
            exact_wrong += contour_partition_2d(points, r).achieved_diameter != test::contiguous_optimum(points, r);
          }
        }
  }
  std::mt19937_64 rng(99);
  for (int trial = 0; trial < 300; ++trial) {
    const auto points = test::random_skyline(rng, 2 + trial % 11, 2);
    for (std::size_t r = 1; r <= 4; ++r) {
      ++exact_sets;
      exact_wrong += contour_partition_2d(points, r).achieved_diameter != test::contiguous_optimum(points, r);
    }
  }

  std::size_t greedy_sets = 0, greedy_wrong = 0;
  for (int trial = 0; trial < 400; ++trial) {
    const auto points = test::random_skyline(rng, 2 + trial % 9, 3);
    for (std::size_t r = 1; r <= 4; ++r) {
      ++greedy_sets;
      const double got = contour_partition_greedy(points, r, static_cast<std::uint64_t>(trial)).achieved_diameter;
      greedy_wrong += got > 2.0 * test::set_partition_optimum(points, r);
    }
  }
  report(5, "contour grouping", exact_wrong == 0 && greedy_wrong == 0,
         format("2-D program: %zu sets, %zu off the contiguous optimum; greedy 3-D: %zu sets, %zu above 2x optimum",
                exact_sets, exact_wrong, greedy_sets, greedy_wrong));
}

void skyline_completeness() {
  std::size_t subgraphs = 0, pairs = 0, wrong = 0;
  auto sorted = [](std::vector<CostVector> v) {
    std::sort(v.begin(), v.end(), [](const CostVector &a, const CostVector &b) { return lex_less(a, b); });
    return v;
  };
  for (const auto &c : corpus()) {
    const auto &layout = c.index.layout;
    for (SubsetId p = 0; p < layout.k; ++p) {
      if (layout.members[p].size() > 12) continue;
      ++subgraphs;
      const auto sub = induced_subgraph(c.g, layout.members[p]);
      const std::size_t n = sub.graph.vertex_count();
      for (VertexId s = 0; s < n; ++s)
        for (VertexId e = 0; e < n; ++e) {
          if (s == e) continue;
          ++pairs;
          const auto want = sorted(oracle_skyline_set(sub.graph, s, e).costs());
          wrong += sorted(compute_skyline_paths(sub.graph, s, e).costs()) != want;
          const VertexId ps = sub.to_parent[s], pe = sub.to_parent[e];
          if (layout.is_entry[ps] && layout.is_exit[pe]) wrong += sorted(c.index.skyline_set(ps, pe).costs()) != want;
        }
    }
  }
  report(6, "skyline completeness", wrong == 0 && subgraphs > 0,
         format("%zu subgraphs, %zu ordered pairs, %zu differ", subgraphs, pairs, wrong));
}

void speedup() {
  const auto g = generate_road_graph(20000, 50000, 2, {1, 10}, 7);
  IndexBuildOptions options;
  options.k = 50;
  options.r = 8;
  options.seed = 7;
  options.contour_seed = 7;
  auto start = std::chrono::steady_clock::now();
  const auto index = build_index(g, options);
  const double build = seconds_since(start);
  const QueryEngine engine(g, index);
  const auto f = register_score_function("sum_sq", 2);
  const auto pairs = sample_pairs(g.vertex_count(), 100, 7);

  std::vector<double> indexed, baseline;
  start = std::chrono::steady_clock::now();
  for (auto [s, e] : pairs) indexed.push_back(engine.query(s, e, f).score);
  const double t_index = seconds_since(start) / static_cast<double>(pairs.size());
  start = std::chrono::steady_clock::now();
  for (auto [s, e] : pairs) baseline.push_back(bf_search_baseline(g, s, e, f).score);
  const double t_bf = seconds_since(start) / static_cast<double>(pairs.size());

  std::size_t differ = 0;
  for (std::size_t i = 0; i < pairs.size(); ++i) differ += indexed[i] != baseline[i];
  const double ratio = t_index / t_bf;
  report(7, "query speedup", ratio <= 0.2 && differ == 0,
         format("n=%zu m=%zu, build %.1f s; index %.2f ms, baseline %.2f ms per query, ratio %.3f; %zu scores differ",
                g.vertex_count(), g.edge_count(), build, t_index * 1e3, t_bf * 1e3, ratio, differ));
}

void index_size() {
  std::size_t larger = 0;
  double worst = 0.0;
  for (const auto &c : corpus()) {
    std::ostringstream out;
    save_index(out, c.index);
    const std::size_t ours = out.str().size(), all_pairs = all_pairs_skyline_bytes(c.g);
    larger += ours >= all_pairs;
    worst = std::max(worst, static_cast<double>(ours) / static_cast<double>(all_pairs));
  }
  report(8, "index size", larger == 0,
         format("%zu graphs, %zu not smaller than the all-pairs skyline index, largest ratio %.3f", corpus().size(),
                larger, worst));
}

void pruning_neutrality() {
  std::size_t runs = 0, changed = 0;
  for (const auto &c : corpus()) {
    const QueryEngine engine(c.g, c.index);
    for (const auto &spec : corpus_scores(c.g.dims())) {
      const auto f = register_score_function(spec, c.g.dims());
      for (auto [s, e] : sample_pairs(c.g.vertex_count(), 4, c.seed * 13 + spec.size())) {
        QueryOptions base;
        base.force_bb = true;
        const double want = engine.query(s, e, f, base).score;
        for (int off = 0; off < 5; ++off) {
          QueryOptions o = base;
          if (off == 0) o.tau_pruning = false;
          if (off == 1) o.dominance = false;
          if (off == 2) o.contour = false;
          if (off == 3) o.filtering = false;
          if (off == 4) o.gradient_rounds = 0;
          ++runs;
          changed += engine.query(s, e, f, o).score != want;
        }
        ++runs;
        changed += engine.query(s, e, f).score != want;
      }
    }
  }
  report(9, "pruning neutrality", changed == 0, format("%zu toggled runs, %zu changed scores", runs, changed));
}

} // namespace

int main(int argc, char **argv) {
  std::set<int> wanted;
  for (int i = 1; i < argc; ++i) wanted.insert(std::atoi(argv[i]));
  auto run = [&](int id, void (*fn)()) {
    if (wanted.empty() || wanted.count(id)) fn();
  };
  run(1, oracle_exactness);
  run(2, shrunk_equivalence);
  run(3, lbop_bounds);
  run(4, filtering);
  run(5, contour);
  run(6, skyline_completeness);
  run(7, speedup);
  run(8, index_size);
  run(9, pruning_neutrality);
  return failures ? 1 : 0;
}
