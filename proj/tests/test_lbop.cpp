#include <doctest.h>

#include <functional>

#include "helpers.hpp"
#include "mcroute/dijkstra.hpp"
#include "mcroute/index.hpp"
#include "mcroute/lbop.hpp"

using namespace mcroute;
using mcroute::test::graph;

namespace {

// Minimum per dimension over all simple paths, by enumeration.
std::vector<CostVector> brute_force_from(const MultiCostGraph &g, VertexId s) {
  const std::size_t n = g.vertex_count(), d = g.dims();
  std::vector<CostVector> best(n, CostVector::infinite(d));
  std::vector<char> on(n, 0);
  std::function<void(VertexId, const CostVector &)> visit = [&](VertexId v, const CostVector &acc) {
    best[v].min_with(acc);
    for (EdgeId e : g.out_edges(v)) {
      const VertexId w = g.target(e);
      if (on[w]) continue;
      on[w] = 1;
      visit(w, acc + g.cost(e));
      on[w] = 0;
    }
  };
  on[s] = 1;
  visit(s, CostVector::zero(d));
  return best;
}

CostVector full_search(const MultiCostGraph &g, VertexId s, VertexId e) {
  CostVector out(g.dims());
  for (std::size_t x = 0; x < g.dims(); ++x)
    out[x] = single_cost_distances(g, x, s, Direction::Forward).distance[e];
  return out;
}

} // namespace

TEST_SUITE("lbop") {

TEST_CASE("single edge distance") {
  const auto g = graph(2, 2, {{0, 1, {3, 9}}});
  const auto tree = single_cost_distances(g, 0, 0, Direction::Forward);
  CHECK(tree.distance[1] == 3);
  CHECK(tree.path_to(1, Direction::Forward) == std::vector<VertexId>{0, 1});
  const auto back = single_cost_distances(g, 1, 1, Direction::Backward);
  CHECK(back.distance[0] == 9);
}

TEST_CASE("distances equal enumeration on random 10-vertex graphs") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = generate_random_graph(10, 25, 3, {1, 10}, seed);
    for (VertexId s = 0; s < 10; ++s) {
      const auto brute = brute_force_from(g, s);
      for (std::size_t x = 0; x < 3; ++x) {
        const auto tree = single_cost_distances(g, x, s, Direction::Forward);
        for (VertexId v = 0; v < 10; ++v) CHECK(tree.distance[v] == brute[v][x]);
      }
    }
  }
}

TEST_CASE("bounded searches settle their targets exactly") {
  const auto g = generate_road_graph(400, 500, 2, {1, 10}, 3);
  const std::vector<VertexId> targets{5, 77, 301};
  for (std::size_t x = 0; x < 2; ++x) {
    const auto full = single_cost_distances(g, x, 9, Direction::Backward);
    const auto part = single_cost_distances_until(g, x, 9, Direction::Backward, targets);
    for (VertexId t : targets) CHECK(part.distance[t] == full.distance[t]);
  }
}

TEST_CASE("combine_min") {
  const std::vector<std::pair<CostVector, CostVector>> one{{CostVector{1, 2}, CostVector{3, 4}}};
  CHECK(combine_min(one, 2) == CostVector{4, 6});
  const std::vector<std::pair<CostVector, CostVector>> two{{CostVector{2, 0}, CostVector{3, 1}},
                                                           {CostVector{0, 2}, CostVector{1, 3}}};
  CHECK(combine_min(two, 2) == CostVector{1, 1});
  CHECK(combine_min({}, 2).all_infinite());

  const std::vector<std::pair<CostVector, CostVector>> three{{CostVector{4, 1}, CostVector{2, 9}},
                                                             {CostVector{1, 7}, CostVector{8, 0}},
                                                             {CostVector{3, 3}, CostVector{3, 3}}};
  CostVector naive = CostVector::infinite(2);
  for (const auto &[a, b] : three) naive.min_with(a + b);
  CHECK(combine_min(three, 2) == naive);
}

TEST_CASE("inter-index cells") {
  const auto g = generate_random_graph(20, 60, 2, {1, 10}, 5);
  const auto one = compute_borders(g, std::vector<SubsetId>(20, 0), 1);
  CHECK(build_inter_index(g, one).present_cells() == 0);

  // Subsets {0,1} and {2,3} joined by the single edge 1->2.
  const auto h = graph(4, 2, {{0, 1, {1, 1}}, {1, 2, {2, 5}}, {2, 3, {1, 1}}});
  const auto layout = compute_borders(h, {0, 0, 1, 1});
  const auto inter = build_inter_index(h, layout);
  REQUIRE(inter.cell(1, 2).has_value());
  CHECK(*inter.cell(1, 2) == CostVector{2, 5});
}

TEST_CASE("index cells equal per-dimension searches") {
  for (std::uint64_t seed = 1; seed <= 8; ++seed) {
    const auto g = generate_random_graph(8 + seed, 3 * (8 + seed), 2, {1, 10}, seed);
    const auto layout = partition_graph(g, 2 + seed % 2, seed);
    const auto [inter, inner] = build_lbop_indexes(g, layout);
    for (VertexId b : inter.row_vertices())
      for (VertexId i : inter.col_vertices()) {
        if (layout.subset_of(b) == layout.subset_of(i)) continue;
        CHECK(*inter.cell(b, i) == full_search(g, b, i));
      }
    const LbopEngine engine(g, layout, inter, inner);
    for (VertexId s = 0; s < g.vertex_count(); ++s)
      for (VertexId e = 0; e < g.vertex_count(); ++e) CHECK(engine.compute_lbop(s, e).phi == full_search(g, s, e));
  }
}

TEST_CASE("inner index stores the distances inside each subset") {
  const auto g = generate_random_graph(16, 48, 2, {1, 10}, 11);
  const auto layout = partition_graph(g, 3, 1);
  const auto inner = build_lbop_inner_index(g, layout);
  for (SubsetId p = 0; p < layout.k; ++p)
    for (VertexId i : layout.entries[p]) {
      const double *row = inner.entry_row(p, inner.entry_pos(i));
      CHECK(row[inner.member_pos(i) * 2] == 0.0);
      CHECK(row[inner.member_pos(i) * 2 + 1] == 0.0);
      for (VertexId v : layout.members[p]) CHECK(row[inner.member_pos(v) * 2] == full_search(g, i, v)[0]);
    }
}

TEST_CASE("compute_lbop special cases and batch forms") {
  const auto g = generate_random_graph(12, 30, 3, {1, 10}, 21);
  IndexBuildOptions options;
  options.k = 3;
  options.seed = 2;
  const auto index = build_index(g, options);
  const LbopEngine engine(g, index.layout, index.inter, index.inner_lbop);
  CHECK(engine.compute_lbop(4, 4).phi == CostVector::zero(3));

  std::vector<VertexId> all(12);
  for (VertexId v = 0; v < 12; ++v) all[v] = v;
  for (VertexId s = 0; s < 12; ++s) {
    const auto row = engine.from_source(s, all);
    const auto col = engine.to_target(all, s);
    for (VertexId v = 0; v < 12; ++v) {
      CHECK(row[v] == full_search(g, s, v));
      CHECK(col[v] == full_search(g, v, s));
    }
  }

  const auto cut = graph(4, 2, {{0, 1, {1, 1}}, {2, 3, {1, 1}}});
  const auto layout = compute_borders(cut, {0, 0, 1, 1});
  const auto [inter, inner] = build_lbop_indexes(cut, layout);
  const LbopEngine split(cut, layout, inter, inner);
  CHECK(split.compute_lbop(0, 3).phi.all_infinite());
}

}
