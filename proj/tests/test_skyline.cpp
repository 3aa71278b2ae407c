#include <doctest.h>

#include <algorithm>

#include "helpers.hpp"
#include "mcroute/oracle.hpp"
#include "mcroute/skyline.hpp"

using namespace mcroute;
using mcroute::test::graph;

namespace {

std::vector<CostVector> sorted_costs(const SkylinePathSet &set) {
  auto costs = set.costs();
  std::sort(costs.begin(), costs.end(), [](const CostVector &a, const CostVector &b) { return lex_less(a, b); });
  return costs;
}

} // namespace

TEST_SUITE("skyline") {

TEST_CASE("single edge") {
  const auto g = graph(2, 2, {{0, 1, {2, 3}}});
  const auto set = compute_skyline_paths(g, 0, 1);
  REQUIRE(set.paths.size() == 1);
  CHECK(set.paths[0].vertices == std::vector<VertexId>{0, 1});
}

TEST_CASE("incomparable routes are both kept") {
  // 0 -> 1 -> 3 costs (1,6), 0 -> 2 -> 3 costs (4,4), 0 -> 3 directly (5,7) is dominated.
  const auto g = graph(4, 2, {{0, 1, {1, 3}}, {1, 3, {0, 3}}, {0, 2, {2, 2}}, {2, 3, {2, 2}}, {0, 3, {5, 7}}});
  const auto set = compute_skyline_paths(g, 0, 3);
  CHECK(sorted_costs(set) == std::vector<CostVector>{CostVector{1, 6}, CostVector{4, 4}});
  for (const auto &p : set.paths) CHECK(make_path(g, p.vertices).cost == p.cost);
}

TEST_CASE("unreachable exit gives an empty set, entry to itself the trivial path") {
  const auto g = graph(3, 2, {{0, 1, {1, 1}}});
  CHECK(compute_skyline_paths(g, 0, 2).paths.empty());
  const auto self = compute_skyline_paths(g, 1, 1);
  REQUIRE(self.paths.size() == 1);
  CHECK(self.paths[0].cost == CostVector::zero(2));
}

TEST_CASE("skyline equals enumeration on random small graphs") {
  for (std::uint64_t seed = 1; seed <= 30; ++seed) {
    const std::size_t d = 2 + seed % 2;
    const auto g = generate_random_graph(9, 22 + seed % 10, d, {1, 10}, seed);
    for (VertexId s = 0; s < 9; s += 2)
      for (VertexId e = 1; e < 9; e += 3) {
        if (s == e) continue;
        CHECK(sorted_costs(compute_skyline_paths(g, s, e)) == sorted_costs(oracle_skyline_set(g, s, e)));
      }
  }
}

TEST_CASE("the Pareto tree holds every skyline at once") {
  const auto g = generate_random_graph(10, 30, 2, {1, 10}, 17);
  const auto tree = pareto_search(g, 0);
  for (VertexId v = 1; v < 10; ++v) {
    std::vector<CostVector> costs;
    for (auto l : tree.at_vertex[v]) {
      costs.push_back(tree.labels[l].cost);
      const auto vertices = tree.vertices_of(l);
      CHECK(vertices.front() == 0);
      CHECK(vertices.back() == v);
      CHECK(make_path(g, vertices).cost == tree.labels[l].cost);
    }
    std::sort(costs.begin(), costs.end(), [](const CostVector &a, const CostVector &b) { return lex_less(a, b); });
    CHECK(costs == sorted_costs(oracle_skyline_set(g, 0, v)));
  }
}

TEST_CASE("lexicographic shortest path is on the skyline") {
  const auto g = generate_random_graph(12, 40, 2, {1, 10}, 5);
  for (VertexId e = 1; e < 12; ++e) {
    const Path p = lexicographic_shortest_path(g, 0, e, 1);
    if (p.empty()) continue;
    const auto costs = sorted_costs(oracle_skyline_set(g, 0, e));
    CHECK(std::find(costs.begin(), costs.end(), p.cost) != costs.end());
    for (const auto &c : costs) CHECK(p.cost[1] <= c[1]);
  }
}

}
