#include <doctest.h>

#include <sstream>

#include "helpers.hpp"
#include "mcroute/error.hpp"
#include "mcroute/graph.hpp"

using namespace mcroute;
using mcroute::test::graph;

TEST_SUITE("graph") {

TEST_CASE("load a small edge list") {
  std::istringstream in("3 2 2\n0 1 1 2\n1 2 3 4\n");
  const auto g = load_graph(in);
  CHECK(g.vertex_count() == 3);
  CHECK(g.edge_count() == 2);
  CHECK(g.dims() == 2);
  CHECK(g.cost(*g.find_edge(1, 2)) == CostVector{3, 4});
}

TEST_CASE("load rejects bad input") {
  std::istringstream negative("2 1 2\n0 1 -1 2\n");
  CHECK_THROWS_AS(load_graph(negative), ParseError);
  std::istringstream duplicate("2 2 2\n0 1 1 1\n0 1 1 1\n");
  CHECK_THROWS_AS(load_graph(duplicate), ParseError);
  std::istringstream loop("2 1 1\n1 1 3\n");
  CHECK_THROWS_AS(load_graph(loop), ParseError);
  std::istringstream short_line("2 1 2\n0 1 3\n");
  CHECK_THROWS_AS(load_graph(short_line), ParseError);
  std::istringstream empty("# nothing\n");
  CHECK_THROWS_AS(load_graph(empty), ParseError);
}

TEST_CASE("duplicates can be collapsed on request") {
  std::istringstream in("2 2 1\n0 1 5\n0 1 2\n");
  LoadOptions options;
  options.collapse_duplicates = true;
  LoadReport report;
  const auto g = load_graph(in, options, &report);
  CHECK(g.edge_count() == 1);
  CHECK(report.duplicates_collapsed == 1);
  CHECK(g.cost(0, 0) == 5);
}

TEST_CASE("undirected lines expand to both directions") {
  std::istringstream in("3 2 1 undirected\n0 1 4\n1 2 5\n");
  const auto g = load_graph(in);
  CHECK(g.edge_count() == 4);
  CHECK(g.find_edge(1, 0).has_value());
  CHECK(g.find_edge(2, 1).has_value());
}

TEST_CASE("save and load round trip") {
  const auto g = generate_random_graph(30, 120, 3, {1, 10}, 3);
  std::stringstream buf;
  save_graph(buf, g);
  CHECK(load_graph(buf) == g);
}

TEST_CASE("random graphs are deterministic and in range") {
  const auto a = generate_random_graph(5, 20, 2, {1, 10}, 7);
  const auto b = generate_random_graph(5, 20, 2, {1, 10}, 7);
  std::ostringstream sa, sb;
  save_graph(sa, a);
  save_graph(sb, b);
  CHECK(sa.str() == sb.str());
  CHECK(a.edge_count() == 20);

  CHECK_THROWS_AS(generate_random_graph(3, 7, 2, {1, 10}, 7), GraphError);

  const auto c = generate_random_graph(100, 400, 3, {1, 10}, 1);
  std::size_t in_range = 0;
  for (EdgeId e = 0; e < c.edge_count(); ++e)
    for (std::size_t x = 0; x < 3; ++x) in_range += c.cost(e, x) >= 1 && c.cost(e, x) <= 10;
  CHECK(in_range == 1200);
}

TEST_CASE("road graphs are symmetric and sized as asked") {
  const auto g = generate_road_graph(300, 360, 2, {1, 10}, 7);
  CHECK(g.vertex_count() == 300);
  CHECK(g.edge_count() == 720);
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const auto back = g.find_edge(g.target(e), g.source(e));
    REQUIRE(back.has_value());
    CHECK(g.cost(*back) == g.cost(e));
  }
}

TEST_CASE("induced subgraphs") {
  // 4-cycle 0->1->2->3->0
  const auto g = graph(4, 1, {{0, 1, {1}}, {1, 2, {2}}, {2, 3, {3}}, {3, 0, {4}}});
  const std::vector<VertexId> all{0, 1, 2, 3};
  CHECK(induced_subgraph(g, all).graph == g);

  const std::vector<VertexId> one{2};
  const auto single = induced_subgraph(g, one);
  CHECK(single.graph.vertex_count() == 1);
  CHECK(single.graph.edge_count() == 0);

  const std::vector<VertexId> pair{1, 2};
  const auto adjacent = induced_subgraph(g, pair);
  CHECK(adjacent.graph.edge_count() == 1);
  CHECK(adjacent.graph.cost(0) == CostVector{2});
  CHECK(adjacent.to_parent[adjacent.graph.source(0)] == 1);
  CHECK(adjacent.to_local(3) == kNoVertex);

  const std::vector<VertexId> outside{9};
  CHECK_THROWS_AS(induced_subgraph(g, outside), GraphError);
}

TEST_CASE("paths") {
  const auto g = graph(3, 2, {{0, 1, {1, 2}}, {1, 2, {3, 4}}, {2, 0, {1, 1}}});
  const Path p = make_path(g, {0, 1, 2});
  CHECK(p.cost == CostVector{4, 6});
  CHECK_THROWS_AS(make_path(g, {0, 2}), GraphError);
  const Path walk = make_path(g, {0, 1, 2, 0, 1, 2});
  CHECK_FALSE(is_simple(walk.vertices));
  const Path cut = remove_cycles(g, walk);
  CHECK(cut.vertices == std::vector<VertexId>{0, 1, 2});
  CHECK(cut.cost == CostVector{4, 6});
}

TEST_CASE("dominance") {
  CHECK(dominates(CostVector{1, 2}, CostVector{2, 2}));
  CHECK_FALSE(dominates(CostVector{1, 2}, CostVector{1, 2}));
  CHECK_FALSE(dominates(CostVector{1, 5}, CostVector{2, 4}));
  CHECK(euclidean_distance(CostVector{0, 0}, CostVector{3, 4}) == 5.0);
}

}
