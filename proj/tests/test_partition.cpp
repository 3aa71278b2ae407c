#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "helpers.hpp"
#include "mcroute/error.hpp"
#include "mcroute/partition.hpp"

using namespace mcroute;
using mcroute::test::graph;

namespace {

MultiCostGraph two_cliques() {
  std::vector<EdgeInput> edges;
  for (VertexId base : {0u, 4u})
    for (VertexId a = 0; a < 4; ++a)
      for (VertexId b = 0; b < 4; ++b)
        if (a != b) edges.push_back({base + a, base + b, CostVector{1}});
  edges.push_back({3, 4, CostVector{1}});
  return MultiCostGraph::from_edges(8, 1, std::move(edges));
}

void check_layout(const MultiCostGraph &g, const PartitionLayout &layout) {
  std::size_t members = 0;
  for (SubsetId p = 0; p < layout.k; ++p) {
    CHECK_FALSE(layout.members[p].empty());
    members += layout.members[p].size();
    for (VertexId v : layout.members[p]) CHECK(layout.subset_of(v) == p);
  }
  CHECK(members == g.vertex_count());
  std::size_t cut = 0;
  for (EdgeId e = 0; e < g.edge_count(); ++e) {
    const VertexId u = g.source(e), v = g.target(e);
    if (layout.subset_of(u) == layout.subset_of(v)) continue;
    ++cut;
    CHECK(layout.is_exit[u]);
    CHECK(layout.is_entry[v]);
  }
  CHECK(cut == layout.cut_edges);
}

} // namespace

TEST_SUITE("partition") {

TEST_CASE("k = 1 has no borders") {
  const auto g = generate_random_graph(20, 60, 2, {1, 10}, 1);
  const auto layout = partition_graph(g, 1, 7);
  CHECK(layout.k == 1);
  CHECK(layout.borders().empty());
  CHECK(layout.cut_edges == 0);
}

TEST_CASE("k = n makes every vertex with an in-edge an entry") {
  const auto g = generate_random_graph(12, 30, 2, {1, 10}, 2);
  const auto layout = partition_graph(g, 12, 7);
  check_layout(g, layout);
  for (VertexId v = 0; v < 12; ++v) {
    CHECK(layout.members[layout.subset_of(v)].size() == 1);
    CHECK(static_cast<bool>(layout.is_entry[v]) == (g.in_degree(v) > 0));
  }
}

TEST_CASE("two cliques joined by one edge split along that edge") {
  const auto g = two_cliques();
  const auto layout = partition_graph(g, 2, 7);
  check_layout(g, layout);
  CHECK(layout.cut_edges == 1);
  CHECK(layout.members[0].size() == 4);
  CHECK(layout.subset_of(0) == layout.subset_of(3));
  CHECK(layout.subset_of(4) == layout.subset_of(7));
}

TEST_CASE("borders from an explicit assignment") {
  const auto g = graph(3, 1, {{0, 1, {1}}, {1, 2, {1}}});
  const auto layout = compute_borders(g, {0, 1, 2});
  CHECK(layout.is_entry[1]);
  CHECK(layout.is_exit[1]);
  CHECK(layout.is_exit[0]);
  CHECK_FALSE(layout.is_entry[0]);
  CHECK(layout.is_entry[2]);
  CHECK_FALSE(layout.is_exit[2]);

  const auto one = compute_borders(g, {0, 0, 0});
  CHECK(one.borders().empty());
  CHECK_THROWS_AS(compute_borders(g, {0, 1}), PartitionError);
  CHECK_THROWS_AS(compute_borders(g, {0, 3, 1}, 2), PartitionError);
}

TEST_CASE("road graph partitions are valid, roughly balanced and deterministic") {
  const auto g = generate_road_graph(2000, 2400, 2, {1, 10}, 7);
  const auto layout = partition_graph(g, 20, 7);
  check_layout(g, layout);
  CHECK(layout.largest_subset() <= static_cast<std::size_t>(2000 / 20 * 1.5));
  CHECK(layout == partition_graph(g, 20, 7));
  // A cut far below the edge count: the topology is planar-ish.
  CHECK(layout.cut_edges < g.edge_count() / 5);
}

TEST_CASE("partition files round trip") {
  const auto g = generate_random_graph(25, 80, 2, {1, 10}, 4);
  const auto layout = partition_graph(g, 4, 1);
  std::stringstream buf;
  save_partition(buf, layout);
  CHECK(load_partition(buf, g) == layout);
  std::istringstream short_file("0\n1\n");
  CHECK_THROWS(load_partition(short_file, g));
}

}
