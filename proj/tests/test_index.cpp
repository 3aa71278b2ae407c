#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "helpers.hpp"
#include "mcroute/error.hpp"
#include "mcroute/index.hpp"
#include "mcroute/oracle.hpp"
#include "mcroute/query.hpp"

using namespace mcroute;

namespace {

std::string serialized(const PartitionIndex &index) {
  std::ostringstream out;
  save_index(out, index);
  return out.str();
}

std::vector<CostVector> lex_sorted(std::vector<CostVector> v) {
  std::sort(v.begin(), v.end(), [](const CostVector &a, const CostVector &b) { return lex_less(a, b); });
  return v;
}

} // namespace

TEST_SUITE("index") {

TEST_CASE("k = 1") {
  const auto g = generate_random_graph(15, 50, 2, {1, 10}, 3);
  IndexBuildOptions options;
  options.k = 1;
  const auto index = build_index(g, options);
  CHECK(index.inter.present_cells() == 0);
  CHECK(index.pair_count() == 0);
  CHECK(index.inner_lbop.subset_count() == 1);
}

TEST_CASE("20 vertices, k = 4, r = 2") {
  const auto g = generate_random_graph(20, 80, 2, {1, 10}, 9);
  IndexBuildOptions options;
  options.k = 4;
  options.r = 2;
  options.seed = 9;
  const auto index = build_index(g, options);
  const auto &layout = index.layout;
  for (SubsetId p = 0; p < layout.k; ++p) {
    const std::vector<VertexId> &members = layout.members[p];
    const auto sub = induced_subgraph(g, members);
    for (VertexId i : layout.entries[p])
      for (VertexId j : layout.exits[p]) {
        if (i == j) continue;
        const auto stored = index.skyline_set(i, j);
        const auto direct = oracle_skyline_set(sub.graph, sub.to_local(i), sub.to_local(j), 25);
        CHECK(lex_sorted(stored.costs()) == lex_sorted(direct.costs()));
        for (const auto &p : stored.paths) {
          CHECK(make_path(g, p.vertices).cost == p.cost);
          for (VertexId v : p.vertices) CHECK(layout.subset_of(v) == layout.subset_of(i));
        }
        const auto &contour = index.contour_set(i, j);
        CHECK(contour.groups.size() <= 2);
        const auto costs = stored.costs();
        for (const auto &grp : contour.groups)
          for (auto m : grp.members) CHECK(weakly_dominates(grp.contour_point, costs[m]));
      }
  }
  const QueryEngine engine(g, index);
  const auto f = register_score_function("sum_sq", 2);
  for (VertexId s = 0; s < 20; s += 3)
    for (VertexId e = 1; e < 20; e += 2) CHECK(engine.query(s, e, f).score == oracle_optimal_path(g, s, e, f).score);
}

TEST_CASE("deterministic, and the same with threads") {
  const auto g = generate_road_graph(600, 720, 2, {1, 10}, 4);
  IndexBuildOptions options;
  options.k = 12;
  options.seed = 4;
  const auto a = build_index(g, options);
  const auto b = build_index(g, options);
  CHECK(serialized(a) == serialized(b));
  options.threads = 4;
  const auto c = build_index(g, options);
  CHECK(c.same_content(a));
  CHECK(serialized(c) == serialized(a));
}

TEST_CASE("save and load") {
  const auto g = generate_random_graph(25, 90, 3, {1, 10}, 6);
  IndexBuildOptions options;
  options.k = 3;
  const auto index = build_index(g, options);
  const std::string bytes = serialized(index);
  CHECK(measure_index(index).total == bytes.size());

  std::istringstream in(bytes);
  CHECK(load_index(in, g).same_content(index));

  const auto other = generate_random_graph(25, 90, 3, {1, 10}, 7);
  std::istringstream wrong_graph(bytes);
  CHECK_THROWS_AS(load_index(wrong_graph, other), IndexFormatError);

  for (std::size_t at : {std::size_t{2}, bytes.size() / 2, bytes.size() - 1}) {
    std::string corrupt = bytes;
    corrupt[at] = static_cast<char>(corrupt[at] ^ 0x5a);
    std::istringstream bad(corrupt);
    CHECK_THROWS_AS(load_index(bad, g), IndexFormatError);
  }
  std::istringstream truncated(bytes.substr(0, bytes.size() - 7));
  CHECK_THROWS_AS(load_index(truncated, g), IndexFormatError);
}

TEST_CASE("real-valued costs survive a round trip") {
  std::vector<EdgeInput> edges;
  const auto base = generate_random_graph(18, 60, 2, {1, 10}, 8);
  for (EdgeId e = 0; e < base.edge_count(); ++e)
    edges.push_back({base.source(e), base.target(e), CostVector{base.cost(e, 0) / 3.0, base.cost(e, 1) * 0.7}});
  const auto g = MultiCostGraph::from_edges(18, 2, edges);
  CHECK_FALSE(g.integral());
  IndexBuildOptions options;
  options.k = 3;
  const auto index = build_index(g, options);
  std::istringstream in(serialized(index));
  CHECK(load_index(in, g).same_content(index));
}

TEST_CASE("skyline cap") {
  const auto g = generate_random_graph(25, 200, 3, {1, 10}, 2);
  IndexBuildOptions options;
  options.k = 2;
  options.max_skyline = 1;
  CHECK_THROWS_AS(build_index(g, options), SkylineCapExceeded);
}

TEST_CASE("smaller than the all-pairs skyline index") {
  const auto g = generate_random_graph(22, 100, 2, {1, 10}, 12);
  IndexBuildOptions options;
  options.k = 3;
  const auto index = build_index(g, options);
  CHECK(index.meta.sizes.total < all_pairs_skyline_bytes(g));
}

}
