#include <doctest.h>

#include <algorithm>
#include <sstream>

#include "helpers.hpp"
#include "mcroute/bench.hpp"
#include "mcroute/error.hpp"
#include "mcroute/oracle.hpp"

using namespace mcroute;
using mcroute::test::graph;

TEST_SUITE("oracle") {

TEST_CASE("oracle basics") {
  const auto g = graph(2, 2, {{0, 1, {2, 3}}});
  const auto f = register_score_function("sum_sq", 2);
  const auto r = oracle_optimal_path(g, 0, 1, f);
  CHECK(r.path.vertices == std::vector<VertexId>{0, 1});
  CHECK(r.score == 13);
  const auto self = oracle_optimal_path(g, 1, 1, f);
  CHECK(self.cost == CostVector::zero(2));
  CHECK(self.score == 0);
  CHECK_FALSE(oracle_optimal_path(g, 1, 0, f).found);
  const auto big = generate_random_graph(30, 60, 2, {1, 10}, 1);
  CHECK_THROWS_AS(oracle_optimal_path(big, 0, 1, f), Error);
}

TEST_CASE("oracle ties go to the smallest vertex sequence") {
  const auto g = graph(4, 1, {{0, 2, {1}}, {2, 3, {1}}, {0, 1, {1}}, {1, 3, {1}}});
  const auto f = register_score_function("sum", 1);
  CHECK(oracle_optimal_path(g, 0, 3, f).path.vertices == std::vector<VertexId>{0, 1, 3});
}

TEST_CASE("distance cut does not change the answer") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto g = test::corpus_graph(seed);
    const auto f = register_score_function("sum_cube", g.dims());
    OracleOptions plain;
    plain.distance_cut = false;
    for (VertexId e = 1; e < g.vertex_count(); e += 3)
      CHECK(oracle_optimal_path(g, 0, e, f).score == oracle_optimal_path(g, 0, e, f, plain).score);
  }
}

TEST_CASE("baseline equals the oracle") {
  for (std::uint64_t seed = 1; seed <= 15; ++seed) {
    const auto g = test::corpus_graph(seed);
    const auto f = register_score_function("sum_sq", g.dims());
    for (VertexId s = 0; s < g.vertex_count(); s += 3)
      for (VertexId e = 1; e < g.vertex_count(); e += 4)
        CHECK(bf_search_baseline(g, s, e, f).score == oracle_optimal_path(g, s, e, f).score);
  }
}

}

TEST_SUITE("bench") {

TEST_CASE("config parsing") {
  std::istringstream in("# demo\ngraph = road:300:360\ngraph = random:50:200\nmethods = index, bf\n"
                        "k = 6\nr = 4\nk_sweep = 3,6\npairs = 5\ncosts = 1,20\nparallel = yes\ntimeout = 0.5\n");
  const auto c = parse_bench_config(in);
  CHECK(c.graphs.size() == 2);
  CHECK(c.graphs[1].name() == "random:50:200");
  CHECK(c.k == 6);
  CHECK(c.k_sweep == std::vector<std::size_t>{3, 6});
  CHECK(c.costs.hi == 20);
  CHECK(c.parallel_queries);
  CHECK(c.timeout_seconds == 0.5);

  std::istringstream unknown("graph = road:10:12\nspeed = 3\n");
  CHECK_THROWS_AS(parse_bench_config(unknown), ParseError);
  std::istringstream no_graph("k = 3\n");
  CHECK_THROWS_AS(parse_bench_config(no_graph), ParseError);
  std::istringstream bad_method("graph = road:10:12\nmethods = astar\n");
  CHECK_THROWS_AS(parse_bench_config(bad_method), ParseError);
  CHECK_THROWS_AS(GraphSpec::parse("road:10"), ParseError);
}

TEST_CASE("a small run") {
  std::istringstream in("graph = road:400:480\nk = 8\nr = 4\npairs = 12\nr_sweep = 1,2\nn_sweep = 200\n");
  const auto report = run_benchmark(parse_bench_config(in));
  // base, r-sweep x2, n-sweep, each with two methods.
  REQUIRE(report.rows.size() == 8);
  for (const auto &row : report.rows) {
    CHECK(row.mismatches == 0);
    CHECK(row.timeouts == 0);
    CHECK(row.pairs == 12);
    if (row.method == "index") {
      CHECK(row.shrunk_vertices > 0);
      CHECK(row.filtered_vertices <= row.shrunk_vertices);
      CHECK(row.filtered_edges <= row.shrunk_edges);
      CHECK(row.index_bytes > 0);
      CHECK(row.avg_skyline >= 1.0);
    }
  }
  CHECK(report.rows[0].index_bytes < report.rows[1].index_bytes);
  CHECK(report.rows.back().n == 200);

  std::ostringstream csv, table;
  report.write_csv(csv);
  report.write_table(table);
  CHECK(csv.str().rfind("series,method,dataset,n,m,d,k,r,pairs,mean_query_seconds", 0) == 0);
  const std::string text = csv.str();
  CHECK(std::count(text.begin(), text.end(), '\n') == 9);
  CHECK(table.str().find("r-sweep") != std::string::npos);
}

}
