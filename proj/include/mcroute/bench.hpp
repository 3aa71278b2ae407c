#ifndef MCROUTE_BENCH_HPP
#define MCROUTE_BENCH_HPP

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "mcroute/graph.hpp"

namespace mcroute {

/// `road:N:M` (M undirected roads), `random:N:M` (M directed edges) or a
/// path to an edge-list file.
struct GraphSpec {
  std::string text;

  static GraphSpec parse(const std::string &text);
  MultiCostGraph materialize(std::size_t d, CostRange costs, std::uint64_t seed) const;
  std::string name() const;
};

struct BenchConfig {
  std::vector<GraphSpec> graphs;
  std::vector<std::string> methods{"index", "bf"};
  std::size_t d = 2;
  std::size_t k = 50;
  std::size_t r = 8;
  /// Extra series on the first graph; empty = skipped.
  std::vector<std::size_t> k_sweep;
  std::vector<std::size_t> r_sweep;
  /// Road graphs of these sizes with the first graph's edge ratio.
  std::vector<std::size_t> n_sweep;
  std::size_t pairs = 100;
  std::uint64_t seed = 7;
  std::string score = "sum_sq";
  CostRange costs{1, 10};
  /// Per query, 0 = none. Timeouts are counted, not fatal.
  double timeout_seconds = 0.0;
  int threads = 1;
  /// Run the pairs of one method across threads, each timed on its own.
  bool parallel_queries = false;
  /// Untimed second pass counting shrunk-graph edges.
  bool graph_stats = true;
  /// Largest graph for which the all-pairs skyline size is measured.
  std::size_t baseline_size_limit = 1000;
};

/// `key = value` lines, `#` comments. `graph` may repeat; lists are comma
/// separated. Throws ParseError.
BenchConfig parse_bench_config(std::istream &in);
BenchConfig parse_bench_config_file(const std::string &path);

struct BenchRow {
  std::string series; // base, k-sweep, r-sweep, n-sweep
  std::string method;
  std::string dataset;
  std::size_t n = 0, m = 0, d = 0, k = 0, r = 0;
  std::size_t pairs = 0;
  double mean_seconds = 0.0;
  double build_seconds = 0.0;
  /// -1 when not measured.
  long long index_bytes = -1;
  double shrunk_vertices = 0.0;  // mean |V̄|
  double shrunk_edges = 0.0;     // mean |Ē|
  double filtered_vertices = 0.0; // mean |V̄_f|
  double filtered_edges = 0.0;    // mean |Ē_f|
  double filtered_fraction = 0.0; // mean of 1 - |V̄_f| / |V̄|
  double avg_skyline = 0.0;       // mean stored skyline paths per pair
  std::size_t timeouts = 0;
  std::size_t mismatches = 0; // score differs from the first method's
  std::size_t no_path = 0;
};

struct BenchReport {
  std::vector<BenchRow> rows;

  void write_csv(std::ostream &out) const;
  void write_table(std::ostream &out) const;
};

/// `log`, when given, receives one progress line per row.
BenchReport run_benchmark(const BenchConfig &config, std::ostream *log = nullptr);

} // namespace mcroute

#endif // MCROUTE_BENCH_HPP
