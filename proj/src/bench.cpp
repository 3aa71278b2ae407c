#include "mcroute/bench.hpp"

#include <algorithm>
#include <chrono>
#include <fstream>
#include <iomanip>
#include <random>
#include <sstream>

#include "mcroute/error.hpp"
#include "mcroute/index.hpp"
#include "mcroute/oracle.hpp"
#include "mcroute/query.hpp"
#include "mcroute/score.hpp"

namespace mcroute {

namespace {

std::string trim(const std::string &s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string &s, char sep) {
  std::vector<std::string> out;
  std::stringstream in(s);
  std::string item;
  while (std::getline(in, item, sep))
    if (auto t = trim(item); !t.empty()) out.push_back(t);
  return out;
}

std::size_t to_size(const std::string &s, std::size_t line) {
  std::size_t used = 0;
  unsigned long long v = 0;
  try {
    v = std::stoull(s, &used);
  } catch (const std::exception &) {
    throw ParseError(line, "expected a non-negative integer, got '" + s + "'");
  }
  if (used != s.size() || s[0] == '-') throw ParseError(line, "expected a non-negative integer, got '" + s + "'");
  return static_cast<std::size_t>(v);
}

double to_double(const std::string &s, std::size_t line) {
  std::size_t used = 0;
  double v = 0;
  try {
    v = std::stod(s, &used);
  } catch (const std::exception &) {
    throw ParseError(line, "expected a number, got '" + s + "'");
  }
  if (used != s.size()) throw ParseError(line, "expected a number, got '" + s + "'");
  return v;
}

bool to_bool(const std::string &s, std::size_t line) {
  if (s == "true" || s == "1" || s == "yes" || s == "on") return true;
  if (s == "false" || s == "0" || s == "no" || s == "off") return false;
  throw ParseError(line, "expected true or false, got '" + s + "'");
}

std::vector<std::size_t> to_sizes(const std::string &s, std::size_t line) {
  std::vector<std::size_t> out;
  for (const auto &item : split(s, ',')) out.push_back(to_size(item, line));
  return out;
}

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

std::vector<std::pair<VertexId, VertexId>> query_pairs(std::size_t n, std::size_t count, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_int_distribution<VertexId> pick(0, static_cast<VertexId>(n - 1));
  std::vector<std::pair<VertexId, VertexId>> out;
  for (std::size_t i = 0; i < count; ++i) {
    const VertexId s = pick(rng);
    out.emplace_back(s, pick(rng));
  }
  return out;
}

struct Case {
  std::string series;
  std::string dataset;
  const MultiCostGraph *graph = nullptr;
  std::size_t k = 0, r = 0;
};

class Runner {
public:
  Runner(const BenchConfig &config, std::ostream *log)
      : config_(config), log_(log), f_(register_score_function(config.score, config.d)) {}

  void run(const Case &c, BenchReport &report) {
    const MultiCostGraph &g = *c.graph;
    const auto pairs = query_pairs(g.vertex_count(), config_.pairs, config_.seed);
    std::vector<double> reference;
    for (std::size_t mi = 0; mi < config_.methods.size(); ++mi) {
      const std::string &method = config_.methods[mi];
      BenchRow row;
      row.series = c.series;
      row.method = method;
      row.dataset = c.dataset;
      row.n = g.vertex_count();
      row.m = g.edge_count();
      row.d = g.dims();
      row.k = c.k;
      row.r = c.r;
      row.pairs = pairs.size();

      std::vector<QueryResult> results(pairs.size());
      std::vector<double> seconds(pairs.size(), 0.0);
      QueryOptions options;
      options.time_limit_seconds = config_.timeout_seconds;

      if (method == "index") {
        const auto start = std::chrono::steady_clock::now();
        IndexBuildOptions build;
        build.k = c.k;
        build.r = c.r;
        build.seed = config_.seed;
        build.contour_seed = config_.seed;
        build.threads = config_.threads;
        const PartitionIndex index = build_index(g, build);
        row.build_seconds = seconds_since(start);
        row.index_bytes = static_cast<long long>(index.meta.sizes.total);
        if (index.pair_count() > 0)
          row.avg_skyline = static_cast<double>(index.skyline_path_count()) / static_cast<double>(index.pair_count());
        const QueryEngine engine(g, index);
        timed(pairs, results, seconds, [&](VertexId s, VertexId e) { return engine.query(s, e, f_, options); });
        if (config_.graph_stats) {
          QueryOptions counting = options;
          counting.collect_graph_stats = true;
          counting.time_limit_seconds = 0.0;
          for (std::size_t i = 0; i < pairs.size(); ++i) {
            const auto stats = engine.query(pairs[i].first, pairs[i].second, f_, counting).stats;
            results[i].stats.shrunk_edges = stats.shrunk_edges;
            results[i].stats.filtered_edges = stats.filtered_edges;
          }
        }
      } else if (method == "bf") {
        if (g.vertex_count() <= config_.baseline_size_limit)
          row.index_bytes = static_cast<long long>(all_pairs_skyline_bytes(g));
        timed(pairs, results, seconds,
              [&](VertexId s, VertexId e) { return bf_search_baseline(g, s, e, f_, options); });
      } else {
        throw Error("unknown benchmark method '" + method + "' (index, bf)");
      }

      double total = 0.0, fraction = 0.0;
      std::size_t counted = 0;
      for (std::size_t i = 0; i < pairs.size(); ++i) {
        const QueryResult &q = results[i];
        total += seconds[i];
        if (q.stats.timed_out) ++row.timeouts;
        if (!q.found) ++row.no_path;
        if (q.stats.shrunk_vertices > 0) {
          const double kept = static_cast<double>(q.stats.shrunk_vertices - q.stats.filtered_vertices);
          row.shrunk_vertices += static_cast<double>(q.stats.shrunk_vertices);
          row.filtered_vertices += kept;
          row.shrunk_edges += static_cast<double>(q.stats.shrunk_edges);
          row.filtered_edges += static_cast<double>(q.stats.filtered_edges);
          fraction += 1.0 - kept / static_cast<double>(q.stats.shrunk_vertices);
          ++counted;
        }
      }
      if (!pairs.empty()) row.mean_seconds = total / static_cast<double>(pairs.size());
      if (counted) {
        const double c_count = static_cast<double>(counted);
        row.shrunk_vertices /= c_count;
        row.filtered_vertices /= c_count;
        row.shrunk_edges /= c_count;
        row.filtered_edges /= c_count;
        row.filtered_fraction = fraction / c_count;
      }
      if (mi == 0) {
        reference.clear();
        for (const auto &q : results) reference.push_back(q.stats.timed_out ? -1.0 : q.score);
      } else {
        for (std::size_t i = 0; i < pairs.size(); ++i)
          if (!results[i].stats.timed_out && reference[i] >= 0.0 && results[i].score != reference[i])
            ++row.mismatches;
      }
      if (log_)
        *log_ << row.series << ' ' << row.dataset << ' ' << row.method << " k=" << row.k << " r=" << row.r
              << " mean " << row.mean_seconds * 1e3 << " ms" << std::endl;
      report.rows.push_back(row);
    }
  }

private:
  template <typename Query>
  void timed(const std::vector<std::pair<VertexId, VertexId>> &pairs, std::vector<QueryResult> &results,
             std::vector<double> &seconds, Query &&query) {
    const auto count = static_cast<long long>(pairs.size());
    const int nthreads = config_.parallel_queries ? std::max(1, config_.threads) : 1;
#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads) if (nthreads > 1)
    for (long long i = 0; i < count; ++i) {
      const auto start = std::chrono::steady_clock::now();
      results[i] = query(pairs[i].first, pairs[i].second);
      seconds[i] = seconds_since(start);
    }
  }

  const BenchConfig &config_;
  std::ostream *log_;
  ScoreFunction f_;
};

std::string csv_double(double v) {
  std::ostringstream out;
  out << std::setprecision(9) << v;
  return out.str();
}

} // namespace

GraphSpec GraphSpec::parse(const std::string &text) {
  GraphSpec spec{trim(text)};
  if (spec.text.empty()) throw ParseError(0, "empty graph spec");
  const auto parts = split(spec.text, ':');
  if ((parts[0] == "road" || parts[0] == "random")) {
    if (parts.size() != 3) throw ParseError(0, "graph spec '" + spec.text + "' should be " + parts[0] + ":N:M");
    to_size(parts[1], 0);
    to_size(parts[2], 0);
  }
  return spec;
}

MultiCostGraph GraphSpec::materialize(std::size_t d, CostRange costs, std::uint64_t seed) const {
  const auto parts = split(text, ':');
  if (parts.size() == 3 && parts[0] == "road")
    return generate_road_graph(to_size(parts[1], 0), to_size(parts[2], 0), d, costs, seed);
  if (parts.size() == 3 && parts[0] == "random")
    return generate_random_graph(to_size(parts[1], 0), to_size(parts[2], 0), d, costs, seed);
  MultiCostGraph g = load_graph_file(text);
  if (g.dims() != d)
    throw GraphError("graph '" + text + "' has " + std::to_string(g.dims()) + " cost dimensions, config says " +
                     std::to_string(d));
  return g;
}

std::string GraphSpec::name() const {
  const auto parts = split(text, ':');
  if (parts.size() == 3 && (parts[0] == "road" || parts[0] == "random")) return text;
  const auto slash = text.find_last_of('/');
  return slash == std::string::npos ? text : text.substr(slash + 1);
}

BenchConfig parse_bench_config(std::istream &in) {
  BenchConfig config;
  config.graphs.clear();
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    const std::string text = trim(raw);
    if (text.empty()) continue;
    const auto eq = text.find('=');
    if (eq == std::string::npos) throw ParseError(line, "expected key = value");
    const std::string key = trim(text.substr(0, eq)), value = trim(text.substr(eq + 1));
    if (value.empty()) throw ParseError(line, "missing value for '" + key + "'");
    try {
      if (key == "graph") {
        config.graphs.push_back(GraphSpec::parse(value));
      } else if (key == "methods") {
        config.methods = split(value, ',');
        for (const auto &m : config.methods)
          if (m != "index" && m != "bf") throw ParseError(line, "unknown method '" + m + "' (index, bf)");
      } else if (key == "d") {
        config.d = to_size(value, line);
      } else if (key == "k") {
        config.k = to_size(value, line);
      } else if (key == "r") {
        config.r = to_size(value, line);
      } else if (key == "k_sweep") {
        config.k_sweep = to_sizes(value, line);
      } else if (key == "r_sweep") {
        config.r_sweep = to_sizes(value, line);
      } else if (key == "n_sweep") {
        config.n_sweep = to_sizes(value, line);
      } else if (key == "pairs") {
        config.pairs = to_size(value, line);
      } else if (key == "seed") {
        config.seed = to_size(value, line);
      } else if (key == "score") {
        config.score = value;
      } else if (key == "costs") {
        const auto bounds = split(value, ',');
        if (bounds.size() != 2) throw ParseError(line, "costs = LO,HI");
        config.costs = {static_cast<std::int64_t>(to_size(bounds[0], line)),
                        static_cast<std::int64_t>(to_size(bounds[1], line))};
        if (config.costs.lo > config.costs.hi) throw ParseError(line, "costs: LO > HI");
      } else if (key == "timeout") {
        config.timeout_seconds = to_double(value, line);
      } else if (key == "threads") {
        config.threads = static_cast<int>(to_size(value, line));
      } else if (key == "parallel") {
        config.parallel_queries = to_bool(value, line);
      } else if (key == "graph_stats") {
        config.graph_stats = to_bool(value, line);
      } else if (key == "baseline_size_limit") {
        config.baseline_size_limit = to_size(value, line);
      } else {
        throw ParseError(line, "unknown key '" + key + "'");
      }
    } catch (const ParseError &e) {
      if (e.line()) throw;
      throw ParseError(line, e.what());
    }
  }
  if (config.graphs.empty()) throw ParseError(0, "no graph given");
  if (config.methods.empty()) throw ParseError(0, "no method given");
  if (config.d == 0 || config.d > kMaxDims) throw ParseError(0, "d must be in 1.." + std::to_string(kMaxDims));
  return config;
}

BenchConfig parse_bench_config_file(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return parse_bench_config(in);
}

BenchReport run_benchmark(const BenchConfig &config, std::ostream *log) {
  BenchReport report;
  Runner runner(config, log);
  std::vector<MultiCostGraph> graphs;
  for (const auto &spec : config.graphs) graphs.push_back(spec.materialize(config.d, config.costs, config.seed));

  for (std::size_t i = 0; i < graphs.size(); ++i)
    runner.run({"base", config.graphs[i].name(), &graphs[i], config.k, config.r}, report);

  const std::string first = config.graphs.front().name();
  for (auto k : config.k_sweep) runner.run({"k-sweep", first, &graphs.front(), k, config.r}, report);
  for (auto r : config.r_sweep) runner.run({"r-sweep", first, &graphs.front(), config.k, r}, report);
  if (!config.n_sweep.empty()) {
    const MultiCostGraph &g = graphs.front();
    // Roads per vertex, taken from the first graph (two directed edges per road).
    const double ratio = static_cast<double>(g.edge_count()) / 2.0 / static_cast<double>(g.vertex_count());
    for (auto n : config.n_sweep) {
      const auto roads = std::max<std::size_t>(n, static_cast<std::size_t>(ratio * static_cast<double>(n)));
      const MultiCostGraph sweep = generate_road_graph(n, roads, config.d, config.costs, config.seed);
      runner.run({"n-sweep", "road:" + std::to_string(n) + ":" + std::to_string(roads), &sweep, config.k, config.r},
                 report);
    }
  }
  return report;
}

void BenchReport::write_csv(std::ostream &out) const {
  out << "series,method,dataset,n,m,d,k,r,pairs,mean_query_seconds,build_seconds,index_bytes,"
         "shrunk_vertices,shrunk_edges,filtered_vertices,filtered_edges,filtered_fraction,avg_skyline,"
         "timeouts,mismatches,no_path\n";
  for (const auto &row : rows) {
    out << row.series << ',' << row.method << ',' << row.dataset << ',' << row.n << ',' << row.m << ',' << row.d
        << ',' << row.k << ',' << row.r << ',' << row.pairs << ',' << csv_double(row.mean_seconds) << ','
        << csv_double(row.build_seconds) << ',';
    if (row.index_bytes >= 0) out << row.index_bytes;
    out << ',' << csv_double(row.shrunk_vertices) << ',' << csv_double(row.shrunk_edges) << ','
        << csv_double(row.filtered_vertices) << ',' << csv_double(row.filtered_edges) << ','
        << csv_double(row.filtered_fraction) << ',' << csv_double(row.avg_skyline) << ',' << row.timeouts << ','
        << row.mismatches << ',' << row.no_path << '\n';
  }
}

void BenchReport::write_table(std::ostream &out) const {
  const std::vector<std::string> head{"series", "method", "dataset", "k",  "r",   "query ms",  "build s",
                                      "index MB", "|V|",  "|V_f|",   "filt%", "avg SP", "timeouts", "mismatch"};
  std::vector<std::vector<std::string>> cells;
  auto fixed = [](double v, int digits) {
    std::ostringstream s;
    s << std::fixed << std::setprecision(digits) << v;
    return s.str();
  };
  for (const auto &row : rows) {
    const bool index = row.method == "index";
    cells.push_back({row.series, row.method, row.dataset, std::to_string(row.k), std::to_string(row.r),
                     fixed(row.mean_seconds * 1e3, 3), index ? fixed(row.build_seconds, 2) : "-",
                     row.index_bytes >= 0 ? fixed(static_cast<double>(row.index_bytes) / 1048576.0, 3) : "-",
                     index ? fixed(row.shrunk_vertices, 0) : "-", index ? fixed(row.filtered_vertices, 0) : "-",
                     index ? fixed(row.filtered_fraction * 100.0, 1) : "-", index ? fixed(row.avg_skyline, 2) : "-",
                     std::to_string(row.timeouts), std::to_string(row.mismatches)});
  }
  std::vector<std::size_t> width(head.size());
  for (std::size_t c = 0; c < head.size(); ++c) {
    width[c] = head[c].size();
    for (const auto &r : cells) width[c] = std::max(width[c], r[c].size());
  }
  auto line = [&](const std::vector<std::string> &r) {
    for (std::size_t c = 0; c < r.size(); ++c) out << (c ? "  " : "") << std::setw(static_cast<int>(width[c])) << r[c];
    out << '\n';
  };
  line(head);
  for (const auto &r : cells) line(r);
}

} // namespace mcroute
