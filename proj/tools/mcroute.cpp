// mcroute: generate graphs, build partition indexes, answer optimal-route
// queries and run benchmarks.
//
// Exit codes: 0 ok, 1 usage, 2 bad data or I/O, 3 some query found no path.

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <json.hpp>

#include "mcroute/bench.hpp"
#include "mcroute/error.hpp"
#include "mcroute/index.hpp"
#include "mcroute/oracle.hpp"
#include "mcroute/partition.hpp"
#include "mcroute/query.hpp"
#include "mcroute/score.hpp"

using namespace mcroute;

namespace {

enum class Format { Human, Csv, Json };

constexpr int kUsage = 1, kData = 2, kNoPath = 3;

int default_threads() {
  if (const char *env = std::getenv("MCROUTE_THREADS")) {
    char *end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != env && *end == '\0' && v > 0) return static_cast<int>(v);
    std::cerr << "warning: ignoring MCROUTE_THREADS='" << env << "'\n";
  }
  return 1;
}

std::string join_path(const std::vector<VertexId> &vertices, char sep) {
  std::string out;
  for (std::size_t i = 0; i < vertices.size(); ++i) {
    if (i) out += sep;
    out += std::to_string(vertices[i]);
  }
  return out;
}

std::string cost_field(const CostVector &c) {
  std::ostringstream out;
  out.precision(17);
  for (std::size_t i = 0; i < c.dims(); ++i) out << (i ? ";" : "") << c[i];
  return out.str();
}

nlohmann::json cost_json(const CostVector &c) {
  auto out = nlohmann::json::array();
  for (std::size_t i = 0; i < c.dims(); ++i) out.push_back(c[i]);
  return out;
}

// One record of key/value fields printed in the chosen format. Human mode
// aligns keys; csv prints a header line before the first record.
class Emitter {
public:
  explicit Emitter(Format format) : format_(format) {}

  void record(const std::vector<std::pair<std::string, std::string>> &fields) {
    switch (format_) {
    case Format::Human:
      for (const auto &[k, v] : fields) std::cout << k << std::string(k.size() < 14 ? 14 - k.size() : 1, ' ') << v << '\n';
      break;
    case Format::Csv:
      if (!header_done_) {
        for (std::size_t i = 0; i < fields.size(); ++i) std::cout << (i ? "," : "") << fields[i].first;
        std::cout << '\n';
        header_done_ = true;
      }
      for (std::size_t i = 0; i < fields.size(); ++i) std::cout << (i ? "," : "") << fields[i].second;
      std::cout << '\n';
      break;
    case Format::Json: {
      nlohmann::json j = nlohmann::json::object();
      for (const auto &[k, v] : fields) j[k] = v;
      std::cout << j.dump() << '\n';
      break;
    }
    }
  }

private:
  Format format_;
  bool header_done_ = false;
};

std::vector<std::pair<VertexId, VertexId>> read_pairs(const std::string &path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::vector<std::pair<VertexId, VertexId>> out;
  std::string raw;
  std::size_t line = 0;
  while (std::getline(in, raw)) {
    ++line;
    if (const auto hash = raw.find('#'); hash != std::string::npos) raw.resize(hash);
    std::istringstream fields(raw);
    long long s = 0, e = 0;
    if (!(fields >> s)) continue;
    std::string extra;
    if (!(fields >> e) || (fields >> extra) || s < 0 || e < 0)
      throw ParseError(line, "expected 'source target' in '" + path + "'");
    out.emplace_back(static_cast<VertexId>(s), static_cast<VertexId>(e));
  }
  return out;
}

MultiCostGraph load_checked(const std::string &path, bool collapse) {
  LoadOptions options;
  options.collapse_duplicates = collapse;
  LoadReport report;
  MultiCostGraph g = load_graph_file(path, options, &report);
  if (report.duplicates_collapsed)
    std::cerr << "note: collapsed " << report.duplicates_collapsed << " duplicate edges\n";
  return g;
}

} // namespace

int main(int argc, char **argv) {
  CLI::App app{"Optimal routes on multi-cost networks with a partition index."};
  app.require_subcommand(1);
  app.set_version_flag("--version", "mcroute 1.0");

  Format format = Format::Human;
  const std::map<std::string, Format> formats{{"human", Format::Human}, {"csv", Format::Csv}, {"json", Format::Json}};
  auto add_format = [&](CLI::App *cmd) {
    cmd->add_option("--format", format, "human, csv or json (one object per line)")
        ->transform(CLI::CheckedTransformer(formats, CLI::ignore_case));
  };

  // gen
  std::string gen_kind = "road", gen_out;
  std::size_t gen_n = 1000, gen_m = 0, gen_d = 2;
  std::vector<std::int64_t> gen_costs{1, 10};
  std::uint64_t gen_seed = 7;
  auto *gen = app.add_subcommand("gen", "Generate a seeded synthetic graph");
  gen->add_option("--kind", gen_kind, "road (two directed edges per road) or random")
      ->check(CLI::IsMember({"road", "random"}));
  gen->add_option("-n,--vertices", gen_n, "Vertex count")->check(CLI::PositiveNumber);
  gen->add_option("-m,--edges", gen_m, "Roads for road graphs, directed edges for random ones (default 1.2n / 3n)");
  gen->add_option("-d,--dims", gen_d, "Cost dimensions")->check(CLI::Range(std::size_t{1}, kMaxDims));
  gen->add_option("--costs", gen_costs, "Integer cost range LO HI")->expected(2);
  gen->add_option("--seed", gen_seed, "Random seed");
  gen->add_option("-o,--output", gen_out, "Output file (default stdout)");
  add_format(gen);

  // partition
  std::string part_graph, part_out;
  std::size_t part_k = kDefaultSubsetCount;
  std::uint64_t part_seed = 7;
  bool collapse = false;
  auto *part = app.add_subcommand("partition", "Split a graph into k subsets");
  part->add_option("-g,--graph", part_graph, "Edge-list file")->required();
  part->add_option("-k,--subsets", part_k, "Subset count")->check(CLI::PositiveNumber);
  part->add_option("--seed", part_seed, "Random seed");
  part->add_option("-o,--output", part_out, "Write subset ids, one line per vertex");
  part->add_flag("--collapse-duplicates", collapse, "Keep the first of duplicate edges instead of failing");
  add_format(part);

  // build-index
  std::string build_graph, build_out, build_partition;
  std::size_t build_k = kDefaultSubsetCount, build_r = 8, build_cap = 0;
  std::uint64_t build_seed = 7;
  int build_threads = default_threads();
  bool build_timings = false;
  auto *build = app.add_subcommand("build-index", "Build and save a partition index");
  build->add_option("-g,--graph", build_graph, "Edge-list file")->required();
  build->add_option("-o,--output", build_out, "Index file")->required();
  build->add_option("-k,--subsets", build_k, "Subset count")->check(CLI::PositiveNumber);
  build->add_option("-r,--groups", build_r, "Contour groups per skyline set")->check(CLI::PositiveNumber);
  build->add_option("--seed", build_seed, "Random seed for partitioning and contour grouping");
  build->add_option("--partition", build_partition, "Use this subset-id file instead of partitioning");
  build->add_option("--threads", build_threads, "Build threads (default MCROUTE_THREADS or 1)")
      ->check(CLI::PositiveNumber);
  build->add_option("--max-skyline", build_cap, "Fail when one skyline set grows beyond this (0 = no cap)");
  build->add_flag("--timings", build_timings, "Also print phase timings in csv and json output");
  build->add_flag("--collapse-duplicates", collapse, "Keep the first of duplicate edges instead of failing");
  add_format(build);

  // query
  std::string query_graph, query_index, query_pairs, query_score = "sum_sq", query_method = "index";
  VertexId query_s = kNoVertex, query_t = kNoVertex;
  bool no_tau = false, no_dominance = false, no_contour = false, no_filter = false, force_bb = false;
  bool query_stats = false;
  double query_timeout = 0.0;
  auto *query = app.add_subcommand("query", "Find optimal paths");
  query->add_option("-g,--graph", query_graph, "Edge-list file")->required();
  query->add_option("-i,--index", query_index, "Index file (method index)");
  auto *opt_s = query->add_option("-s,--source", query_s, "Source vertex");
  auto *opt_t = query->add_option("-t,--target", query_t, "Target vertex");
  auto *opt_pairs = query->add_option("--pairs", query_pairs, "File of 'source target' lines");
  opt_s->needs(opt_t)->excludes(opt_pairs);
  opt_t->needs(opt_s);
  query->add_option("-f,--score", query_score,
                    "sum, sum_sq, sum_cube, pow:Q, weighted:W1,...,Wd or an expression in w1..wd");
  query->add_option("--method", query_method, "index, bf or oracle")->check(CLI::IsMember({"index", "bf", "oracle"}));
  query->add_flag("--no-tau", no_tau, "Disable upper-bound pruning");
  query->add_flag("--no-dominance", no_dominance, "Disable dominance pruning");
  query->add_flag("--no-contour", no_contour, "Expand skyline pairs without contour bounds");
  query->add_flag("--no-filter", no_filter, "Skip vertex filtering");
  query->add_flag("--force-bb", force_bb, "Branch and bound even for linear score functions");
  query->add_flag("--stats", query_stats, "Add search counters and timings to each record");
  query->add_option("--timeout", query_timeout, "Seconds per query, 0 = none")->check(CLI::NonNegativeNumber);
  query->add_flag("--collapse-duplicates", collapse, "Keep the first of duplicate edges instead of failing");
  add_format(query);

  // bench
  std::string bench_config;
  std::vector<std::string> bench_set;
  auto *bench = app.add_subcommand("bench", "Time index queries against the baseline");
  bench->add_option("-c,--config", bench_config, "key = value config file");
  bench->add_option("--set", bench_set, "Override one config line, e.g. --set pairs=20");
  add_format(bench);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp &e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion &e) {
    return app.exit(e);
  } catch (const CLI::ParseError &e) {
    std::cerr << "error: " << e.what() << "\n\n";
    const auto used = app.get_subcommands();
    std::cerr << (used.empty() ? app.help() : used.front()->help());
    return kUsage;
  }

  try {
    Emitter emit(format);

    if (gen->parsed()) {
      if (gen_costs[0] < 0 || gen_costs[0] > gen_costs[1]) {
        std::cerr << "--costs: need 0 <= LO <= HI\n";
        return kUsage;
      }
      const CostRange costs{gen_costs[0], gen_costs[1]};
      const std::size_t m = gen_m ? gen_m : (gen_kind == "road" ? gen_n * 6 / 5 : gen_n * 3);
      const MultiCostGraph g = gen_kind == "road" ? generate_road_graph(gen_n, m, gen_d, costs, gen_seed)
                                                  : generate_random_graph(gen_n, m, gen_d, costs, gen_seed);
      if (gen_out.empty()) {
        save_graph(std::cout, g);
      } else {
        save_graph_file(gen_out, g);
        emit.record({{"vertices", std::to_string(g.vertex_count())},
                     {"edges", std::to_string(g.edge_count())},
                     {"dims", std::to_string(g.dims())},
                     {"hash", std::to_string(graph_hash(g))}});
      }
      return 0;
    }

    if (part->parsed()) {
      const MultiCostGraph g = load_checked(part_graph, collapse);
      const PartitionLayout layout = partition_graph(g, part_k, part_seed);
      if (!part_out.empty()) {
        std::ofstream out(part_out);
        if (!out) throw Error("cannot write '" + part_out + "'");
        save_partition(out, layout);
      }
      emit.record({{"subsets", std::to_string(layout.k)},
                   {"cut_edges", std::to_string(layout.cut_edges)},
                   {"largest", std::to_string(layout.largest_subset())},
                   {"entries", std::to_string(layout.all_entries().size())},
                   {"exits", std::to_string(layout.all_exits().size())},
                   {"borders", std::to_string(layout.borders().size())}});
      return 0;
    }

    if (build->parsed()) {
      const MultiCostGraph g = load_checked(build_graph, collapse);
      IndexBuildOptions options;
      options.k = build_k;
      options.r = build_r;
      options.seed = build_seed;
      options.contour_seed = build_seed;
      options.threads = build_threads;
      options.max_skyline = build_cap;
      if (!build_partition.empty()) {
        std::ifstream in(build_partition);
        if (!in) throw Error("cannot open '" + build_partition + "'");
        options.layout = load_partition(in, g);
      }
      const PartitionIndex index = build_index(g, options);
      save_index_file(build_out, index);
      const auto &meta = index.meta;
      std::vector<std::pair<std::string, std::string>> fields{
          {"subsets", std::to_string(index.layout.k)},
          {"borders", std::to_string(index.layout.borders().size())},
          {"pairs", std::to_string(index.pair_count())},
          {"skyline_paths", std::to_string(index.skyline_path_count())},
          {"index_bytes", std::to_string(meta.sizes.total)},
          {"skyline_bytes", std::to_string(meta.sizes.skyline)},
          {"contour_bytes", std::to_string(meta.sizes.contour)},
          {"lbop_bytes", std::to_string(meta.sizes.inter + meta.sizes.inner_lbop)}};
      if (format == Format::Human || build_timings) {
        fields.push_back({"partition_s", std::to_string(meta.partition_seconds)});
        fields.push_back({"lbop_s", std::to_string(meta.lbop_seconds)});
        fields.push_back({"skyline_s", std::to_string(meta.skyline_seconds)});
        fields.push_back({"contour_s", std::to_string(meta.contour_seconds)});
      }
      emit.record(fields);
      return 0;
    }

    if (query->parsed()) {
      if (query_pairs.empty() && query_s == kNoVertex) {
        std::cerr << "query: give -s/-t or --pairs\n" << query->help();
        return kUsage;
      }
      if (query_method == "index" && query_index.empty()) {
        std::cerr << "query: method index needs --index\n";
        return kUsage;
      }
      const MultiCostGraph g = load_checked(query_graph, collapse);
      const ScoreFunction f = register_score_function(query_score, g.dims());
      const auto pairs =
          query_pairs.empty() ? std::vector<std::pair<VertexId, VertexId>>{{query_s, query_t}} : read_pairs(query_pairs);
      std::optional<PartitionIndex> index;
      std::optional<QueryEngine> engine;
      if (query_method == "index") {
        index = load_index_file(query_index, g);
        engine.emplace(g, *index);
      }
      QueryOptions options;
      options.tau_pruning = !no_tau;
      options.dominance = !no_dominance;
      options.contour = !no_contour;
      options.filtering = !no_filter;
      options.force_bb = force_bb;
      options.time_limit_seconds = query_timeout;
      options.collect_graph_stats = query_stats;

      bool missing = false;
      bool first = true;
      for (const auto &[s, e] : pairs) {
        if (s >= g.vertex_count() || e >= g.vertex_count())
          throw GraphError("query vertex " + std::to_string(std::max(s, e)) + " outside the graph");
        QueryResult r;
        if (query_method == "index")
          r = engine->query(s, e, f, options);
        else if (query_method == "bf")
          r = bf_search_baseline(g, s, e, f, options);
        else
          r = oracle_optimal_path(g, s, e, f);
        missing = missing || !r.found;
        std::ostringstream score;
        score.precision(17);
        score << r.score;
        std::vector<std::pair<std::string, std::string>> fields{
            {"source", std::to_string(s)},
            {"target", std::to_string(e)},
            {"status", r.found ? (r.stats.timed_out ? "TIMEOUT" : "OK") : "NO PATH"},
            {"score", r.found ? score.str() : ""},
            {"cost", r.found ? cost_field(r.cost) : ""},
            {"hops", r.found ? std::to_string(r.path.vertices.size() - 1) : ""},
            {"path", r.found ? join_path(r.path.vertices, format == Format::Human ? ' ' : ';') : ""}};
        if (query_stats) {
          const auto &st = r.stats;
          fields.push_back({"pushed", std::to_string(st.nodes_pushed)});
          fields.push_back({"expanded", std::to_string(st.nodes_expanded)});
          fields.push_back({"shrunk_vertices", std::to_string(st.shrunk_vertices)});
          fields.push_back({"shrunk_edges", std::to_string(st.shrunk_edges)});
          fields.push_back({"filtered_vertices", std::to_string(st.filtered_vertices)});
          fields.push_back({"filtered_edges", std::to_string(st.filtered_edges)});
          fields.push_back({"seconds", std::to_string(st.seconds)});
        }
        if (format == Format::Json) {
          // Numbers as numbers.
          nlohmann::json j = nlohmann::json::object();
          j["source"] = s;
          j["target"] = e;
          j["status"] = fields[2].second;
          if (r.found) {
            j["score"] = r.score;
            j["cost"] = cost_json(r.cost);
            j["path"] = r.path.vertices;
          }
          for (std::size_t i = 7; i < fields.size(); ++i) j[fields[i].first] = std::stod(fields[i].second);
          std::cout << j.dump() << '\n';
        } else {
          if (format == Format::Human && !first) std::cout << '\n';
          emit.record(fields);
        }
        first = false;
      }
      return missing ? kNoPath : 0;
    }

    if (bench->parsed()) {
      std::stringstream text;
      text << "threads = " << default_threads() << '\n';
      if (!bench_config.empty()) {
        std::ifstream in(bench_config);
        if (!in) throw Error("cannot open '" + bench_config + "'");
        text << in.rdbuf() << '\n';
      }
      for (const auto &line : bench_set) text << line << '\n';
      const BenchConfig config = parse_bench_config(text);
      const BenchReport report = run_benchmark(config, &std::cerr);
      if (format == Format::Csv) {
        report.write_csv(std::cout);
      } else if (format == Format::Json) {
        std::stringstream csv;
        report.write_csv(csv);
        std::string header, line;
        std::getline(csv, header);
        std::vector<std::string> keys;
        std::stringstream hs(header);
        for (std::string k; std::getline(hs, k, ',');) keys.push_back(k);
        while (std::getline(csv, line)) {
          nlohmann::json j = nlohmann::json::object();
          std::stringstream ls(line);
          std::string v;
          for (std::size_t i = 0; i < keys.size() && std::getline(ls, v, ','); ++i) j[keys[i]] = v;
          std::cout << j.dump() << '\n';
        }
      } else {
        report.write_table(std::cout);
      }
      return 0;
    }
  } catch (const ScoreFunctionError &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception &e) {
    std::cerr << "error: " << e.what() << '\n';
    return kData;
  }
  return 0;
}
