#include "mcroute/index.hpp"

#include <algorithm>
#include <chrono>
#include <cstring>
#include <exception>
#include <fstream>
#include <istream>
#include <iterator>
#include <limits>
#include <map>
#include <mutex>
#include <ostream>

#include <json.hpp>

#include "mcroute/error.hpp"

namespace mcroute {

std::vector<VertexId> EntrySkylines::label_path(std::uint32_t label) const {
  std::vector<VertexId> out;
  for (auto l = label; l != ParetoTree::kNoLabel; l = parent[l]) out.push_back(vertex[l]);
  std::reverse(out.begin(), out.end());
  return out;
}

const EntrySkylines &PartitionIndex::from_entry(VertexId entry) const {
  if (entry >= layout.vertex_count() || !layout.is_entry[entry])
    throw GraphError("vertex " + std::to_string(entry) + " is not an entry");
  return skylines[layout.subset_of(entry)][inner_lbop.entry_pos(entry)];
}

const std::vector<std::uint32_t> &PartitionIndex::pair_labels(VertexId entry, VertexId exit) const {
  const auto &tree = from_entry(entry);
  if (exit >= layout.vertex_count() || !layout.is_exit[exit] ||
      layout.subset_of(exit) != layout.subset_of(entry))
    throw GraphError("vertex " + std::to_string(exit) + " is not an exit of the entry's subset");
  return tree.exit_labels[inner_lbop.exit_pos(exit)];
}

const ContourSkylineSet &PartitionIndex::contour_set(VertexId entry, VertexId exit) const {
  pair_labels(entry, exit); // validates the pair
  return from_entry(entry).contours[inner_lbop.exit_pos(exit)];
}

SkylinePathSet PartitionIndex::skyline_set(VertexId entry, VertexId exit) const {
  const auto &labels = pair_labels(entry, exit);
  const auto &tree = from_entry(entry);
  SkylinePathSet out{entry, exit, {}};
  for (auto l : labels) out.paths.push_back(Path{tree.label_path(l), tree.label_cost(l)});
  return out;
}

std::size_t PartitionIndex::pair_count() const {
  std::size_t count = 0;
  for (SubsetId p = 0; p < skylines.size(); ++p)
    for (const auto &tree : skylines[p])
      for (std::size_t x = 0; x < layout.exits[p].size(); ++x)
        count += layout.exits[p][x] != tree.entry && !tree.exit_labels[x].empty();
  return count;
}

std::size_t PartitionIndex::skyline_path_count() const {
  std::size_t count = 0;
  for (const auto &subset : skylines)
    for (const auto &tree : subset)
      for (const auto &labels : tree.exit_labels) count += labels.size();
  return count;
}

bool PartitionIndex::same_content(const PartitionIndex &other) const {
  return layout == other.layout && inter == other.inter && inner_lbop == other.inner_lbop &&
         skylines == other.skylines && graph_hash == other.graph_hash && dims == other.dims &&
         vertex_count == other.vertex_count && edge_count == other.edge_count && integral == other.integral &&
         meta.k == other.meta.k && meta.r == other.meta.r && meta.seed == other.meta.seed &&
         meta.contour_seed == other.meta.contour_seed;
}

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

// Runs body(i) for i in [0, count); the first exception is rethrown after
// the loop.
template <typename Body>
void parallel_for(std::size_t count, int threads, Body &&body) {
  std::exception_ptr failure;
  std::mutex failure_mutex;
  const auto n = static_cast<std::ptrdiff_t>(count);
  const int nthreads = std::max(1, threads);
#pragma omp parallel for schedule(dynamic, 1) num_threads(nthreads) if (nthreads > 1)
  for (std::ptrdiff_t i = 0; i < n; ++i) {
    try {
      body(static_cast<std::size_t>(i));
    } catch (...) {
      std::lock_guard lock(failure_mutex);
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);
}

EntrySkylines entry_tree(const Subgraph &sub, const PartitionLayout &layout, SubsetId p, VertexId entry,
                         std::size_t max_skyline) {
  const auto &exits = layout.exits[p];
  const std::size_t d = sub.graph.dims();
  EntrySkylines out;
  out.entry = entry;
  out.dims = d;
  out.exit_labels.resize(exits.size());
  out.contours.resize(exits.size());

  const ParetoTree tree = pareto_search(sub.graph, sub.to_local(entry));
  std::vector<char> keep(tree.labels.size(), 0);
  for (std::size_t x = 0; x < exits.size(); ++x) {
    if (exits[x] == entry) continue;
    const auto &at = tree.at_vertex[sub.to_local(exits[x])];
    if (max_skyline && at.size() > max_skyline)
      throw SkylineCapExceeded("skyline between " + std::to_string(entry) + " and " + std::to_string(exits[x]) +
                               " has " + std::to_string(at.size()) + " paths, cap is " +
                               std::to_string(max_skyline));
    for (auto l : at)
      for (auto a = l; a != ParetoTree::kNoLabel && !keep[a]; a = tree.labels[a].parent) keep[a] = 1;
  }

  std::vector<std::uint32_t> remap(tree.labels.size(), ParetoTree::kNoLabel);
  for (std::uint32_t l = 0; l < tree.labels.size(); ++l) {
    if (!keep[l]) continue;
    const auto &label = tree.labels[l];
    remap[l] = static_cast<std::uint32_t>(out.vertex.size());
    out.vertex.push_back(sub.to_parent[label.vertex]);
    out.parent.push_back(label.parent == ParetoTree::kNoLabel ? ParetoTree::kNoLabel : remap[label.parent]);
    out.cost.insert(out.cost.end(), label.cost.values().begin(), label.cost.values().end());
  }
  for (std::size_t x = 0; x < exits.size(); ++x) {
    if (exits[x] == entry) continue;
    for (auto l : tree.at_vertex[sub.to_local(exits[x])]) out.exit_labels[x].push_back(remap[l]);
  }
  return out;
}

} // namespace

std::vector<std::vector<EntrySkylines>> build_skyline_trees(const MultiCostGraph &g,
                                                            const PartitionLayout &layout, int threads,
                                                            std::size_t max_skyline) {
  std::vector<std::vector<EntrySkylines>> out(layout.k);
  std::vector<Subgraph> subs(layout.k);
  std::vector<std::pair<SubsetId, std::size_t>> jobs;
  for (SubsetId p = 0; p < layout.k; ++p) {
    out[p].resize(layout.entries[p].size());
    for (std::size_t i = 0; i < layout.entries[p].size(); ++i) jobs.emplace_back(p, i);
  }
  parallel_for(layout.k, threads, [&](std::size_t p) {
    if (!layout.entries[p].empty()) subs[p] = induced_subgraph(g, layout.members[p]);
  });
  parallel_for(jobs.size(), threads, [&](std::size_t j) {
    const auto [p, i] = jobs[j];
    out[p][i] = entry_tree(subs[p], layout, p, layout.entries[p][i], max_skyline);
  });
  return out;
}

void build_contours(std::vector<std::vector<EntrySkylines>> &skylines, std::size_t r, std::uint64_t seed,
                    int threads) {
  std::vector<EntrySkylines *> jobs;
  for (auto &subset : skylines)
    for (auto &tree : subset) jobs.push_back(&tree);
  parallel_for(jobs.size(), threads, [&](std::size_t j) {
    EntrySkylines &tree = *jobs[j];
    tree.contours.assign(tree.exit_labels.size(), {});
    for (std::size_t x = 0; x < tree.exit_labels.size(); ++x) {
      const auto &labels = tree.exit_labels[x];
      if (labels.empty()) continue;
      std::vector<CostVector> points;
      for (auto l : labels) points.push_back(tree.label_cost(l));
      tree.contours[x] = build_contour_set(points, r, seed);
    }
  });
}

PartitionIndex build_index(const MultiCostGraph &g, const IndexBuildOptions &options) {
  if (options.r < 1) throw std::invalid_argument("build_index: r must be at least 1");
  PartitionIndex index;
  index.graph_hash = graph_hash(g);
  index.dims = g.dims();
  index.vertex_count = g.vertex_count();
  index.edge_count = g.edge_count();
  index.integral = g.integral();

  auto start = Clock::now();
  if (options.layout) {
    if (options.layout->vertex_count() != g.vertex_count())
      throw PartitionError("partition covers " + std::to_string(options.layout->vertex_count()) +
                           " vertices, graph has " + std::to_string(g.vertex_count()));
    index.layout = compute_borders(g, options.layout->assignment, options.layout->k);
  } else {
    index.layout = partition_graph(g, options.k, options.seed);
  }
  index.meta.partition_seconds = seconds_since(start);

  start = Clock::now();
  std::tie(index.inter, index.inner_lbop) = build_lbop_indexes(g, index.layout, BuildThreads{options.threads});
  index.meta.lbop_seconds = seconds_since(start);

  start = Clock::now();
  index.skylines = build_skyline_trees(g, index.layout, options.threads, options.max_skyline);
  index.meta.skyline_seconds = seconds_since(start);

  start = Clock::now();
  build_contours(index.skylines, options.r, options.contour_seed, options.threads);
  index.meta.contour_seconds = seconds_since(start);

  index.meta.k = index.layout.k;
  index.meta.r = options.r;
  index.meta.seed = options.seed;
  index.meta.contour_seed = options.contour_seed;
  if (options.measure_sizes) index.meta.sizes = measure_index(index);
  return index;
}

// ---------------------------------------------------------------------------
// Serialization

namespace {

constexpr char kMagic[8] = {'M', 'C', 'R', 'I', 'D', 'X', '\r', '\n'};

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  return h;
}

class Writer {
public:
  Writer(std::string &out, bool integral) : out_(out), integral_(integral) {}

  void varint(std::uint64_t v) {
    while (v >= 0x80) {
      out_.push_back(static_cast<char>((v & 0x7f) | 0x80));
      v >>= 7;
    }
    out_.push_back(static_cast<char>(v));
  }
  void raw_double(double v) {
    char bytes[8];
    std::memcpy(bytes, &v, 8);
    out_.append(bytes, 8);
  }
  // Integral mode: value + 1, with 0 reserved for +inf.
  void cost(double v) {
    if (!integral_) return raw_double(v);
    varint(v == kInfinity ? 0 : static_cast<std::uint64_t>(v) + 1);
  }
  // A non-negative increment over a known base (label cost over its parent).
  void delta(double v, double base) {
    if (!integral_) return raw_double(v);
    varint(static_cast<std::uint64_t>(v - base));
  }

private:
  std::string &out_;
  bool integral_;
};

class Reader {
public:
  Reader(std::string_view data, bool integral) : data_(data), integral_(integral) {}

  std::uint64_t varint() {
    std::uint64_t v = 0;
    for (int shift = 0; shift < 64; shift += 7) {
      if (pos_ >= data_.size()) throw IndexFormatError("index section truncated");
      const auto byte = static_cast<unsigned char>(data_[pos_++]);
      v |= static_cast<std::uint64_t>(byte & 0x7f) << shift;
      if (!(byte & 0x80)) return v;
    }
    throw IndexFormatError("malformed varint in index");
  }
  std::size_t count(std::size_t limit) {
    const auto v = varint();
    if (v > limit) throw IndexFormatError("count out of range in index");
    return static_cast<std::size_t>(v);
  }
  double raw_double() {
    if (data_.size() - pos_ < 8) throw IndexFormatError("index section truncated");
    double v;
    std::memcpy(&v, data_.data() + pos_, 8);
    pos_ += 8;
    return v;
  }
  double cost() {
    if (!integral_) return raw_double();
    const auto v = varint();
    return v == 0 ? kInfinity : static_cast<double>(v - 1);
  }
  double delta(double base) {
    if (!integral_) return raw_double();
    return base + static_cast<double>(varint());
  }
  bool done() const noexcept { return pos_ == data_.size(); }

private:
  std::string_view data_;
  std::size_t pos_ = 0;
  bool integral_;
};

void write_contour(Writer &w, const ContourSkylineSet &set) {
  w.varint(set.groups.size());
  if (set.groups.empty()) return;
  w.varint(set.r);
  w.varint(set.r_clamped ? 1 : 0);
  for (const auto &group : set.groups) {
    w.varint(group.members.size());
    for (auto m : group.members) w.varint(m);
    for (double v : group.contour_point.values()) w.cost(v);
  }
}

ContourSkylineSet read_contour(Reader &rd, const EntrySkylines &tree, std::size_t exit_pos) {
  const auto &labels = tree.exit_labels[exit_pos];
  ContourSkylineSet set;
  const std::size_t groups = rd.count(labels.size());
  if (groups == 0) return set;
  const std::size_t r = rd.count(labels.size());
  const bool clamped = rd.varint() != 0;
  std::vector<std::vector<std::size_t>> partition(groups);
  std::vector<CostVector> stored(groups);
  for (std::size_t gi = 0; gi < groups; ++gi) {
    const std::size_t size = rd.count(labels.size());
    for (std::size_t i = 0; i < size; ++i) partition[gi].push_back(rd.count(labels.size() - 1));
    stored[gi] = CostVector(tree.dims);
    for (std::size_t x = 0; x < tree.dims; ++x) stored[gi][x] = rd.cost();
  }
  std::vector<CostVector> points;
  for (auto l : labels) points.push_back(tree.label_cost(l));
  set = contour_points(std::move(partition), points);
  if (set.groups.size() != groups) throw IndexFormatError("empty contour group in index");
  for (std::size_t gi = 0; gi < groups; ++gi)
    if (!(set.groups[gi].contour_point == stored[gi]))
      throw IndexFormatError("contour point does not match its skyline members");
  set.r = r;
  set.r_clamped = clamped;
  return set;
}

std::string encode_layout(const PartitionIndex &index) {
  std::string out;
  Writer w(out, true);
  w.varint(index.layout.k);
  w.varint(index.layout.vertex_count());
  for (auto s : index.layout.assignment) w.varint(s);
  return out;
}

std::string encode_inter(const PartitionIndex &index) {
  std::string out;
  Writer w(out, index.integral);
  const auto &inter = index.inter;
  const std::size_t rows = inter.row_vertices().size(), cols = inter.col_vertices().size();
  for (std::size_t r = 0; r < rows; ++r)
    for (std::size_t c = 0; c < cols; ++c)
      if (inter.present(r, c))
        for (std::size_t x = 0; x < index.dims; ++x) w.cost(inter.cell_data(r, c)[x]);
  return out;
}

std::string encode_inner(const PartitionIndex &index) {
  std::string out;
  Writer w(out, index.integral);
  const auto &layout = index.layout;
  for (SubsetId p = 0; p < layout.k; ++p) {
    const std::size_t width = layout.members[p].size() * index.dims;
    for (std::size_t i = 0; i < layout.entries[p].size(); ++i) {
      const double *row = index.inner_lbop.entry_row(p, i);
      for (std::size_t q = 0; q < width; ++q) w.cost(row[q]);
    }
    for (std::size_t j = 0; j < layout.exits[p].size(); ++j) {
      const double *col = index.inner_lbop.exit_col(p, j);
      for (std::size_t q = 0; q < width; ++q) w.cost(col[q]);
    }
  }
  return out;
}

std::string encode_skylines(const PartitionIndex &index) {
  std::string out;
  for (const auto &subset : index.skylines)
    for (const auto &tree : subset) encode_entry_skylines(out, tree, index.integral);
  return out;
}

std::string encode_contours(const PartitionIndex &index) {
  std::string out;
  Writer w(out, index.integral);
  for (const auto &subset : index.skylines)
    for (const auto &tree : subset)
      for (const auto &set : tree.contours) write_contour(w, set);
  return out;
}

EntrySkylines decode_entry_skylines(Reader &rd, std::size_t dims, std::size_t n, VertexId expected_entry,
                                    std::size_t exit_count) {
  EntrySkylines tree;
  tree.dims = dims;
  tree.entry = static_cast<VertexId>(rd.count(n));
  if (tree.entry != expected_entry) throw IndexFormatError("skyline section out of order");
  const std::size_t labels = rd.count(std::numeric_limits<std::uint32_t>::max() - 1);
  tree.vertex.reserve(labels);
  tree.parent.reserve(labels);
  tree.cost.reserve(labels * dims);
  for (std::size_t l = 0; l < labels; ++l) {
    tree.vertex.push_back(static_cast<VertexId>(rd.count(n - 1)));
    const std::size_t back = rd.count(l);
    const std::uint32_t parent = back == 0 ? ParetoTree::kNoLabel : static_cast<std::uint32_t>(l - back);
    if (parent == ParetoTree::kNoLabel && tree.vertex.back() != tree.entry)
      throw IndexFormatError("skyline label without a parent");
    tree.parent.push_back(parent);
    for (std::size_t x = 0; x < dims; ++x) {
      const double base = parent == ParetoTree::kNoLabel ? 0.0 : tree.cost[parent * dims + x];
      tree.cost.push_back(rd.delta(base));
    }
  }
  if (rd.count(exit_count) != exit_count) throw IndexFormatError("exit count mismatch in skyline section");
  tree.exit_labels.resize(exit_count);
  for (auto &list : tree.exit_labels) {
    const std::size_t size = rd.count(labels);
    for (std::size_t i = 0; i < size; ++i)
      list.push_back(static_cast<std::uint32_t>(rd.count(labels ? labels - 1 : 0)));
  }
  return tree;
}

struct Sections {
  std::string layout, inter, inner, skyline, contour;
};

void put_u64(std::string &out, std::uint64_t v);

// Each section ends with the FNV-1a hash of its payload, 8 bytes little-endian.
std::string sealed(std::string bytes) {
  const std::uint64_t sum = fnv1a(bytes);
  put_u64(bytes, sum);
  return bytes;
}

Sections encode_sections(const PartitionIndex &index) {
  return {sealed(encode_layout(index)), sealed(encode_inter(index)), sealed(encode_inner(index)),
          sealed(encode_skylines(index)), sealed(encode_contours(index))};
}

nlohmann::json header_json(const PartitionIndex &index, const Sections &s) {
  nlohmann::json h;
  h["format"] = "mcroute-index";
  h["version"] = kIndexFormatVersion;
  h["k"] = index.layout.k;
  h["r"] = index.meta.r;
  h["seed"] = index.meta.seed;
  h["contour_seed"] = index.meta.contour_seed;
  h["d"] = index.dims;
  h["n"] = index.vertex_count;
  h["m"] = index.edge_count;
  h["graph_hash"] = index.graph_hash;
  h["integral"] = index.integral;
  std::size_t offset = 0;
  auto section = [&](const char *name, const std::string &bytes) {
    h["sections"].push_back({name, offset, bytes.size()});
    offset += bytes.size();
  };
  section("layout", s.layout);
  section("inter", s.inter);
  section("inner_lbop", s.inner);
  section("skyline", s.skyline);
  section("contour", s.contour);
  return h;
}

constexpr std::size_t kPreambleBytes = sizeof(kMagic) + 4 + 4 + 8;

void put_u32(std::string &out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
void put_u64(std::string &out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}
std::uint64_t get_le(const char *p, int bytes) {
  std::uint64_t v = 0;
  for (int i = 0; i < bytes; ++i) v |= static_cast<std::uint64_t>(static_cast<unsigned char>(p[i])) << (8 * i);
  return v;
}

} // namespace

void encode_entry_skylines(std::string &out, const EntrySkylines &tree, bool integral, bool with_exit_lists) {
  Writer w(out, integral);
  const std::size_t d = tree.dims;
  w.varint(tree.entry);
  w.varint(tree.label_count());
  for (std::uint32_t l = 0; l < tree.label_count(); ++l) {
    w.varint(tree.vertex[l]);
    const auto parent = tree.parent[l];
    w.varint(parent == ParetoTree::kNoLabel ? 0 : l - parent);
    for (std::size_t x = 0; x < d; ++x)
      w.delta(tree.cost[l * d + x], parent == ParetoTree::kNoLabel ? 0.0 : tree.cost[parent * d + x]);
  }
  if (!with_exit_lists) return;
  w.varint(tree.exit_labels.size());
  for (const auto &list : tree.exit_labels) {
    w.varint(list.size());
    for (auto l : list) w.varint(l);
  }
}

IndexSizes measure_index(const PartitionIndex &index) {
  const Sections s = encode_sections(index);
  IndexSizes sizes;
  sizes.header = kPreambleBytes + header_json(index, s).dump().size();
  sizes.layout = s.layout.size();
  sizes.inter = s.inter.size();
  sizes.inner_lbop = s.inner.size();
  sizes.skyline = s.skyline.size();
  sizes.contour = s.contour.size();
  sizes.total = sizes.header + sizes.layout + sizes.inter + sizes.inner_lbop + sizes.skyline + sizes.contour;
  return sizes;
}

void save_index(std::ostream &out, const PartitionIndex &index) {
  const Sections s = encode_sections(index);
  const std::string header = header_json(index, s).dump();
  std::string pre(kMagic, sizeof(kMagic));
  put_u32(pre, kIndexFormatVersion);
  put_u32(pre, static_cast<std::uint32_t>(header.size()));
  put_u64(pre, fnv1a(header));
  out.write(pre.data(), static_cast<std::streamsize>(pre.size()));
  out.write(header.data(), static_cast<std::streamsize>(header.size()));
  for (const std::string *part : {&s.layout, &s.inter, &s.inner, &s.skyline, &s.contour})
    out.write(part->data(), static_cast<std::streamsize>(part->size()));
  if (!out) throw Error("failed to write index");
}

void save_index_file(const std::string &path, const PartitionIndex &index) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot open " + path + " for writing");
  save_index(out, index);
}

PartitionIndex load_index(std::istream &in, const MultiCostGraph &g) {
  const std::string data((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  if (data.size() < kPreambleBytes) throw IndexFormatError("index truncated");
  if (std::memcmp(data.data(), kMagic, sizeof(kMagic)) != 0) throw IndexFormatError("not an index file");
  const auto version = static_cast<std::uint32_t>(get_le(data.data() + 8, 4));
  if (version != kIndexFormatVersion)
    throw IndexFormatError("index format version " + std::to_string(version) + " is not supported (expected " +
                           std::to_string(kIndexFormatVersion) + ")");
  const auto header_len = static_cast<std::size_t>(get_le(data.data() + 12, 4));
  const std::uint64_t header_sum = get_le(data.data() + 16, 8);
  if (data.size() - kPreambleBytes < header_len) throw IndexFormatError("index header truncated");
  const std::string_view header_text(data.data() + kPreambleBytes, header_len);
  if (fnv1a(header_text) != header_sum) throw IndexFormatError("index header checksum mismatch");

  nlohmann::json h;
  try {
    h = nlohmann::json::parse(header_text);
  } catch (const nlohmann::json::exception &ex) {
    throw IndexFormatError(std::string("index header is not valid JSON: ") + ex.what());
  }

  PartitionIndex index;
  std::map<std::string, std::string_view> sections;
  try {
    if (h.at("version").get<std::uint32_t>() != kIndexFormatVersion)
      throw IndexFormatError("index header version mismatch");
    index.graph_hash = h.at("graph_hash").get<std::uint64_t>();
    index.dims = h.at("d").get<std::size_t>();
    index.vertex_count = h.at("n").get<std::size_t>();
    index.edge_count = h.at("m").get<std::size_t>();
    index.integral = h.at("integral").get<bool>();
    index.meta.k = h.at("k").get<std::size_t>();
    index.meta.r = h.at("r").get<std::size_t>();
    index.meta.seed = h.at("seed").get<std::uint64_t>();
    index.meta.contour_seed = h.at("contour_seed").get<std::uint64_t>();
    const std::string_view body(data.data() + kPreambleBytes + header_len,
                                data.size() - kPreambleBytes - header_len);
    for (const auto &s : h.at("sections")) {
      const auto name = s.at(0).get<std::string>();
      const auto offset = s.at(1).get<std::size_t>();
      const auto size = s.at(2).get<std::size_t>();
      if (offset > body.size() || size > body.size() - offset || size < 8) throw IndexFormatError("index truncated");
      const auto bytes = body.substr(offset, size - 8);
      if (fnv1a(bytes) != get_le(body.data() + offset + size - 8, 8))
        throw IndexFormatError("checksum mismatch in section " + name);
      sections[name] = bytes;
    }
  } catch (const nlohmann::json::exception &ex) {
    throw IndexFormatError(std::string("malformed index header: ") + ex.what());
  }
  for (const char *name : {"layout", "inter", "inner_lbop", "skyline", "contour"})
    if (!sections.count(name)) throw IndexFormatError(std::string("index has no ") + name + " section");

  if (index.graph_hash != graph_hash(g) || index.vertex_count != g.vertex_count() || index.dims != g.dims())
    throw IndexFormatError("index was built for a different graph (hash mismatch)");
  if (index.dims == 0 || index.dims > kMaxDims) throw IndexFormatError("bad dimensionality in index header");
  const std::size_t n = index.vertex_count, d = index.dims;

  {
    Reader rd(sections["layout"], true);
    const std::size_t k = rd.count(n);
    if (rd.count(n) != n) throw IndexFormatError("layout vertex count mismatch");
    std::vector<SubsetId> assignment(n);
    for (auto &s : assignment) s = static_cast<SubsetId>(rd.count(k ? k - 1 : 0));
    if (!rd.done()) throw IndexFormatError("trailing bytes in layout section");
    try {
      index.layout = compute_borders(g, std::move(assignment), k);
    } catch (const PartitionError &ex) {
      throw IndexFormatError(std::string("invalid layout in index: ") + ex.what());
    }
  }
  const auto &layout = index.layout;

  {
    index.inter = InterIndex(layout, d);
    Reader rd(sections["inter"], index.integral);
    const std::size_t rows = index.inter.row_vertices().size(), cols = index.inter.col_vertices().size();
    for (std::size_t r = 0; r < rows; ++r)
      for (std::size_t c = 0; c < cols; ++c)
        if (index.inter.present(r, c))
          for (std::size_t x = 0; x < d; ++x) index.inter.cell_data(r, c)[x] = rd.cost();
    if (!rd.done()) throw IndexFormatError("trailing bytes in inter section");
  }

  {
    index.inner_lbop = LbopInnerIndex(layout, d);
    Reader rd(sections["inner_lbop"], index.integral);
    for (SubsetId p = 0; p < layout.k; ++p) {
      const std::size_t width = layout.members[p].size() * d;
      for (std::size_t i = 0; i < layout.entries[p].size(); ++i) {
        double *row = index.inner_lbop.entry_row(p, i);
        for (std::size_t q = 0; q < width; ++q) row[q] = rd.cost();
      }
      for (std::size_t j = 0; j < layout.exits[p].size(); ++j) {
        double *col = index.inner_lbop.exit_col(p, j);
        for (std::size_t q = 0; q < width; ++q) col[q] = rd.cost();
      }
    }
    if (!rd.done()) throw IndexFormatError("trailing bytes in inner_lbop section");
  }

  {
    Reader rd(sections["skyline"], index.integral);
    index.skylines.resize(layout.k);
    for (SubsetId p = 0; p < layout.k; ++p)
      for (VertexId entry : layout.entries[p])
        index.skylines[p].push_back(decode_entry_skylines(rd, d, n, entry, layout.exits[p].size()));
    if (!rd.done()) throw IndexFormatError("trailing bytes in skyline section");
  }

  {
    Reader rd(sections["contour"], index.integral);
    for (auto &subset : index.skylines)
      for (auto &tree : subset) {
        tree.contours.resize(tree.exit_labels.size());
        for (std::size_t x = 0; x < tree.exit_labels.size(); ++x) tree.contours[x] = read_contour(rd, tree, x);
      }
    if (!rd.done()) throw IndexFormatError("trailing bytes in contour section");
  }

  index.meta.sizes.header = kPreambleBytes + header_len;
  index.meta.sizes.layout = sections["layout"].size();
  index.meta.sizes.inter = sections["inter"].size();
  index.meta.sizes.inner_lbop = sections["inner_lbop"].size();
  index.meta.sizes.skyline = sections["skyline"].size();
  index.meta.sizes.contour = sections["contour"].size();
  index.meta.sizes.total = data.size();
  return index;
}

PartitionIndex load_index_file(const std::string &path, const MultiCostGraph &g) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open index " + path);
  return load_index(in, g);
}

} // namespace mcroute
