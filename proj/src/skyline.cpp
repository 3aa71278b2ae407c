#include "mcroute/skyline.hpp"

#include <algorithm>
#include <functional>
#include <queue>
#include <string>

#include "mcroute/error.hpp"

namespace mcroute {

std::vector<CostVector> SkylinePathSet::costs() const {
  std::vector<CostVector> out;
  out.reserve(paths.size());
  for (const auto &p : paths) out.push_back(p.cost);
  return out;
}

std::vector<VertexId> ParetoTree::vertices_of(std::uint32_t label) const {
  std::vector<VertexId> out;
  for (auto l = label; l != kNoLabel; l = labels[l].parent) out.push_back(labels[l].vertex);
  std::reverse(out.begin(), out.end());
  return out;
}

namespace {

CostVector rotate(const CostVector &c, std::size_t first) {
  CostVector out(c.dims());
  for (std::size_t i = 0; i < c.dims(); ++i) out[i] = c[(first + i) % c.dims()];
  return out;
}

struct HeapItem {
  CostVector cost;
  std::uint32_t label;
};

struct HeapOrder {
  bool operator()(const HeapItem &a, const HeapItem &b) const {
    if (lex_less(b.cost, a.cost)) return true;
    if (lex_less(a.cost, b.cost)) return false;
    return a.label > b.label;
  }
};

// Martins-style label setting over Pareto label sets. `on_pop` decides
// whether a permanent label is expanded.
class LabelSetting {
public:
  LabelSetting(const MultiCostGraph &g, VertexId source) : g_(g), alive_(g.vertex_count()) {
    tree_.source = source;
    push({CostVector::zero(g.dims()), source, ParetoTree::kNoLabel});
  }

  // Returns false when the candidate is weakly dominated at its vertex.
  bool push(const ParetoTree::Label &label) {
    auto &here = alive_[label.vertex];
    for (auto id : here)
      if (weakly_dominates(tree_.labels[id].cost, label.cost)) return false;
    std::erase_if(here, [&](std::uint32_t id) {
      if (dominates_unchecked(label.cost, tree_.labels[id].cost)) {
        dead_[id] = 1;
        return true;
      }
      return false;
    });
    auto id = static_cast<std::uint32_t>(tree_.labels.size());
    tree_.labels.push_back(label);
    dead_.push_back(0);
    here.push_back(id);
    heap_.push({label.cost, id});
    return true;
  }

  template <typename OnPop>
  void run(OnPop &&on_pop) {
    while (!heap_.empty()) {
      auto item = heap_.top();
      heap_.pop();
      if (dead_[item.label]) continue;
      if (!on_pop(item.label)) continue;
      const auto &label = tree_.labels[item.label];
      const VertexId v = label.vertex;
      const CostVector base = label.cost;
      for (EdgeId e : g_.out_edges(v)) {
        const VertexId w = g_.target(e);
        if (!expand_filter_ || expand_filter_(w, base + g_.cost(e)))
          push({base + g_.cost(e), w, item.label});
      }
    }
  }

  template <typename Filter>
  void set_filter(Filter f) {
    expand_filter_ = std::move(f);
  }

  ParetoTree take_tree() && {
    for (auto &here : alive_) {
      std::sort(here.begin(), here.end(), [&](std::uint32_t a, std::uint32_t b) {
        return lex_less(tree_.labels[a].cost, tree_.labels[b].cost);
      });
    }
    tree_.at_vertex = std::move(alive_);
    return std::move(tree_);
  }

  const ParetoTree &tree() const { return tree_; }

private:
  const MultiCostGraph &g_;
  ParetoTree tree_;
  std::vector<std::vector<std::uint32_t>> alive_;
  std::vector<char> dead_;
  std::priority_queue<HeapItem, std::vector<HeapItem>, HeapOrder> heap_;
  std::function<bool(VertexId, const CostVector &)> expand_filter_;
};

} // namespace

Path lexicographic_shortest_path(const MultiCostGraph &g, VertexId from, VertexId to, std::size_t dim) {
  const std::size_t n = g.vertex_count();
  std::vector<CostVector> best(n, CostVector::infinite(g.dims()));
  std::vector<VertexId> parent(n, kNoVertex);
  std::vector<char> done(n, 0);
  using Item = std::pair<CostVector, VertexId>;
  auto order = [](const Item &a, const Item &b) {
    if (lex_less(b.first, a.first)) return true;
    if (lex_less(a.first, b.first)) return false;
    return a.second > b.second;
  };
  std::priority_queue<Item, std::vector<Item>, decltype(order)> heap(order);
  best[from] = CostVector::zero(g.dims());
  heap.emplace(best[from], from);
  while (!heap.empty()) {
    auto [key, v] = heap.top();
    heap.pop();
    if (done[v]) continue;
    done[v] = 1;
    if (v == to) break;
    for (EdgeId e : g.out_edges(v)) {
      const VertexId w = g.target(e);
      CostVector cand = key + rotate(g.cost(e), dim);
      if (lex_less(cand, best[w])) {
        best[w] = cand;
        parent[w] = v;
        heap.emplace(cand, w);
      }
    }
  }
  if (!done[to]) return {};
  std::vector<VertexId> vertices;
  for (VertexId v = to; v != kNoVertex; v = parent[v]) vertices.push_back(v);
  std::reverse(vertices.begin(), vertices.end());
  return make_path(g, std::move(vertices));
}

SkylinePathSet compute_skyline_paths(const MultiCostGraph &g, VertexId entry, VertexId exit,
                                     const SkylineOptions &options) {
  if (entry >= g.vertex_count() || exit >= g.vertex_count())
    throw GraphError("skyline endpoint outside the graph");
  SkylinePathSet result{entry, exit, {}};
  const std::size_t d = g.dims();
  if (entry == exit) {
    result.paths.push_back(Path{{entry}, CostVector::zero(d)});
    return result;
  }

  auto confirmed_dominates = [&](const CostVector &c) {
    for (const auto &p : result.paths)
      if (weakly_dominates(p.cost, c)) return true;
    return false;
  };
  auto check_cap = [&] {
    if (options.max_paths && result.paths.size() > options.max_paths)
      throw SkylineCapExceeded("skyline between " + std::to_string(entry) + " and " + std::to_string(exit) +
                               " exceeds the cap of " + std::to_string(options.max_paths) + " paths");
  };

  if (options.seed_with_shortest) {
    for (std::size_t x = 0; x < d; ++x) {
      Path p = lexicographic_shortest_path(g, entry, exit, x);
      if (p.empty()) break;
      if (!confirmed_dominates(p.cost)) result.paths.push_back(std::move(p));
    }
  }

  const bool bounded = !options.bounds_to_exit.empty();
  LabelSetting search(g, entry);
  search.set_filter([&](VertexId w, const CostVector &cost) {
    if (w == entry) return false;
    return !bounded || !confirmed_dominates(cost + options.bounds_to_exit[w]);
  });
  search.run([&](std::uint32_t id) {
    const auto &label = search.tree().labels[id];
    if (label.vertex == exit) {
      if (!confirmed_dominates(label.cost)) {
        // Pop order is lexicographic, so no later label can dominate this one.
        result.paths.push_back(Path{search.tree().vertices_of(id), label.cost});
        check_cap();
      }
      return false;
    }
    if (bounded && confirmed_dominates(label.cost + options.bounds_to_exit[label.vertex])) return false;
    return true;
  });

  std::sort(result.paths.begin(), result.paths.end(),
            [](const Path &a, const Path &b) { return lex_less(a.cost, b.cost); });
  check_cap();
  return result;
}

ParetoTree pareto_search(const MultiCostGraph &g, VertexId source) {
  if (source >= g.vertex_count()) throw GraphError("pareto search source outside the graph");
  LabelSetting search(g, source);
  search.set_filter([source](VertexId w, const CostVector &) { return w != source; });
  search.run([](std::uint32_t) { return true; });
  return std::move(search).take_tree();
}

} // namespace mcroute
