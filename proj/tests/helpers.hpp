#ifndef MCROUTE_TEST_HELPERS_HPP
#define MCROUTE_TEST_HELPERS_HPP

#include <initializer_list>
#include <vector>

#include "mcroute/graph.hpp"

namespace mcroute::test {

struct E {
  VertexId u, v;
  std::initializer_list<double> c;
};

inline MultiCostGraph graph(std::size_t n, std::size_t d, std::initializer_list<E> edges) {
  std::vector<EdgeInput> in;
  for (const auto &e : edges) in.push_back({e.u, e.v, CostVector(e.c)});
  return MultiCostGraph::from_edges(n, d, std::move(in));
}

// Corpus shape shared with the acceptance run: n in [8,25], density
// 0.15-0.3, d in {2,3,4}, integer costs in [1,10].
inline MultiCostGraph corpus_graph(std::uint64_t seed) {
  const std::size_t n = 8 + seed % 18, d = 2 + seed % 3;
  const std::size_t m = n * (n - 1) * (15 + seed % 16) / 100;
  return generate_random_graph(n, m, d, {1, 10}, seed);
}

} // namespace mcroute::test

#endif
