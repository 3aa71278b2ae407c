#ifndef MCROUTE_TEST_CONTOUR_ORACLES_HPP
#define MCROUTE_TEST_CONTOUR_ORACLES_HPP

#include <algorithm>
#include <functional>
#include <random>
#include <vector>

#include "mcroute/contour.hpp"

namespace mcroute::test {

// Non-dominated points in lexicographic order.
inline std::vector<CostVector> random_skyline(std::mt19937_64 &rng, std::size_t want, std::size_t d) {
  std::uniform_int_distribution<int> coord(0, 60);
  std::vector<CostVector> pool;
  for (std::size_t i = 0; i < want * 6; ++i) {
    CostVector c(d);
    for (std::size_t x = 0; x < d; ++x) c[x] = coord(rng);
    pool.push_back(c);
  }
  std::vector<CostVector> out;
  for (const auto &p : pool) {
    bool dominated = false;
    for (const auto &q : pool) dominated = dominated || dominates_unchecked(q, p);
    if (!dominated && std::find(out.begin(), out.end(), p) == out.end()) out.push_back(p);
  }
  std::sort(out.begin(), out.end(), [](const CostVector &a, const CostVector &b) { return lex_less(a, b); });
  if (out.size() > want) out.resize(want);
  return out;
}

// Smallest achievable diameter over all splits of the sequence into at most
// r contiguous runs.
inline double contiguous_optimum(const std::vector<CostVector> &points, std::size_t r) {
  const std::size_t m = points.size();
  double best = kInfinity;
  std::function<void(std::size_t, std::size_t, double)> go = [&](std::size_t start, std::size_t left, double worst) {
    if (start == m) {
      best = std::min(best, worst);
      return;
    }
    if (left == 0) return;
    for (std::size_t end = start + 1; end <= m; ++end) {
      const std::vector<CostVector> run(points.begin() + start, points.begin() + end);
      go(end, left - 1, std::max(worst, group_diameter(run)));
    }
  };
  go(0, r, 0.0);
  return best;
}

// Smallest diameter over all partitions into at most r groups.
inline double set_partition_optimum(const std::vector<CostVector> &points, std::size_t r) {
  const std::size_t m = points.size();
  std::vector<std::size_t> label(m, 0);
  double best = kInfinity;
  std::function<void(std::size_t, std::size_t)> go = [&](std::size_t i, std::size_t used) {
    if (i == m) {
      double worst = 0.0;
      for (std::size_t g = 0; g < used; ++g)
        for (std::size_t a = 0; a < m; ++a)
          for (std::size_t b = a + 1; b < m; ++b)
            if (label[a] == g && label[b] == g) worst = std::max(worst, euclidean_distance(points[a], points[b]));
      best = std::min(best, worst);
      return;
    }
    for (std::size_t g = 0; g < std::min(used + 1, r); ++g) {
      label[i] = g;
      go(i + 1, std::max(used, g + 1));
    }
  };
  go(0, 0);
  return best;
}

} // namespace mcroute::test

#endif
