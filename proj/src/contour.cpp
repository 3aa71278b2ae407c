#include "mcroute/contour.hpp"

#include <algorithm>
#include <numeric>
#include <random>
#include <stdexcept>

namespace mcroute {

double group_diameter(std::span<const CostVector> points) {
  if (points.empty()) throw std::invalid_argument("group_diameter: empty point set");
  double best = 0.0;
  for (std::size_t i = 0; i < points.size(); ++i)
    for (std::size_t j = i + 1; j < points.size(); ++j)
      best = std::max(best, euclidean_distance(points[i], points[j]));
  return best;
}

ContourSkylineSet contour_points(std::vector<std::vector<std::size_t>> partition,
                                 std::span<const CostVector> points) {
  ContourSkylineSet out;
  for (auto &members : partition) {
    if (members.empty()) continue;
    std::sort(members.begin(), members.end());
    ContourGroup group;
    group.contour_point = points[members.front()];
    std::vector<CostVector> group_points;
    for (auto i : members) {
      group.contour_point.min_with(points[i]);
      group_points.push_back(points[i]);
    }
    out.achieved_diameter = std::max(out.achieved_diameter, group_diameter(group_points));
    group.members = std::move(members);
    if (out.groups.empty()) out.floor = group.contour_point;
    out.floor.min_with(group.contour_point);
    out.groups.push_back(std::move(group));
  }
  out.r = out.groups.size();
  return out;
}

ContourSkylineSet contour_partition_2d(std::span<const CostVector> points, std::size_t r) {
  if (r < 1) throw std::invalid_argument("contour_partition_2d: r must be at least 1");
  const std::size_t m = points.size();
  for (const auto &p : points)
    if (p.dims() != 2) throw std::invalid_argument("contour_partition_2d: points must be 2-D");
  for (std::size_t i = 0; i < m; ++i)
    for (std::size_t j = 0; j < m; ++j)
      if (i != j && dominates_unchecked(points[i], points[j]))
        throw std::invalid_argument("contour_partition_2d: input is not a skyline (point " +
                                    std::to_string(j) + " is dominated)");
  const bool clamped = r > m;
  r = std::min(r, m);
  if (m == 0) return {};

  // order[0..m) sorted by x ascending; for a skyline y then descends.
  std::vector<std::size_t> order(m);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    if (points[a][0] != points[b][0]) return points[a][0] < points[b][0];
    if (points[a][1] != points[b][1]) return points[a][1] > points[b][1];
    return a < b;
  });
  auto pt = [&](std::size_t i) -> const CostVector & { return points[order[i - 1]]; };

  // span[j][i] = diameter of the run j..i (1-based, inclusive).
  std::vector<std::vector<double>> span(m + 2, std::vector<double>(m + 1, 0.0));
  for (std::size_t len = 2; len <= m; ++len)
    for (std::size_t j = 1; j + len - 1 <= m; ++j) {
      const std::size_t i = j + len - 1;
      span[j][i] = std::max({span[j + 1][i], span[j][i - 1], euclidean_distance(pt(j), pt(i))});
    }

  // best[t][i] = diameter of the best split of the first i points into <= t runs.
  std::vector<std::vector<double>> best(r + 1, std::vector<double>(m + 1, 0.0));
  std::vector<std::vector<std::size_t>> cut(r + 1, std::vector<std::size_t>(m + 1, 1));
  for (std::size_t i = 1; i <= m; ++i) best[1][i] = span[1][i];
  for (std::size_t t = 2; t <= r; ++t)
    for (std::size_t i = 1; i <= m; ++i) {
      double value = kInfinity;
      std::size_t arg = 1;
      for (std::size_t j = 1; j <= i; ++j) {
        const double cand = std::max(best[t - 1][j - 1], span[j][i]);
        if (cand < value) {
          value = cand;
          arg = j;
        }
      }
      best[t][i] = value;
      cut[t][i] = arg;
    }

  std::vector<std::vector<std::size_t>> groups;
  std::size_t i = m;
  for (std::size_t t = r; t >= 1 && i > 0; --t) {
    const std::size_t j = t == 1 ? 1 : cut[t][i];
    std::vector<std::size_t> run;
    for (std::size_t q = j; q <= i; ++q) run.push_back(order[q - 1]);
    groups.push_back(std::move(run));
    i = j - 1;
  }
  std::reverse(groups.begin(), groups.end());
  auto out = contour_points(std::move(groups), points);
  out.r = r;
  out.r_clamped = clamped;
  out.achieved_diameter = best[r][m];
  return out;
}

ContourSkylineSet contour_partition_greedy(std::span<const CostVector> points, std::size_t r,
                                           std::uint64_t seed) {
  if (r < 1) throw std::invalid_argument("contour_partition_greedy: r must be at least 1");
  const std::size_t m = points.size();
  const bool clamped = r > m;
  r = std::min(r, m);
  if (m == 0) return {};

  std::size_t first = 0;
  if (seed == 0) {
    for (std::size_t i = 1; i < m; ++i)
      if (lex_less(points[i], points[first])) first = i;
  } else {
    std::mt19937_64 rng(seed);
    first = std::uniform_int_distribution<std::size_t>(0, m - 1)(rng);
  }

  std::vector<std::size_t> base{first};
  std::vector<std::size_t> group(m, 0);
  std::vector<double> to_base(m);
  for (std::size_t i = 0; i < m; ++i) to_base[i] = euclidean_distance(points[i], points[first]);

  while (base.size() < r) {
    std::size_t far = 0;
    for (std::size_t i = 1; i < m; ++i)
      if (to_base[i] > to_base[far]) far = i;
    if (to_base[far] == 0.0) break; // every point sits on a base already
    const std::size_t g = base.size();
    base.push_back(far);
    for (std::size_t i = 0; i < m; ++i) {
      const double dist = euclidean_distance(points[i], points[far]);
      if (dist <= to_base[i]) {
        group[i] = g;
        to_base[i] = dist;
      }
    }
  }

  std::vector<std::vector<std::size_t>> groups(base.size());
  for (std::size_t i = 0; i < m; ++i) groups[group[i]].push_back(i);
  auto out = contour_points(std::move(groups), points);
  out.r = r;
  out.r_clamped = clamped;
  return out;
}

ContourSkylineSet build_contour_set(std::span<const CostVector> points, std::size_t r, std::uint64_t seed) {
  if (points.empty()) return {};
  if (points.front().dims() == 2) return contour_partition_2d(points, std::min(r, points.size()));
  return contour_partition_greedy(points, std::min(r, points.size()), seed);
}

} // namespace mcroute
