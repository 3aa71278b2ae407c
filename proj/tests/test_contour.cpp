#include <doctest.h>

#include <cmath>
#include <random>
#include <stdexcept>

#include "contour_oracles.hpp"
#include "mcroute/contour.hpp"

using namespace mcroute;

namespace {

std::vector<std::vector<std::size_t>> member_lists(const ContourSkylineSet &set) {
  std::vector<std::vector<std::size_t>> out;
  for (const auto &g : set.groups) out.push_back(g.members);
  std::sort(out.begin(), out.end());
  return out;
}

void check_cover(const ContourSkylineSet &set, const std::vector<CostVector> &points) {
  std::vector<int> seen(points.size(), 0);
  double worst = 0.0;
  for (const auto &g : set.groups) {
    std::vector<CostVector> members;
    for (auto i : g.members) {
      ++seen[i];
      members.push_back(points[i]);
      CHECK(weakly_dominates(g.contour_point, points[i]));
    }
    worst = std::max(worst, group_diameter(members));
  }
  for (int s : seen) CHECK(s == 1);
  CHECK(set.achieved_diameter == worst);
}

} // namespace

TEST_SUITE("contour") {

TEST_CASE("group diameter") {
  const std::vector<CostVector> one{{0, 0}};
  CHECK(group_diameter(one) == 0.0);
  const std::vector<CostVector> two{{0, 0}, {3, 4}};
  CHECK(group_diameter(two) == 5.0);
  CHECK_THROWS_AS(group_diameter({}), std::invalid_argument);

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(0, 10);
  std::vector<CostVector> six;
  for (int i = 0; i < 6; ++i) six.push_back({u(rng), u(rng), u(rng)});
  double scan = 0.0;
  for (const auto &a : six)
    for (const auto &b : six) scan = std::max(scan, std::sqrt((a[0] - b[0]) * (a[0] - b[0]) + (a[1] - b[1]) * (a[1] - b[1]) +
                                                              (a[2] - b[2]) * (a[2] - b[2])));
  CHECK(group_diameter(six) == doctest::Approx(scan).epsilon(1e-12));
}

TEST_CASE("2-D program: r = m and r = 1") {
  const std::vector<CostVector> points{{0, 10}, {1, 9}, {5, 5}, {6, 4}};
  const auto each = contour_partition_2d(points, 4);
  CHECK(each.groups.size() == 4);
  CHECK(each.achieved_diameter == 0.0);
  for (const auto &g : each.groups) CHECK(g.contour_point == points[g.members[0]]);

  const auto whole = contour_partition_2d(points, 1);
  REQUIRE(whole.groups.size() == 1);
  CHECK(whole.groups[0].contour_point == CostVector{0, 4});
  CHECK(whole.floor == CostVector{0, 4});
}

TEST_CASE("2-D program: four points, two groups") {
  const std::vector<CostVector> points{{0, 10}, {1, 9}, {5, 5}, {6, 4}};
  const auto set = contour_partition_2d(points, 2);
  CHECK(member_lists(set) == std::vector<std::vector<std::size_t>>{{0, 1}, {2, 3}});
  CHECK(set.achieved_diameter == std::sqrt(2.0));
  CHECK_THROWS_AS(contour_partition_2d(points, 0), std::invalid_argument);
  const std::vector<CostVector> dominated{{1, 1}, {2, 2}};
  CHECK_THROWS_AS(contour_partition_2d(dominated, 1), std::invalid_argument);
}

TEST_CASE("2-D program equals contiguous brute force") {
  std::mt19937_64 rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const auto points = test::random_skyline(rng, 2 + trial % 11, 2);
    for (std::size_t r = 1; r <= 4; ++r) {
      const auto set = contour_partition_2d(points, r);
      check_cover(set, points);
      CHECK(set.achieved_diameter == test::contiguous_optimum(points, r));
    }
  }
}

TEST_CASE("greedy: r = 1 and the collinear case") {
  const std::vector<CostVector> points{{0, 5, 1}, {2, 2, 2}, {5, 0, 3}};
  const auto one = contour_partition_greedy(points, 1);
  REQUIRE(one.groups.size() == 1);
  CHECK(one.groups[0].members.size() == 3);

  const std::vector<CostVector> line{{0, 0}, {1, 0}, {100, 0}};
  CHECK(member_lists(contour_partition_greedy(line, 2)) == std::vector<std::vector<std::size_t>>{{0, 1}, {2}});

  const auto clamped = contour_partition_greedy(line, 9);
  CHECK(clamped.r_clamped);
  CHECK(clamped.groups.size() == 3);
}

TEST_CASE("greedy stays within twice the optimum in 3-D") {
  std::mt19937_64 rng(5);
  for (int trial = 0; trial < 60; ++trial) {
    const auto points = test::random_skyline(rng, 3 + trial % 8, 3);
    for (std::size_t r = 2; r <= 3; ++r) {
      const auto set = contour_partition_greedy(points, r, static_cast<std::uint64_t>(trial));
      check_cover(set, points);
      CHECK(set.achieved_diameter <= 2.0 * test::set_partition_optimum(points, r) + 1e-9);
    }
  }
}

TEST_CASE("contour points") {
  const std::vector<CostVector> points{{1, 6}, {4, 4}};
  const auto single = contour_points({{0}, {1}}, points);
  CHECK(single.groups[0].contour_point == CostVector{1, 6});
  const auto both = contour_points({{0, 1}}, points);
  CHECK(both.groups[0].contour_point == CostVector{1, 4});

  // Nine points in three clusters.
  const std::vector<CostVector> nine{{1, 20, 9}, {2, 19, 8}, {3, 18, 9}, {9, 10, 2}, {10, 9, 3},
                                     {11, 8, 2}, {18, 2, 7}, {19, 1, 6}, {20, 0, 7}};
  const auto set = contour_partition_greedy(nine, 3);
  CHECK(set.groups.size() == 3);
  check_cover(set, nine);
  CHECK(member_lists(set) == std::vector<std::vector<std::size_t>>{{0, 1, 2}, {3, 4, 5}, {6, 7, 8}});
}

TEST_CASE("build_contour_set picks the exact program in 2-D") {
  std::mt19937_64 rng(2);
  const auto points = test::random_skyline(rng, 9, 2);
  CHECK(build_contour_set(points, 3) == contour_partition_2d(points, 3));
  const auto many = build_contour_set(points, 40);
  CHECK(many.groups.size() == points.size());
}

}
