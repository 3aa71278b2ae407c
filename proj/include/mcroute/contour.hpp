#ifndef MCROUTE_CONTOUR_HPP
#define MCROUTE_CONTOUR_HPP

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "mcroute/cost.hpp"

namespace mcroute {

struct ContourGroup {
  std::vector<std::size_t> members; // indexes into the skyline point sequence
  CostVector contour_point;         // componentwise minimum over the members

  friend bool operator==(const ContourGroup &, const ContourGroup &) = default;
};

/// Grouping of a skyline set into at most r groups, each summarized by the
/// componentwise minimum of its members.
struct ContourSkylineSet {
  std::vector<ContourGroup> groups;
  std::size_t r = 0;               // requested group count after clamping
  double achieved_diameter = 0.0;  // max over groups of the max pairwise distance
  bool r_clamped = false;
  CostVector floor;                // componentwise minimum over all contour points

  friend bool operator==(const ContourSkylineSet &, const ContourSkylineSet &) = default;
};

/// Largest pairwise Euclidean distance; 0 for a single point.
/// Throws std::invalid_argument on an empty set.
double group_diameter(std::span<const CostVector> points);

/// Optimal partition of a 2-D skyline into at most r runs that are
/// contiguous in ascending first-coordinate order, minimizing the largest
/// group diameter. O(m^2 r) dynamic program over prefix partitions.
/// Throws std::invalid_argument for r < 1, non-2-D input or a point
/// dominated by another.
ContourSkylineSet contour_partition_2d(std::span<const CostVector> points, std::size_t r);

/// Farthest-point grouping for any dimensionality: each new group is seeded
/// by the point farthest from its current base point, and every point moves
/// to the new group when it is no farther from the new base than from its
/// own. Seed 0 picks the point with the smallest first coordinate as the
/// first base; other seeds pick it at random. At most twice the optimal
/// diameter. r larger than the point count is clamped.
ContourSkylineSet contour_partition_greedy(std::span<const CostVector> points, std::size_t r,
                                           std::uint64_t seed = 0);

/// Contour points and achieved diameter for a given grouping.
ContourSkylineSet contour_points(std::vector<std::vector<std::size_t>> partition,
                                 std::span<const CostVector> points);

/// Exact program in 2-D, greedy otherwise; r clamped to the point count.
ContourSkylineSet build_contour_set(std::span<const CostVector> points, std::size_t r,
                                    std::uint64_t seed = 0);

} // namespace mcroute

#endif // MCROUTE_CONTOUR_HPP
