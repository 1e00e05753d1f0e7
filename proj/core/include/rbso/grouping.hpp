#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "rbso/geometry.hpp"
#include "rbso/random.hpp"

namespace rbso {

struct GroupingParams {
  std::size_t max_groups = 5;          // m_g
  std::size_t max_iterations = 0;      // split guard; 0 means |points| - 1
  double mean_distance_threshold = 250.0;  // m_d
};

using Group = std::vector<std::size_t>;

struct GroupingResult {
  std::vector<Group> groups;
  std::vector<std::size_t> centers;  // one robot index per group
};

void validate(const GroupingParams& params);

/// Eq. (3) style mean of d(x, y) over the cross product A x B.
double inter_group_mean_distance(std::span<const Vec2> a, std::span<const Vec2> b);

/// Mean distance over distinct pairs within the group; 0 for singletons.
double internal_mean_distance(std::span<const Vec2> points, const Group& group);

/// Top-down divisive clustering (DIANA) of the points into index groups.
///
/// The whole set is split once whenever it has two or more points; after that
/// the group with the largest internal mean distance is split along its most
/// dissimilar pair until m_g groups exist, every group is within m_d, the
/// selected group has two or fewer members, or the split guard trips.
/// Each member joins the closer pair end (ties to the lower-index end).
std::vector<Group> diana_split(std::span<const Vec2> points, const GroupingParams& params);

/// Per group, the member with the highest fitness; shared maxima are broken
/// uniformly at random.
std::vector<std::size_t> select_centers(std::span<const Group> groups, std::span<const double> fitness, Rng& rng);

}  // namespace rbso
