#include "rbso/grouping.hpp"

#include <stdexcept>

namespace rbso {

void validate(const GroupingParams& params) {
  if (params.max_groups < 2) throw std::invalid_argument("grouping: max_groups (m_g) must be at least 2");
  if (!(params.mean_distance_threshold > 0.0)) {
    throw std::invalid_argument("grouping: mean distance threshold (m_d) must be positive");
  }
}

double inter_group_mean_distance(std::span<const Vec2> a, std::span<const Vec2> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("inter_group_mean_distance: empty group");
  double sum = 0.0;
  for (const Vec2& x : a) {
    for (const Vec2& y : b) sum += distance(x, y);
  }
  return sum / (static_cast<double>(a.size()) * static_cast<double>(b.size()));
}

double internal_mean_distance(std::span<const Vec2> points, const Group& group) {
  if (group.size() < 2) return 0.0;
  double sum = 0.0;
  for (std::size_t i = 0; i < group.size(); ++i) {
    for (std::size_t j = i + 1; j < group.size(); ++j) sum += distance(points[group[i]], points[group[j]]);
  }
  const double pairs = static_cast<double>(group.size()) * static_cast<double>(group.size() - 1) / 2.0;
  return sum / pairs;
}

namespace {

std::pair<Group, Group> split_group(std::span<const Vec2> points, const Group& group) {
  // Most dissimilar pair; the first pair in member order wins ties.
  std::size_t best_a = 0;
  std::size_t best_b = 1;
  double best = -1.0;
  for (std::size_t i = 0; i < group.size(); ++i) {
    for (std::size_t j = i + 1; j < group.size(); ++j) {
      const double d = distance(points[group[i]], points[group[j]]);
      if (d > best) {
        best = d;
        best_a = i;
        best_b = j;
      }
    }
  }
  const std::size_t end_a = group[best_a];
  const std::size_t end_b = group[best_b];
  // end_a is the lower robot index because groups are kept sorted.
  Group first;
  Group second;
  for (std::size_t k = 0; k < group.size(); ++k) {
    const std::size_t member = group[k];
    if (k == best_a) {
      first.push_back(member);
    } else if (k == best_b) {
      second.push_back(member);
    } else {
      const double da = distance(points[member], points[end_a]);
      const double db = distance(points[member], points[end_b]);
      (db < da ? second : first).push_back(member);
    }
  }
  return {std::move(first), std::move(second)};
}

}  // namespace

std::vector<Group> diana_split(std::span<const Vec2> points, const GroupingParams& params) {
  validate(params);
  std::vector<Group> groups;
  if (points.empty()) return groups;
  Group all(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) all[i] = i;
  groups.push_back(std::move(all));
  if (points.size() < 2) return groups;

  const std::size_t guard = params.max_iterations > 0 ? params.max_iterations : points.size() - 1;
  std::vector<double> internal{internal_mean_distance(points, groups[0])};

  for (std::size_t split = 0; split < guard; ++split) {
    std::size_t selected = 0;
    for (std::size_t g = 1; g < groups.size(); ++g) {
      if (internal[g] > internal[selected]) selected = g;
    }
    if (split > 0) {
      if (groups.size() >= params.max_groups) break;
      if (internal[selected] <= params.mean_distance_threshold) break;
      if (groups[selected].size() <= 2) break;
    }
    auto [first, second] = split_group(points, groups[selected]);
    internal[selected] = internal_mean_distance(points, first);
    groups[selected] = std::move(first);
    internal.push_back(internal_mean_distance(points, second));
    groups.push_back(std::move(second));
  }
  return groups;
}

std::vector<std::size_t> select_centers(std::span<const Group> groups, std::span<const double> fitness, Rng& rng) {
  std::vector<std::size_t> centers;
  centers.reserve(groups.size());
  std::vector<std::size_t> tied;
  for (const Group& group : groups) {
    if (group.empty()) throw std::invalid_argument("select_centers: empty group");
    double best = fitness[group.front()];
    for (std::size_t member : group) best = std::max(best, fitness[member]);
    tied.clear();
    for (std::size_t member : group) {
      if (fitness[member] == best) tied.push_back(member);
    }
    centers.push_back(tied.size() == 1 ? tied.front() : tied[rng.index(tied.size())]);
  }
  return centers;
}

}  // namespace rbso
