#include "rbso/env.hpp"

#include <cmath>
#include <numbers>

#include <fmt/format.h>

namespace rbso {

Vec2 EnvironmentSpec::clamp(Vec2 p) const {
  return {std::clamp(p.x, 0.0, width), std::clamp(p.y, 0.0, height)};
}

bool EnvironmentSpec::in_obstacle(Vec2 p) const {
  for (const auto& r : obstacles) {
    if (r.contains_interior(p)) return true;
  }
  return false;
}

void validate(const EnvironmentSpec& env) {
  if (!(env.width > 0.0) || !std::isfinite(env.width)) {
    throw ValidationError("arena.width", "must be a positive finite length");
  }
  if (!(env.height > 0.0) || !std::isfinite(env.height)) {
    throw ValidationError("arena.height", "must be a positive finite length");
  }
  const Rectangle bounds = env.bounds();
  for (std::size_t i = 0; i < env.obstacles.size(); ++i) {
    const auto& r = env.obstacles[i];
    const std::string path = fmt::format("obstacles[{}]", i);
    if (!(r.min_corner.x < r.max_corner.x && r.min_corner.y < r.max_corner.y)) {
      throw ValidationError(path, "min corner must be strictly below max corner");
    }
    if (!bounds.contains_closed(r.min_corner) || !bounds.contains_closed(r.max_corner)) {
      throw ValidationError(path, "obstacle must lie fully inside the arena");
    }
  }
  for (std::size_t i = 0; i < env.targets.size(); ++i) {
    const Vec2 p = env.targets[i].location;
    const std::string path = fmt::format("targets[{}]", i);
    if (!env.in_bounds(p)) throw ValidationError(path, "target must lie inside the arena");
    for (const auto& r : env.obstacles) {
      if (r.contains_closed(p)) throw ValidationError(path, "target must lie strictly outside all obstacles");
    }
  }
  if (!(env.attenuation_a > 0.0) || !std::isfinite(env.attenuation_a)) {
    throw ValidationError("signal.a", "attenuation coefficient must be positive");
  }
  if (!(env.detect_epsilon > 0.0) || !std::isfinite(env.detect_epsilon)) {
    throw ValidationError("signal.epsilon", "detection radius must be positive");
  }
  if (env.population_n < 1) {
    throw ValidationError("robots_random.count", "population must be at least 1");
  }
  if (!env.robot_starts.empty()) {
    if (env.robot_starts.size() != env.population_n) {
      throw ValidationError("robots", "explicit start list must have one entry per robot");
    }
    for (std::size_t i = 0; i < env.robot_starts.size(); ++i) {
      const Vec2 p = env.robot_starts[i];
      if (!env.in_bounds(p) || env.in_obstacle(p)) {
        throw ValidationError(fmt::format("robots[{}]", i), "start must be inside the arena and outside obstacles");
      }
    }
  }
}

double per_target_signal(double d, double a) {
  return (1.0 / (a * std::sqrt(std::numbers::pi))) * std::exp(-d / (a * a));
}

SignalReading field_value(Vec2 p, std::span<const TargetState> targets, double a) {
  SignalReading reading;
  for (std::size_t i = 0; i < targets.size(); ++i) {
    if (!targets[i].active()) continue;
    const double d = distance(p, targets[i].location());
    // Ties between equidistant targets go to the lower index, so the value is
    // permutation invariant even though the reported index is not.
    if (!reading.nearest_active_target || d < reading.nearest_distance) {
      reading.nearest_active_target = i;
      reading.nearest_distance = d;
    }
  }
  if (reading.nearest_active_target) {
    // Contributions decrease strictly in d, so the max is the nearest target's.
    reading.value = per_target_signal(reading.nearest_distance, a);
  }
  return reading;
}

double detection_threshold(double epsilon, double a) { return per_target_signal(epsilon, a); }

bool is_blocked(Vec2 from, Vec2 to, std::span<const Rectangle> obstacles) {
  for (const auto& r : obstacles) {
    if (segment_hits_interior(from, to, r)) return true;
  }
  return false;
}

std::vector<TargetState> make_target_states(const EnvironmentSpec& env) {
  std::vector<TargetState> out;
  out.reserve(env.targets.size());
  for (const auto& t : env.targets) out.emplace_back(t.location);
  return out;
}

}  // namespace rbso
