#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

#include "rbso/geometry.hpp"

namespace rbso {

struct TargetSpec {
  Vec2 location;
};

/// A target is active while it broadcasts. Deactivation is permanent.
class TargetState {
 public:
  explicit TargetState(Vec2 location) : location_(location) {}

  Vec2 location() const { return location_; }
  bool active() const { return active_; }
  void deactivate() { active_ = false; }

 private:
  Vec2 location_;
  bool active_ = true;
};

struct SignalReading {
  double value = 0.0;
  std::optional<std::size_t> nearest_active_target;
  double nearest_distance = 0.0;
};

/// The world: arena, obstacles, targets and the beacon signal parameters.
struct EnvironmentSpec {
  double width = 0.0;
  double height = 0.0;
  std::vector<Rectangle> obstacles;
  std::vector<TargetSpec> targets;
  double attenuation_a = 10.0;
  double detect_epsilon = 5.0;
  std::size_t population_n = 1;
  /// Explicit start positions; empty means rejection-sampled placement.
  std::vector<Vec2> robot_starts;

  Rectangle bounds() const { return {{0.0, 0.0}, {width, height}}; }
  bool in_bounds(Vec2 p) const { return p.x >= 0.0 && p.x <= width && p.y >= 0.0 && p.y <= height; }
  Vec2 clamp(Vec2 p) const;
  /// True iff p lies in the open interior of some obstacle.
  bool in_obstacle(Vec2 p) const;
};

class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string path, const std::string& what)
      : std::runtime_error(path + ": " + what), path_(std::move(path)) {}
  const std::string& path() const { return path_; }

 private:
  std::string path_;
};

/// Throws ValidationError naming the first violated invariant.
void validate(const EnvironmentSpec& env);

/// Beacon strength at distance d: (1 / (a sqrt(pi))) exp(-d / a^2).
double per_target_signal(double d, double a);

/// Reading at p: the strongest single active-target contribution.
SignalReading field_value(Vec2 p, std::span<const TargetState> targets, double a);

/// Signal level equivalent to the detection radius epsilon.
double detection_threshold(double epsilon, double a);

bool is_blocked(Vec2 from, Vec2 to, std::span<const Rectangle> obstacles);

std::vector<TargetState> make_target_states(const EnvironmentSpec& env);

}  // namespace rbso
