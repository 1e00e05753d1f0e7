#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "rbso/engine.hpp"
#include "rbso/env.hpp"

namespace rbso {

struct RandomObstacles {
  std::size_t count = 0;
  double min_side = 50.0;
  double max_side = 150.0;
  double clearance = 100.0;       // minimum gap between obstacles
  double wall_clearance = 50.0;   // minimum gap to the arena walls
  std::optional<std::uint64_t> seed;
};

struct RandomTargets {
  std::size_t count = 0;
  std::optional<std::uint64_t> seed;
};

/// A scenario document: the world, possibly with seeded random layout
/// pieces, plus every simulation parameter.
struct Scenario {
  double width = 1000.0;
  double height = 1000.0;
  std::vector<Rectangle> obstacles;
  std::optional<RandomObstacles> obstacles_random;
  std::vector<TargetSpec> targets;
  std::optional<RandomTargets> targets_random;
  std::size_t robot_count = 20;
  std::optional<std::uint64_t> robots_seed;
  std::vector<Vec2> robot_starts;
  double attenuation_a = 10.0;
  double detect_epsilon = 5.0;
  SimParams params;
};

/// A concrete world for one seed.
struct ScenarioInstance {
  EnvironmentSpec env;
  SimParams params;
};

/// Parse error in the scenario text (malformed JSON or override).
class ScenarioParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Parses and validates a scenario document. Each override has the form
/// "dotted.path=value" and is applied to the document before validation;
/// the value is read as JSON, or as a string when it is not valid JSON.
/// Throws ScenarioParseError or ValidationError (with the field path).
Scenario load_scenario(std::string_view text, std::span<const std::string> overrides = {});

Scenario load_scenario_file(const std::string& path, std::span<const std::string> overrides = {});

/// Materializes random layout pieces. `seed` replaces the document's
/// top-level seed; per-piece seeds in the document take precedence.
ScenarioInstance instantiate(const Scenario& scenario, std::optional<std::uint64_t> seed = std::nullopt);

/// Canonical JSON text of a scenario (round-trips through load_scenario).
std::string to_json(const Scenario& scenario);

/// The published experiment: 1000 x 1000 arena, 20 robots, 10 random
/// targets, 6 random obstacles, and the published BSO/RBSO parameters.
Scenario published_scenario();

}  // namespace rbso
