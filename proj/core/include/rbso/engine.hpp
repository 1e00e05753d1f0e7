#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <stdexcept>
#include <vector>

#include "rbso/env.hpp"
#include "rbso/generation.hpp"
#include "rbso/grouping.hpp"
#include "rbso/motion.hpp"
#include "rbso/trace.hpp"

namespace rbso {

struct SimParams {
  GroupingParams grouping;
  GenerationParams generation;
  MotionParams motion;
  EvaluationPolicy evaluation;
  std::int64_t global_budget = 20000;  // T_g, counted in motion ticks
  std::uint64_t seed = 1;
  /// Seed for robot placement; derived from `seed` when empty.
  std::optional<std::uint64_t> placement_seed;
};

void validate(const SimParams& params);

/// Start positions cannot be rejection-sampled into the free space.
class PackingError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct RunResult {
  std::vector<FoundEvent> targets_found;  // in emission order
  std::int64_t total_steps = 0;
  std::size_t iterations = 0;
  std::size_t target_count = 0;
  bool all_found = false;
  std::vector<double> path_lengths;  // one per robot

  /// Number of finds at or before the given tick.
  std::size_t found_by(std::int64_t step) const;
  /// Tick of the last find when all targets were found.
  std::optional<std::int64_t> all_found_step() const;
  double total_path_length() const;
};

/// Uniform placement outside obstacle interiors with pairwise separation
/// d_safe. Personal bests start at the initial position.
std::vector<RobotState> initialize(const EnvironmentSpec& env, const MotionParams& motion, std::uint64_t seed,
                                   std::span<const TargetState> targets);

/// Full RBSO search: group, pick centers, generate goals, assign, move and
/// evaluate, until every target is handled or the tick budget is spent.
RunResult run(const EnvironmentSpec& env, const SimParams& params, TraceSink* sink = nullptr);

/// Same loop with uniformly random free goals instead of BSO generation.
RunResult run_random_walk_baseline(const EnvironmentSpec& env, const SimParams& params, TraceSink* sink = nullptr);

/// Seed stream tags for sub-streams derived from one run seed.
enum class SeedStream : std::uint64_t { targets = 1, obstacles = 2, placement = 3, algorithm = 4 };

inline std::uint64_t stream_seed(std::uint64_t seed, SeedStream stream) {
  return mix_seed(seed, static_cast<std::uint64_t>(stream));
}

}  // namespace rbso
