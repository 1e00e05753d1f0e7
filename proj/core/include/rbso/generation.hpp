#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "rbso/env.hpp"
#include "rbso/geometry.hpp"
#include "rbso/grouping.hpp"
#include "rbso/random.hpp"

namespace rbso {

struct GenerationParams {
  double p_one = 0.4;
  double p_center = 0.8;
  double noise_base = 50.0;
  /// Horizon of the step-size schedule, in ticks.
  std::int64_t noise_horizon = 20000;
};

void validate(const GenerationParams& params);

struct PersonalBest {
  Vec2 position;
  double fitness = 0.0;
};

/// Which BSO branch produced a generated position.
struct GenerationBranch {
  bool one_group = true;  // false: combination of two groups
  bool from_center = true;
};

struct GeneratedPositions {
  std::vector<Vec2> positions;
  std::vector<GenerationBranch> branches;
};

/// logsig((0.5 H - t) / k) with k = H / 20.
double noise_envelope(std::int64_t t, std::int64_t horizon);

/// Perturbation standard deviation at step t; draws its own u ~ U(0, 1).
double noise_scale(std::int64_t t, const GenerationParams& params, Rng& rng);

/// One new position per robot slot from the grouping and the personal bests.
GeneratedPositions generate_positions(const GroupingResult& grouping, std::span<const PersonalBest> pbests,
                                      const GenerationParams& params, std::int64_t t, const EnvironmentSpec& env,
                                      Rng& rng);

/// BSO selection: the visited point replaces the incumbent only on strict improvement.
PersonalBest update_pbest(const PersonalBest& incumbent, Vec2 visited, const SignalReading& reading);

}  // namespace rbso
