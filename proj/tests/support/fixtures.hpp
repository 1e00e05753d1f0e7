#pragma once

#include <cstddef>
#include <initializer_list>
#include <vector>

#include "rbso/env.hpp"
#include "rbso/trace.hpp"

namespace rbso::testing {

/// Obstacle-free square arena with the given targets.
inline EnvironmentSpec open_arena(double side, std::initializer_list<Vec2> targets = {}, std::size_t robots = 1) {
  EnvironmentSpec env;
  env.width = side;
  env.height = side;
  for (const Vec2& t : targets) env.targets.push_back({t});
  env.population_n = robots;
  return env;
}

/// Keeps every record in memory.
class RecordingSink : public TraceSink {
 public:
  void record(const StepRecord& rec) override { records.push_back(rec); }
  std::vector<StepRecord> records;
};

}  // namespace rbso::testing
