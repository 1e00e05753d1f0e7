#include "rbso/engine.hpp"

#include <algorithm>
#include <functional>

#include <fmt/format.h>

#include "rbso/assignment.hpp"

namespace rbso {

void validate(const SimParams& params) {
  validate(params.grouping);
  validate(params.generation);
  validate(params.motion);
  if (params.global_budget < 0) throw std::invalid_argument("engine: global budget T_g must be nonnegative");
}

std::size_t RunResult::found_by(std::int64_t step) const {
  return static_cast<std::size_t>(
      std::count_if(targets_found.begin(), targets_found.end(), [step](const FoundEvent& e) { return e.step <= step; }));
}

std::optional<std::int64_t> RunResult::all_found_step() const {
  if (!all_found) return std::nullopt;
  std::int64_t last = 0;
  for (const auto& e : targets_found) last = std::max(last, e.step);
  return last;
}

double RunResult::total_path_length() const {
  double sum = 0.0;
  for (double d : path_lengths) sum += d;
  return sum;
}

std::vector<RobotState> initialize(const EnvironmentSpec& env, const MotionParams& motion, std::uint64_t seed,
                                   std::span<const TargetState> targets) {
  std::vector<Vec2> starts = env.robot_starts;
  if (starts.empty()) {
    Rng rng(seed);
    constexpr std::size_t kAttemptsPerRobot = 10000;
    for (std::size_t i = 0; i < env.population_n; ++i) {
      bool placed = false;
      for (std::size_t attempt = 0; attempt < kAttemptsPerRobot && !placed; ++attempt) {
        const Vec2 p{rng.uniform(0.0, env.width), rng.uniform(0.0, env.height)};
        if (env.in_obstacle(p)) continue;
        placed = std::all_of(starts.begin(), starts.end(), [&](Vec2 q) { return distance(p, q) >= motion.d_safe; });
        if (placed) starts.push_back(p);
      }
      if (!placed) {
        throw PackingError(fmt::format("could not place robot {} of {} in the free space after {} attempts", i + 1,
                                       env.population_n, kAttemptsPerRobot));
      }
    }
  } else {
    for (std::size_t i = 0; i < starts.size(); ++i) {
      for (std::size_t j = i + 1; j < starts.size(); ++j) {
        if (distance(starts[i], starts[j]) < motion.d_safe) {
          throw PackingError(fmt::format("explicit starts {} and {} are closer than d_safe", i, j));
        }
      }
    }
  }
  std::vector<RobotState> swarm(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    swarm[i].position = starts[i];
    swarm[i].pbest = {starts[i], field_value(starts[i], targets, env.attenuation_a).value};
  }
  return swarm;
}

namespace {

using GoalSource = std::function<std::vector<Vec2>(const std::vector<RobotState>&, std::int64_t clock, Rng&)>;

RunResult search_loop(const EnvironmentSpec& env, const SimParams& params, TraceSink* sink, const GoalSource& goals_for) {
  validate(env);
  validate(params);
  std::vector<TargetState> targets = make_target_states(env);
  const std::uint64_t placement = params.placement_seed.value_or(stream_seed(params.seed, SeedStream::placement));
  std::vector<RobotState> swarm = initialize(env, params.motion, placement, targets);
  Rng rng(stream_seed(params.seed, SeedStream::algorithm));

  RunResult result;
  result.target_count = targets.size();
  const auto any_active = [&] {
    return std::any_of(targets.begin(), targets.end(), [](const TargetState& t) { return t.active(); });
  };

  std::int64_t clock = 0;
  std::vector<Vec2> positions(swarm.size());
  std::vector<Vec2> goals(swarm.size());
  std::vector<bool> available(swarm.size(), true);
  while (any_active() && clock < params.global_budget) {
    // Handling ends with the phase; every robot rejoins here.
    for (auto& robot : swarm) robot.activity = Activity::searching;
    const std::vector<Vec2> generated = goals_for(swarm, clock, rng);
    for (std::size_t i = 0; i < swarm.size(); ++i) {
      positions[i] = swarm[i].position;
      available[i] = swarm[i].activity != Activity::handling;
    }
    const std::vector<std::size_t> mapping = assign_available(positions, available, generated);
    for (std::size_t i = 0; i < swarm.size(); ++i) {
      goals[i] = mapping[i] == kUnassigned ? swarm[i].position : generated[mapping[i]];
    }
    PhaseResult phase = move_and_evaluate(swarm, goals, env, targets, params.motion, clock, params.global_budget, sink,
                                          params.evaluation);
    result.targets_found.insert(result.targets_found.end(), phase.found.begin(), phase.found.end());
    ++result.iterations;
  }
  result.total_steps = clock;
  result.all_found = !any_active();
  result.path_lengths.reserve(swarm.size());
  for (const auto& robot : swarm) result.path_lengths.push_back(robot.path_length);
  return result;
}

}  // namespace

RunResult run(const EnvironmentSpec& env, const SimParams& params, TraceSink* sink) {
  GroupingParams grouping = params.grouping;
  return search_loop(env, params, sink, [&](const std::vector<RobotState>& swarm, std::int64_t clock, Rng& rng) {
    std::vector<Vec2> best(swarm.size());
    std::vector<double> fitness(swarm.size());
    std::vector<PersonalBest> pbests(swarm.size());
    for (std::size_t i = 0; i < swarm.size(); ++i) {
      best[i] = swarm[i].pbest.position;
      fitness[i] = swarm[i].pbest.fitness;
      pbests[i] = swarm[i].pbest;
    }
    GroupingResult g;
    g.groups = diana_split(best, grouping);
    g.centers = select_centers(g.groups, fitness, rng);
    return generate_positions(g, pbests, params.generation, clock, env, rng).positions;
  });
}

RunResult run_random_walk_baseline(const EnvironmentSpec& env, const SimParams& params, TraceSink* sink) {
  return search_loop(env, params, sink, [&](const std::vector<RobotState>& swarm, std::int64_t, Rng& rng) {
    std::vector<Vec2> goals;
    goals.reserve(swarm.size());
    for (std::size_t i = 0; i < swarm.size(); ++i) {
      Vec2 p{rng.uniform(0.0, env.width), rng.uniform(0.0, env.height)};
      for (int attempt = 0; attempt < 1000 && env.in_obstacle(p); ++attempt) {
        p = {rng.uniform(0.0, env.width), rng.uniform(0.0, env.height)};
      }
      goals.push_back(p);
    }
    return goals;
  });
}

}  // namespace rbso
