#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rbso/env.hpp"
#include "rbso/generation.hpp"
#include "rbso/geometry.hpp"
#include "rbso/trace.hpp"

namespace rbso {

struct MotionParams {
  double step_length = 2.0;
  double d_safe = 3.0;
  std::int64_t max_steps = 500;  // m_s, ticks per phase
  double sample_dt = 0.1;        // seconds per tick
  /// Consecutive rejected ticks after which a waiting robot parks.
  std::int64_t patience = 20;
};

struct EvaluationPolicy {
  /// Re-read every stored personal-best fitness from the field whenever a
  /// target stops broadcasting, so handled targets stop attracting the swarm.
  /// When false, personal-best fitness never decreases.
  bool refresh_pbest_on_handling = true;
};

void validate(const MotionParams& params);

struct MotionState {
  MotionMode mode = MotionMode::go_to_goal;
  std::optional<std::size_t> followed_obstacle;
  std::optional<Vec2> hit_point;
  int direction = 1;  // +1 counter-clockwise, -1 clockwise
  double boundary_travel = 0.0;
  bool reversed = false;
  std::int64_t wait_ticks = 0;
};

struct RobotState {
  Vec2 position;
  PersonalBest pbest;
  Activity activity = Activity::searching;
  MotionState motion;
  double path_length = 0.0;

  bool stationary() const {
    return activity == Activity::handling || motion.mode == MotionMode::arrived || motion.mode == MotionMode::parked;
  }
};

struct StepPlan {
  Vec2 proposal;
  MotionState next;
};

/// One tick of the modified Bug planner.
///
/// Go-to-goal moves one step along the straight line. A step that would cut
/// an obstacle switches to boundary following on the obstacle outline offset
/// by d_safe / 2, turning towards the side with the smaller heading change
/// (counter-clockwise on ties). The robot leaves the outline once it is
/// strictly closer to the goal than its hit point and the straight line to the
/// goal no longer crosses the followed obstacle. A
/// full lap without leaving parks the robot. `stationary` holds the
/// positions of robots that will not move this tick; straight steps that
/// would come within d_safe of one are deflected, or the robot parks when the
/// occupied spot is its own goal.
StepPlan plan_step(Vec2 position, const MotionState& state, Vec2 goal, const EnvironmentSpec& env,
                   std::span<const Vec2> stationary, const MotionParams& params);

struct CollisionResolution {
  std::vector<Vec2> positions;
  std::vector<bool> waiting;  // proposal rejected this tick
};

/// Sequential priority pass in index order. A proposal is accepted iff it is
/// at least d_safe from every position already accepted this tick and from
/// the current position of every robot not yet processed. Robots flagged in
/// `holds` keep their position.
CollisionResolution resolve_collisions(std::span<const Vec2> proposals, std::span<const Vec2> current,
                                       const std::vector<bool>& holds, const MotionParams& params);

struct FoundEvent {
  std::size_t target = 0;
  std::size_t robot = 0;
  std::int64_t step = 0;
  Vec2 position;
};

struct PhaseResult {
  std::int64_t ticks = 0;
  std::vector<FoundEvent> found;
};

/// Runs one evaluation phase: lockstep ticks of plan_step and
/// resolve_collisions, with a signal evaluation after every tick.
///
/// A searching robot whose nearest active target is closer than epsilon
/// deactivates it and starts handling (lower index wins within a tick). A
/// robot whose proposal is rejected `patience` ticks in a row parks. The
/// phase ends when every robot is arrived, parked or handling, after
/// max_steps ticks, when `clock` reaches `budget`, or when no target remains
/// active. `clock` is advanced by the number of ticks run.
PhaseResult move_and_evaluate(std::vector<RobotState>& swarm, std::span<const Vec2> goals, const EnvironmentSpec& env,
                              std::vector<TargetState>& targets, const MotionParams& params, std::int64_t& clock,
                              std::int64_t budget, TraceSink* sink, const EvaluationPolicy& policy = {});

/// Outline helpers, exposed for tests.
namespace outline {

/// Arc-length coordinate of p (assumed on the boundary of `r`), counter-clockwise from min_corner.
double coordinate(const Rectangle& r, Vec2 p);
Vec2 point_at(const Rectangle& r, double s);
/// Arc length to the next corner when travelling in `direction` from s.
double to_next_corner(const Rectangle& r, double s, int direction);

}  // namespace outline

}  // namespace rbso
