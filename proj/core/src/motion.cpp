#include "rbso/motion.hpp"

#include <array>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace rbso {

void validate(const MotionParams& params) {
  if (!(params.step_length > 0.0)) throw std::invalid_argument("motion: step_length must be positive");
  if (!(params.d_safe > 0.0)) throw std::invalid_argument("motion: d_safe must be positive");
  if (params.max_steps < 1) throw std::invalid_argument("motion: max_steps (m_s) must be at least 1");
  if (!(params.sample_dt > 0.0)) throw std::invalid_argument("motion: sample_dt must be positive");
  if (params.patience < 1) throw std::invalid_argument("motion: patience must be at least 1 tick");
}

namespace outline {
namespace {

struct Corner {
  double coordinate;  // arc length of the corner, in [0, P]
  double distance;    // arc length from s to the corner
};

double wrap(const Rectangle& r, double s) {
  const double p = r.perimeter();
  s = std::fmod(s, p);
  if (s < 0.0) s += p;
  return s;
}

Corner next_corner(const Rectangle& r, double s, int direction) {
  const double w = r.width();
  const double h = r.height();
  const double p = r.perimeter();
  const double tol = 1e-9 * p;
  const std::array<double, 5> corners{0.0, w, w + h, 2.0 * w + h, p};
  if (direction > 0) {
    for (std::size_t i = 1; i < corners.size(); ++i) {
      if (corners[i] > s + tol) return {corners[i], corners[i] - s};
    }
    return {w, p - s + w};
  }
  if (s <= tol) s = p;
  for (std::size_t i = corners.size() - 1; i-- > 0;) {
    if (corners[i] < s - tol) return {corners[i], s - corners[i]};
  }
  return {2.0 * w + h, s};
}

double segment_distance(Vec2 p, Vec2 a, Vec2 b) {
  const Vec2 ab = b - a;
  const double len2 = dot(ab, ab);
  const double t = len2 > 0.0 ? std::clamp(dot(p - a, ab) / len2, 0.0, 1.0) : 0.0;
  return distance(p, a + ab * t);
}

}  // namespace

double coordinate(const Rectangle& r, Vec2 p) {
  const double w = r.width();
  const double h = r.height();
  const Vec2 c0 = r.min_corner;
  const Vec2 c1{r.max_corner.x, r.min_corner.y};
  const Vec2 c2 = r.max_corner;
  const Vec2 c3{r.min_corner.x, r.max_corner.y};
  const std::array<double, 4> d{segment_distance(p, c0, c1), segment_distance(p, c1, c2), segment_distance(p, c2, c3),
                                segment_distance(p, c3, c0)};
  std::size_t edge = 0;
  for (std::size_t i = 1; i < d.size(); ++i) {
    if (d[i] < d[edge]) edge = i;
  }
  switch (edge) {
    case 0:
      return std::clamp(p.x - c0.x, 0.0, w);
    case 1:
      return w + std::clamp(p.y - c1.y, 0.0, h);
    case 2:
      return w + h + std::clamp(c2.x - p.x, 0.0, w);
    default:
      return wrap(r, 2.0 * w + h + std::clamp(c3.y - p.y, 0.0, h));
  }
}

Vec2 point_at(const Rectangle& r, double s) {
  const double w = r.width();
  const double h = r.height();
  s = wrap(r, s);
  const Vec2 lo = r.min_corner;
  const Vec2 hi = r.max_corner;
  if (s <= w) return {lo.x + s, lo.y};
  if (s <= w + h) return {hi.x, lo.y + (s - w)};
  if (s <= 2.0 * w + h) return {hi.x - (s - w - h), hi.y};
  return {lo.x, hi.y - (s - 2.0 * w - h)};
}

double to_next_corner(const Rectangle& r, double s, int direction) { return next_corner(r, s, direction).distance; }

}  // namespace outline

namespace {

constexpr double kTol = 1e-9;

class Planner {
 public:
  Planner(const EnvironmentSpec& env, std::span<const Vec2> stationary, const MotionParams& params)
      : env_(env), stationary_(stationary), params_(params) {}

  StepPlan plan(Vec2 p, const MotionState& state, Vec2 goal) const {
    const Vec2 approach = approach_point(goal);
    const bool reachable = approach == goal;
    switch (state.mode) {
      case MotionMode::arrived:
      case MotionMode::parked:
        return {p, state};
      case MotionMode::go_to_goal:
        return settle(go_to_goal(p, state, approach), reachable);
      case MotionMode::boundary_follow:
        break;
    }
    // Leave once strictly closer than the hit point with the followed obstacle
    // out of the way; another obstacle on the line starts a new, closer hit.
    const Rectangle& followed = env_.obstacles[*state.followed_obstacle];
    if (distance(p, approach) < distance(*state.hit_point, approach) && !segment_hits_interior(p, approach, followed)) {
      return settle(go_to_goal(p, MotionState{}, approach), reachable);
    }
    return follow(p, state);
  }

 private:
  // A goal inside an obstacle is unreachable; the robot heads for the
  // closest point of that obstacle's outline instead and parks there.
  Vec2 approach_point(Vec2 goal) const {
    for (const Rectangle& r : env_.obstacles) {
      if (!r.contains_interior(goal)) continue;
      const Rectangle band = r.inflated(0.5 * params_.d_safe);
      const Vec2 q = snap_out(band, goal);
      return env_.in_bounds(q) && !env_.in_obstacle(q) ? q : goal;
    }
    return goal;
  }

  static StepPlan settle(StepPlan plan, bool reachable) {
    if (!reachable && plan.next.mode == MotionMode::arrived) plan.next.mode = MotionMode::parked;
    return plan;
  }

  bool clear_of_robots(Vec2 q) const {
    for (const Vec2& s : stationary_) {
      if (distance(q, s) < params_.d_safe) return false;
    }
    return true;
  }

  bool feasible(Vec2 from, Vec2 to) const {
    return env_.in_bounds(to) && !is_blocked(from, to, env_.obstacles) && clear_of_robots(to);
  }

  static StepPlan park(Vec2 p, MotionState state) {
    state.mode = MotionMode::parked;
    return {p, state};
  }

  StepPlan go_to_goal(Vec2 p, const MotionState& state, Vec2 goal) const {
    const double d = distance(p, goal);
    const bool arriving = d <= params_.step_length;
    const Vec2 heading = d > 0.0 ? (goal - p) * (1.0 / d) : Vec2{1.0, 0.0};
    const Vec2 candidate = arriving ? goal : p + heading * params_.step_length;

    if (is_blocked(p, candidate, env_.obstacles)) return start_following(p, state, candidate, heading);

    if (clear_of_robots(candidate)) {
      MotionState next = state;
      next.mode = arriving ? MotionMode::arrived : MotionMode::go_to_goal;
      return {candidate, next};
    }
    // A stationary robot sits in the way.
    if (!clear_of_robots(goal)) return park(p, state);
    constexpr std::array<double, 6> kDeflections{30.0, -30.0, 60.0, -60.0, 90.0, -90.0};
    for (double deg : kDeflections) {
      const double rad = deg * std::numbers::pi / 180.0;
      const Vec2 dir{heading.x * std::cos(rad) - heading.y * std::sin(rad),
                     heading.x * std::sin(rad) + heading.y * std::cos(rad)};
      const Vec2 q = p + dir * std::min(params_.step_length, d);
      if (feasible(p, q)) return {q, state};
    }
    return {p, state};
  }

  StepPlan start_following(Vec2 p, const MotionState& state, Vec2 candidate, Vec2 heading) const {
    std::size_t hit = env_.obstacles.size();
    double first_entry = 2.0;
    for (std::size_t k = 0; k < env_.obstacles.size(); ++k) {
      double t = 0.0;
      if (segment_hits_interior(p, candidate, env_.obstacles[k]) &&
          segment_entry(p, candidate, env_.obstacles[k], t) && t < first_entry) {
        first_entry = t;
        hit = k;
      }
    }
    if (hit == env_.obstacles.size()) return {p, state};

    const Rectangle band = env_.obstacles[hit].inflated(0.5 * params_.d_safe);
    Vec2 contact = p;
    if (band.contains_interior(p)) {
      contact = snap_out(band, p);
    } else {
      double t = 0.0;
      if (segment_entry(p, candidate, band, t)) contact = p + (candidate - p) * t;
    }

    MotionState next;
    next.mode = MotionMode::boundary_follow;
    next.followed_obstacle = hit;
    next.hit_point = contact;
    next.direction = turn_direction(band, contact, heading);

    if (distance(p, contact) > kTol) {
      if (feasible(p, contact)) return {contact, next};
      return {p, state};
    }
    next.hit_point = p;
    return follow(p, next);
  }

  Vec2 snap_out(const Rectangle& band, Vec2 p) const {
    struct Side {
      double gap;
      Vec2 point;
    };
    std::array<Side, 4> sides{Side{p.x - band.min_corner.x, {band.min_corner.x, p.y}},
                              Side{band.max_corner.x - p.x, {band.max_corner.x, p.y}},
                              Side{p.y - band.min_corner.y, {p.x, band.min_corner.y}},
                              Side{band.max_corner.y - p.y, {p.x, band.max_corner.y}}};
    std::stable_sort(sides.begin(), sides.end(), [](const Side& a, const Side& b) { return a.gap < b.gap; });
    for (const Side& s : sides) {
      if (env_.in_bounds(s.point)) return s.point;
    }
    return p;
  }

  static int turn_direction(const Rectangle& band, Vec2 at, Vec2 heading) {
    const double s = outline::coordinate(band, at);
    const auto tangent = [&](int dir) {
      const double c = s + dir * outline::to_next_corner(band, s, dir);
      const Vec2 v = outline::point_at(band, c) - at;
      const double n = norm(v);
      return n > 0.0 ? v * (1.0 / n) : Vec2{};
    };
    const double ccw = dot(tangent(1), heading);
    const double cw = dot(tangent(-1), heading);
    return ccw >= cw - 1e-12 ? 1 : -1;
  }

  StepPlan follow(Vec2 p, MotionState state) const {
    const Rectangle band = env_.obstacles[*state.followed_obstacle].inflated(0.5 * params_.d_safe);
    const double lap = band.perimeter() * (state.reversed ? 2.0 : 1.0) + params_.step_length;
    if (state.boundary_travel >= lap) return park(p, state);

    const double s = outline::coordinate(band, p);
    for (int attempt = 0; attempt < 2; ++attempt) {
      const double to_corner = outline::to_next_corner(band, s, state.direction);
      const double advance = std::min(params_.step_length, to_corner);
      const double s_next = s + state.direction * (advance >= to_corner ? to_corner : advance);
      const Vec2 q = outline::point_at(band, s_next);
      if (feasible(p, q)) {
        state.boundary_travel += advance;
        return {q, state};
      }
      if (state.reversed) break;
      state.direction = -state.direction;
      state.reversed = true;
    }
    return park(p, state);
  }

  const EnvironmentSpec& env_;
  std::span<const Vec2> stationary_;
  const MotionParams& params_;
};

}  // namespace

StepPlan plan_step(Vec2 position, const MotionState& state, Vec2 goal, const EnvironmentSpec& env,
                   std::span<const Vec2> stationary, const MotionParams& params) {
  return Planner(env, stationary, params).plan(position, state, goal);
}

CollisionResolution resolve_collisions(std::span<const Vec2> proposals, std::span<const Vec2> current,
                                       const std::vector<bool>& holds, const MotionParams& params) {
  const std::size_t n = proposals.size();
  if (current.size() != n || holds.size() != n) throw std::invalid_argument("resolve_collisions: size mismatch");
  CollisionResolution out;
  out.positions.assign(current.begin(), current.end());
  out.waiting.assign(n, false);
  for (std::size_t i = 0; i < n; ++i) {
    if (holds[i] || proposals[i] == current[i]) continue;
    bool ok = true;
    for (std::size_t j = 0; j < n && ok; ++j) {
      if (j == i) continue;
      // Entries below i already hold accepted positions; the rest are current.
      ok = distance(proposals[i], out.positions[j]) >= params.d_safe;
    }
    if (ok) {
      out.positions[i] = proposals[i];
    } else {
      out.waiting[i] = true;
    }
  }
  return out;
}

PhaseResult move_and_evaluate(std::vector<RobotState>& swarm, std::span<const Vec2> goals, const EnvironmentSpec& env,
                              std::vector<TargetState>& targets, const MotionParams& params, std::int64_t& clock,
                              std::int64_t budget, TraceSink* sink, const EvaluationPolicy& policy) {
  const std::size_t n = swarm.size();
  if (goals.size() != n) throw std::invalid_argument("move_and_evaluate: one goal per robot required");
  PhaseResult result;
  for (auto& robot : swarm) robot.motion = MotionState{};

  const auto any_active = [&] {
    for (const auto& t : targets) {
      if (t.active()) return true;
    }
    return false;
  };

  std::vector<Vec2> current(n);
  std::vector<Vec2> proposals(n);
  std::vector<StepPlan> plans(n);
  std::vector<bool> holds(n);
  std::vector<Vec2> stationary;
  std::vector<TraceEvent> events(n);
  std::vector<std::size_t> found_target(n);
  std::vector<double> fitness(n);

  while (result.ticks < params.max_steps && clock < budget && any_active()) {
    bool all_done = true;
    stationary.clear();
    for (std::size_t i = 0; i < n; ++i) {
      current[i] = swarm[i].position;
      holds[i] = swarm[i].stationary();
      if (holds[i]) {
        stationary.push_back(current[i]);
      } else {
        all_done = false;
      }
    }
    if (all_done) break;

    for (std::size_t i = 0; i < n; ++i) {
      if (holds[i]) {
        proposals[i] = current[i];
        continue;
      }
      plans[i] = plan_step(current[i], swarm[i].motion, goals[i], env, stationary, params);
      proposals[i] = plans[i].proposal;
    }
    const CollisionResolution resolved = resolve_collisions(proposals, current, holds, params);

    ++clock;
    ++result.ticks;
    for (std::size_t i = 0; i < n; ++i) {
      RobotState& robot = swarm[i];
      events[i] = robot.activity == Activity::handling ? TraceEvent::handling : TraceEvent::none;
      if (holds[i]) {
        fitness[i] = field_value(robot.position, targets, env.attenuation_a).value;
        continue;
      }
      if (resolved.waiting[i]) {
        events[i] = TraceEvent::waiting;
        if (++robot.motion.wait_ticks >= params.patience) {
          robot.motion.mode = MotionMode::parked;
          robot.activity = Activity::idle;
        }
      } else {
        robot.path_length += distance(robot.position, resolved.positions[i]);
        robot.position = resolved.positions[i];
        robot.motion = plans[i].next;
        robot.motion.wait_ticks = 0;
        if (robot.motion.mode == MotionMode::arrived) events[i] = TraceEvent::arrived;
        if (robot.motion.mode == MotionMode::arrived || robot.motion.mode == MotionMode::parked) {
          robot.activity = Activity::idle;
        }
      }
      const SignalReading reading = field_value(robot.position, targets, env.attenuation_a);
      fitness[i] = reading.value;
      robot.pbest = update_pbest(robot.pbest, robot.position, reading);
      if (reading.nearest_active_target && reading.nearest_distance < env.detect_epsilon) {
        const std::size_t k = *reading.nearest_active_target;
        targets[k].deactivate();
        if (policy.refresh_pbest_on_handling) {
          // The handled beacon is gone; stored fitness is re-read from the current field.
          for (auto& other : swarm) {
            other.pbest.fitness = field_value(other.pbest.position, targets, env.attenuation_a).value;
          }
        }
        robot.activity = Activity::handling;
        events[i] = TraceEvent::found;
        found_target[i] = k;
        result.found.push_back({k, i, clock, robot.position});
      }
    }
    if (sink != nullptr) {
      for (std::size_t i = 0; i < n; ++i) {
        const RobotState& robot = swarm[i];
        sink->record({clock, i, robot.position, fitness[i], robot.motion.mode, robot.activity, events[i],
                      events[i] == TraceEvent::found ? found_target[i] : 0});
      }
    }
  }
  return result;
}

}  // namespace rbso
