#include <algorithm>
#include <set>
#include <vector>

#include <doctest.h>

#include "fixtures.hpp"
#include "rbso/engine.hpp"
#include "rbso/scenario.hpp"

using namespace rbso;

namespace {

// A reduced version of the published layout that runs in well under a second.
ScenarioInstance small_world(std::uint64_t seed, std::int64_t budget = 4000) {
  Scenario s = published_scenario();
  s.width = 400.0;
  s.height = 400.0;
  s.robot_count = 12;
  s.targets_random->count = 5;
  s.obstacles_random->count = 2;
  s.obstacles_random->max_side = 80.0;
  s.params.grouping.max_groups = 3;
  s.params.global_budget = budget;
  s.params.generation.noise_horizon = 4000;
  return instantiate(s, seed);
}

bool same_events(const std::vector<FoundEvent>& a, const std::vector<FoundEvent>& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].target != b[i].target || a[i].robot != b[i].robot || a[i].step != b[i].step ||
        !(a[i].position == b[i].position)) {
      return false;
    }
  }
  return true;
}

}  // namespace

TEST_SUITE("engine") {
  TEST_CASE("no targets terminates immediately") {
    const EnvironmentSpec env = testing::open_arena(100.0, {}, 4);
    const RunResult r = run(env, SimParams{});
    CHECK(r.all_found);
    CHECK(r.targets_found.empty());
    CHECK(r.total_steps == 0);
    CHECK(r.iterations == 0);
    CHECK(r.all_found_step() == 0);
  }

  TEST_CASE("a target next to the only robot is found in the first phase") {
    EnvironmentSpec env = testing::open_arena(100.0, {{50.0, 50.0}}, 1);
    env.robot_starts = {{51.0, 50.0}};
    const RunResult r = run(env, SimParams{});
    REQUIRE(r.targets_found.size() == 1);
    CHECK(r.all_found);
    CHECK(r.iterations == 1);
    CHECK(r.targets_found[0].step == 1);
    CHECK(distance(r.targets_found[0].position, {50.0, 50.0}) < env.detect_epsilon);
  }

  TEST_CASE("initial placement is valid and deterministic") {
    const EnvironmentSpec env = testing::open_arena(1000.0, {}, 20);
    const MotionParams motion;
    const auto a = initialize(env, motion, 5, {});
    const auto b = initialize(env, motion, 5, {});
    REQUIRE(a.size() == 20);
    for (std::size_t i = 0; i < a.size(); ++i) {
      CHECK(a[i].position == b[i].position);
      CHECK(env.in_bounds(a[i].position));
      CHECK(a[i].pbest.position == a[i].position);
      for (std::size_t j = i + 1; j < a.size(); ++j) CHECK(distance(a[i].position, a[j].position) >= motion.d_safe);
    }
    const auto c = initialize(env, motion, 6, {});
    CHECK_FALSE(c[0].position == a[0].position);
  }

  TEST_CASE("initial personal bests hold the starting reading") {
    EnvironmentSpec env = testing::open_arena(100.0, {{50.0, 50.0}}, 3);
    const auto targets = make_target_states(env);
    for (const auto& robot : initialize(env, MotionParams{}, 2, targets)) {
      CHECK(robot.pbest.fitness == field_value(robot.position, targets, env.attenuation_a).value);
    }
  }

  TEST_CASE("placement fails when no free space is left") {
    EnvironmentSpec env = testing::open_arena(10.0, {}, 2);
    env.obstacles.push_back({{0.0, 0.0}, {10.0, 10.0}});
    CHECK_THROWS_AS(initialize(env, MotionParams{}, 1, {}), PackingError);
    CHECK_THROWS_AS(run(env, SimParams{}), PackingError);
  }

  TEST_CASE("explicit starts closer than d_safe are rejected") {
    EnvironmentSpec env = testing::open_arena(100.0, {}, 2);
    env.robot_starts = {{10.0, 10.0}, {11.0, 10.0}};
    CHECK_THROWS_AS(initialize(env, MotionParams{}, 1, {}), PackingError);
  }

  TEST_CASE("run results are consistent") {
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const ScenarioInstance w = small_world(seed);
      const RunResult r = run(w.env, w.params);
      CHECK(r.total_steps <= w.params.global_budget);
      CHECK(r.target_count == w.env.targets.size());
      CHECK(r.targets_found.size() <= r.target_count);
      CHECK(r.all_found == (r.targets_found.size() == r.target_count));
      CHECK(r.path_lengths.size() == w.env.population_n);
      std::set<std::size_t> unique;
      for (std::size_t i = 0; i < r.targets_found.size(); ++i) {
        const FoundEvent& e = r.targets_found[i];
        CHECK(unique.insert(e.target).second);
        CHECK(distance(e.position, w.env.targets[e.target].location) < w.env.detect_epsilon);
        CHECK(e.step >= 1);
        CHECK(e.step <= r.total_steps);
        if (i > 0) CHECK(e.step >= r.targets_found[i - 1].step);
      }
      if (r.all_found) CHECK(r.total_steps == *r.all_found_step());
    }
  }

  TEST_CASE("the trace conserves found plus active targets") {
    const ScenarioInstance w = small_world(3);
    testing::RecordingSink sink;
    const RunResult r = run(w.env, w.params, &sink);
    std::size_t found = 0;
    std::int64_t last_step = 0;
    for (const auto& rec : sink.records) {
      CHECK(rec.step >= last_step);
      last_step = rec.step;
      if (rec.event == TraceEvent::found) ++found;
    }
    CHECK(found == r.targets_found.size());
    CHECK(last_step == r.total_steps);
    CHECK(sink.records.size() == static_cast<std::size_t>(r.total_steps) * w.env.population_n);
  }

  TEST_CASE("identical seeds replay identical runs") {
    const ScenarioInstance w = small_world(4);
    testing::RecordingSink a;
    testing::RecordingSink b;
    const RunResult ra = run(w.env, w.params, &a);
    const RunResult rb = run(w.env, w.params, &b);
    CHECK(same_events(ra.targets_found, rb.targets_found));
    CHECK(ra.total_steps == rb.total_steps);
    CHECK(ra.path_lengths == rb.path_lengths);
    REQUIRE(a.records.size() == b.records.size());
    bool identical = true;
    for (std::size_t i = 0; i < a.records.size(); ++i) {
      identical = identical && a.records[i].position == b.records[i].position &&
                  a.records[i].fitness == b.records[i].fitness && a.records[i].event == b.records[i].event;
    }
    CHECK(identical);
  }

  TEST_CASE("different seeds give different runs") {
    const ScenarioInstance w = small_world(4);
    SimParams other = w.params;
    other.seed = 5;
    CHECK(run(w.env, w.params).path_lengths != run(w.env, other).path_lengths);
  }

  TEST_CASE("a longer budget finds a superset of targets") {
    for (std::uint64_t seed = 1; seed <= 3; ++seed) {
      std::vector<FoundEvent> previous;
      for (std::int64_t budget : {250, 800, 1500, 3000, 6000}) {
        const ScenarioInstance w = small_world(seed, budget);
        const RunResult r = run(w.env, w.params);
        CHECK(r.targets_found.size() >= previous.size());
        for (std::size_t i = 0; i < previous.size(); ++i) {
          CHECK(r.targets_found[i].target == previous[i].target);
          CHECK(r.targets_found[i].step == previous[i].step);
        }
        previous = r.targets_found;
      }
    }
  }

  TEST_CASE("random-walk baseline is deterministic and follows the same rules") {
    const ScenarioInstance w = small_world(2);
    const RunResult a = run_random_walk_baseline(w.env, w.params);
    const RunResult b = run_random_walk_baseline(w.env, w.params);
    CHECK(same_events(a.targets_found, b.targets_found));
    CHECK(a.path_lengths == b.path_lengths);
    for (const FoundEvent& e : a.targets_found) {
      CHECK(distance(e.position, w.env.targets[e.target].location) < w.env.detect_epsilon);
    }
  }

  TEST_CASE("random walk eventually covers a small dense arena") {
    EnvironmentSpec env = testing::open_arena(60.0, {{10.0, 10.0}, {50.0, 10.0}, {30.0, 30.0}, {10.0, 50.0}, {50.0, 50.0}},
                                              4);
    SimParams params;
    params.global_budget = 20000;
    const RunResult r = run_random_walk_baseline(env, params);
    CHECK(r.all_found);
  }

  TEST_CASE("personal bests track the live field only when refreshing") {
    EnvironmentSpec env = testing::open_arena(100.0, {{50.0, 50.0}, {95.0, 5.0}}, 2);
    auto targets = make_target_states(env);
    std::vector<RobotState> swarm(2);
    swarm[0].position = {40.0, 50.0};
    swarm[1].position = {60.0, 50.0};
    for (auto& r : swarm) r.pbest = {r.position, field_value(r.position, targets, env.attenuation_a).value};
    const std::vector<Vec2> goals{{48.0, 50.0}, {70.0, 50.0}};

    SUBCASE("refresh on handling") {
      std::int64_t clock = 0;
      move_and_evaluate(swarm, goals, env, targets, MotionParams{}, clock, 1000, nullptr, EvaluationPolicy{true});
      REQUIRE_FALSE(targets[0].active());
      for (const auto& r : swarm) {
        CHECK(r.pbest.fitness == field_value(r.pbest.position, targets, env.attenuation_a).value);
      }
    }
    SUBCASE("monotone personal bests") {
      const double before = swarm[1].pbest.fitness;
      std::int64_t clock = 0;
      move_and_evaluate(swarm, goals, env, targets, MotionParams{}, clock, 1000, nullptr, EvaluationPolicy{false});
      REQUIRE_FALSE(targets[0].active());
      CHECK(swarm[1].pbest.fitness >= before);
      CHECK(swarm[1].pbest.fitness > field_value(swarm[1].pbest.position, targets, env.attenuation_a).value);
    }
  }

  TEST_CASE("invalid simulation parameters are rejected") {
    SimParams p;
    p.global_budget = -1;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);
    p = {};
    p.grouping.max_groups = 1;
    CHECK_THROWS_AS(validate(p), std::invalid_argument);
  }

  TEST_CASE("seed streams are distinct") {
    CHECK(stream_seed(1, SeedStream::targets) != stream_seed(1, SeedStream::obstacles));
    CHECK(stream_seed(1, SeedStream::placement) != stream_seed(2, SeedStream::placement));
  }
}
