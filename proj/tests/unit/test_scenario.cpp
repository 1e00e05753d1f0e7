#include <string>
#include <vector>

#include <doctest.h>
#include <json.hpp>

#include "rbso/experiment.hpp"
#include "rbso/scenario.hpp"

using namespace rbso;

namespace {

const char* kSmall = R"({
  "arena": {"width": 200, "height": 150},
  "obstacles": [{"min": [50, 50], "max": [80, 90]}],
  "targets": [[10, 10], [150, 120]],
  "robots_random": {"count": 6},
  "signal": {"a": 10, "epsilon": 5},
  "bso": {"p_one": 0.4, "p_center": 0.8},
  "rbso": {"m_g": "N/3", "T_g": 5000, "m_d": 100, "m_s": 300, "step_length": 2, "d_safe": 3},
  "seed": 7
})";

std::string path_of_error(const std::string& text, std::vector<std::string> overrides = {}) {
  try {
    load_scenario(text, overrides);
  } catch (const ValidationError& e) {
    return e.path();
  }
  return {};
}

}  // namespace

TEST_SUITE("scenario") {
  TEST_CASE("a complete document is loaded with every field") {
    const Scenario s = load_scenario(kSmall);
    CHECK(s.width == 200.0);
    CHECK(s.height == 150.0);
    REQUIRE(s.obstacles.size() == 1);
    CHECK(s.obstacles[0].max_corner == Vec2{80.0, 90.0});
    CHECK(s.targets.size() == 2);
    CHECK(s.robot_count == 6);
    CHECK(s.params.grouping.max_groups == 2);
    CHECK(s.params.global_budget == 5000);
    CHECK(s.params.grouping.mean_distance_threshold == 100.0);
    CHECK(s.params.motion.max_steps == 300);
    CHECK(s.params.seed == 7);
    // The schedule horizon follows the budget unless given.
    CHECK(s.params.generation.noise_horizon == 5000);
  }

  TEST_CASE("the published scenario") {
    const Scenario s = load_scenario(emit_published_scenario());
    CHECK(s.width == 1000.0);
    CHECK(s.height == 1000.0);
    CHECK(s.robot_count == 20);
    REQUIRE(s.targets_random.has_value());
    CHECK(s.targets_random->count == 10);
    CHECK(s.params.generation.p_one == 0.4);
    CHECK(s.params.generation.p_center == 0.8);
    CHECK(s.attenuation_a == 10.0);
    CHECK(s.params.grouping.max_groups == 5);
    CHECK(s.params.global_budget == 20000);
    CHECK(s.params.grouping.mean_distance_threshold == 250.0);
    CHECK(s.params.motion.max_steps == 500);
    CHECK(s.params.motion.sample_dt == 0.1);
    REQUIRE(s.obstacles_random.has_value());
    CHECK(s.obstacles_random->count == 6);
  }

  TEST_CASE("published instances respect the layout rules") {
    const Scenario s = published_scenario();
    for (std::uint64_t seed = 1; seed <= 30; ++seed) {
      const ScenarioInstance inst = instantiate(s, seed);
      const auto& env = inst.env;
      CHECK(env.targets.size() == 10);
      REQUIRE(env.obstacles.size() == 6);
      for (std::size_t i = 0; i < env.obstacles.size(); ++i) {
        const Rectangle& r = env.obstacles[i];
        CHECK(r.width() >= 50.0);
        CHECK(r.width() <= 150.0);
        CHECK(r.height() >= 50.0);
        CHECK(r.height() <= 150.0);
        for (std::size_t j = i + 1; j < env.obstacles.size(); ++j) CHECK(r.gap_to(env.obstacles[j]) >= 100.0);
        for (const auto& t : env.targets) CHECK_FALSE(r.contains_closed(t.location));
      }
    }
  }

  TEST_CASE("instances are deterministic per seed and vary across seeds") {
    const Scenario s = published_scenario();
    const auto a = instantiate(s, 3);
    const auto b = instantiate(s, 3);
    const auto c = instantiate(s, 4);
    CHECK(a.env.targets[0].location == b.env.targets[0].location);
    CHECK(a.env.obstacles[0].min_corner == b.env.obstacles[0].min_corner);
    CHECK_FALSE(a.env.targets[0].location == c.env.targets[0].location);
    CHECK(a.params.seed == 3);
  }

  TEST_CASE("canonical text round-trips") {
    const Scenario s = load_scenario(kSmall);
    const std::string text = to_json(s);
    CHECK(to_json(load_scenario(text)) == text);
    CHECK(to_json(load_scenario(emit_published_scenario())) == emit_published_scenario());
  }

  TEST_CASE("overrides address any field by dotted path") {
    const std::vector<std::string> overrides{"rbso.T_g=1234", "signal.a=12.5", "bso.p_one=0.1", "robots_random.count=8"};
    const Scenario s = load_scenario(kSmall, overrides);
    CHECK(s.params.global_budget == 1234);
    CHECK(s.attenuation_a == 12.5);
    CHECK(s.params.generation.p_one == 0.1);
    CHECK(s.robot_count == 8);
  }

  TEST_CASE("malformed input is a parse error") {
    CHECK_THROWS_AS(load_scenario("{ not json"), ScenarioParseError);
    const std::vector<std::string> bad{"no-equals-sign"};
    CHECK_THROWS_AS(load_scenario(kSmall, bad), ScenarioParseError);
    const std::vector<std::string> empty_segment{"rbso..T_g=3"};
    CHECK_THROWS_AS(load_scenario(kSmall, empty_segment), ScenarioParseError);
  }

  TEST_CASE("validation errors name the field") {
    CHECK(path_of_error(kSmall, {"signal.a=-1"}) == "signal.a");
    CHECK(path_of_error(kSmall, {"signal.epsilon=0"}) == "signal.epsilon");
    CHECK(path_of_error(kSmall, {"bso.p_one=2"}) == "bso.p_one");
    CHECK(path_of_error(kSmall, {"rbso.m_g=1"}) == "rbso.m_g");
    CHECK(path_of_error(kSmall, {"rbso.m_s=0"}) == "rbso.m_s");
    CHECK(path_of_error(kSmall, {"rbso.d_safe=-3"}) == "rbso.d_safe");
    CHECK(path_of_error(kSmall, {"rbso.T_g=-5"}) == "rbso.T_g");
    CHECK(path_of_error(kSmall, {"arena.width=0"}) == "arena.width");
    CHECK(path_of_error(kSmall, {"rbso.bogus=1"}) == "rbso.bogus");
    CHECK(path_of_error(kSmall, {"extra=1"}) == "extra");
    CHECK(path_of_error(kSmall, {"signal.a=\"ten\""}) == "signal.a");
  }

  TEST_CASE("a target inside an obstacle is rejected") {
    CHECK(path_of_error(kSmall, {"targets=[[60,60]]"}) == "targets[0]");
  }

  TEST_CASE("random targets exclude explicit ones") {
    CHECK(path_of_error(kSmall, {"targets_random.count=3"}) == "targets_random");
  }

  TEST_CASE("explicit robot starts") {
    const Scenario s = load_scenario(kSmall, std::vector<std::string>{"robots=[[1,1],[20,20]]", "robots_random.count=2", "rbso.m_g=2"});
    CHECK(s.robot_starts.size() == 2);
    const auto inst = instantiate(s);
    CHECK(inst.env.robot_starts[1] == Vec2{20.0, 20.0});
    CHECK(path_of_error(kSmall, {"robots=[[1,1],[20,20]]", "rbso.m_g=2"}) == "robots");
  }

  TEST_CASE("files are read with path context") {
    CHECK_THROWS_AS(load_scenario_file("/nonexistent/scenario.json"), ScenarioParseError);
  }
}
