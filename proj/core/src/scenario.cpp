#include "rbso/scenario.hpp"

#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include <fmt/format.h>
#include <json.hpp>

namespace rbso {

using nlohmann::json;

namespace {

// Typed access to one JSON object with field-path error reporting. Unknown
// keys are rejected once all expected keys have been read.
class ObjectReader {
 public:
  ObjectReader(const json& node, std::string path) : node_(node), path_(std::move(path)) {
    if (!node_.is_object()) throw ValidationError(path_.empty() ? "<root>" : path_, "expected an object");
  }

  bool has(const std::string& key) {
    seen_.insert(key);
    return node_.contains(key);
  }

  std::string path(const std::string& key) const { return path_.empty() ? key : path_ + "." + key; }

  const json& raw(const std::string& key) {
    seen_.insert(key);
    return node_.at(key);
  }

  double number(const std::string& key, double fallback) {
    if (!has(key)) return fallback;
    const json& v = node_.at(key);
    if (!v.is_number()) throw ValidationError(path(key), "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) throw ValidationError(path(key), "expected a finite number");
    return d;
  }

  std::uint64_t unsigned_integer(const std::string& key, std::uint64_t fallback) {
    if (!has(key)) return fallback;
    return as_unsigned(node_.at(key), path(key));
  }

  std::optional<std::uint64_t> optional_unsigned(const std::string& key) {
    if (!has(key)) return std::nullopt;
    return as_unsigned(node_.at(key), path(key));
  }

  void finish() const {
    for (const auto& [key, value] : node_.items()) {
      if (!seen_.contains(key)) throw ValidationError(path(key), "unknown field");
    }
  }

  static std::uint64_t as_unsigned(const json& v, const std::string& where) {
    if (v.is_number_unsigned()) return v.get<std::uint64_t>();
    if (v.is_number_integer()) {
      if (v.get<std::int64_t>() < 0) throw ValidationError(where, "expected a nonnegative integer");
      return static_cast<std::uint64_t>(v.get<std::int64_t>());
    }
    if (v.is_number_float()) {
      const double d = v.get<double>();
      if (d >= 0.0 && std::floor(d) == d && d < 1.8e19) return static_cast<std::uint64_t>(d);
    }
    throw ValidationError(where, "expected a nonnegative integer");
  }

 private:
  const json& node_;
  std::string path_;
  std::set<std::string> seen_;
};

Vec2 read_point(const json& v, const std::string& where) {
  if (!v.is_array() || v.size() != 2 || !v[0].is_number() || !v[1].is_number()) {
    throw ValidationError(where, "expected a point [x, y]");
  }
  const Vec2 p{v[0].get<double>(), v[1].get<double>()};
  if (!std::isfinite(p.x) || !std::isfinite(p.y)) throw ValidationError(where, "point coordinates must be finite");
  return p;
}

std::vector<Vec2> read_points(const json& v, const std::string& where) {
  if (!v.is_array()) throw ValidationError(where, "expected a list of points");
  std::vector<Vec2> out;
  for (std::size_t i = 0; i < v.size(); ++i) out.push_back(read_point(v[i], fmt::format("{}[{}]", where, i)));
  return out;
}

// m_g may be given as a count or as "N/k" relative to the population.
std::size_t read_max_groups(const json& v, std::size_t population, const std::string& where) {
  if (v.is_string()) {
    const std::string s = v.get<std::string>();
    if (s.size() > 2 && s[0] == 'N' && s[1] == '/') {
      try {
        const unsigned long div = std::stoul(s.substr(2));
        if (div > 0) return population / div;
      } catch (const std::exception&) {
      }
    }
    throw ValidationError(where, "expected a count or \"N/k\"");
  }
  return ObjectReader::as_unsigned(v, where);
}

void apply_override(json& doc, const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos || eq == 0) {
    throw ScenarioParseError(fmt::format("override '{}' must have the form path=value", assignment));
  }
  const std::string key = assignment.substr(0, eq);
  const std::string text = assignment.substr(eq + 1);
  std::string pointer;
  std::stringstream parts(key);
  std::string part;
  while (std::getline(parts, part, '.')) {
    if (part.empty()) throw ScenarioParseError(fmt::format("override '{}' has an empty path segment", assignment));
    pointer += "/" + part;
  }
  json value = json::parse(text, nullptr, false);
  if (value.is_discarded()) value = text;
  try {
    doc[json::json_pointer(pointer)] = std::move(value);
  } catch (const json::exception& e) {
    throw ScenarioParseError(fmt::format("override '{}': {}", assignment, e.what()));
  }
}

Scenario parse_document(const json& doc) {
  Scenario s;
  ObjectReader root(doc, "");

  if (root.has("arena")) {
    ObjectReader arena(root.raw("arena"), "arena");
    s.width = arena.number("width", s.width);
    s.height = arena.number("height", s.height);
    arena.finish();
  }
  if (!(s.width > 0.0)) throw ValidationError("arena.width", "must be positive");
  if (!(s.height > 0.0)) throw ValidationError("arena.height", "must be positive");

  if (root.has("obstacles")) {
    const json& list = root.raw("obstacles");
    if (!list.is_array()) throw ValidationError("obstacles", "expected a list");
    for (std::size_t i = 0; i < list.size(); ++i) {
      const std::string where = fmt::format("obstacles[{}]", i);
      ObjectReader o(list[i], where);
      if (!o.has("min") || !o.has("max")) throw ValidationError(where, "obstacle needs min and max corners");
      s.obstacles.push_back({read_point(o.raw("min"), where + ".min"), read_point(o.raw("max"), where + ".max")});
      o.finish();
    }
  }
  if (root.has("obstacles_random")) {
    ObjectReader o(root.raw("obstacles_random"), "obstacles_random");
    RandomObstacles r;
    r.count = o.unsigned_integer("count", 0);
    r.min_side = o.number("min_side", r.min_side);
    r.max_side = o.number("max_side", r.max_side);
    r.clearance = o.number("clearance", r.clearance);
    r.wall_clearance = o.number("wall_clearance", r.wall_clearance);
    r.seed = o.optional_unsigned("seed");
    o.finish();
    if (!(r.min_side > 0.0 && r.min_side <= r.max_side)) {
      throw ValidationError("obstacles_random.min_side", "need 0 < min_side <= max_side");
    }
    if (r.clearance < 0.0) throw ValidationError("obstacles_random.clearance", "must be nonnegative");
    if (r.wall_clearance < 0.0) throw ValidationError("obstacles_random.wall_clearance", "must be nonnegative");
    if (r.count > 0 && (2.0 * r.wall_clearance + r.max_side > s.width || 2.0 * r.wall_clearance + r.max_side > s.height)) {
      throw ValidationError("obstacles_random.max_side", "obstacles do not fit inside the arena walls");
    }
    s.obstacles_random = r;
  }

  const bool explicit_targets = root.has("targets");
  const bool random_targets = root.has("targets_random");
  if (explicit_targets && random_targets) {
    throw ValidationError("targets_random", "give either targets or targets_random, not both");
  }
  if (explicit_targets) {
    for (const Vec2& p : read_points(root.raw("targets"), "targets")) s.targets.push_back({p});
  }
  if (random_targets) {
    ObjectReader t(root.raw("targets_random"), "targets_random");
    s.targets_random = RandomTargets{t.unsigned_integer("count", 0), t.optional_unsigned("seed")};
    t.finish();
  }

  if (root.has("robots_random")) {
    ObjectReader r(root.raw("robots_random"), "robots_random");
    s.robot_count = r.unsigned_integer("count", s.robot_count);
    s.robots_seed = r.optional_unsigned("seed");
    r.finish();
  }
  if (root.has("robots")) {
    s.robot_starts = read_points(root.raw("robots"), "robots");
    if (!root.has("robots_random")) s.robot_count = s.robot_starts.size();
    if (s.robot_starts.size() != s.robot_count) {
      throw ValidationError("robots", "explicit start list length differs from robots_random.count");
    }
  }
  if (s.robot_count < 1) throw ValidationError("robots_random.count", "population must be at least 1");

  if (root.has("signal")) {
    ObjectReader sig(root.raw("signal"), "signal");
    s.attenuation_a = sig.number("a", s.attenuation_a);
    s.detect_epsilon = sig.number("epsilon", s.detect_epsilon);
    sig.finish();
  }
  if (!(s.attenuation_a > 0.0)) throw ValidationError("signal.a", "attenuation coefficient must be positive");
  if (!(s.detect_epsilon > 0.0)) throw ValidationError("signal.epsilon", "detection radius must be positive");

  SimParams& p = s.params;
  p.grouping.max_groups = std::max<std::size_t>(2, s.robot_count / 4);
  bool horizon_given = false;
  if (root.has("bso")) {
    ObjectReader b(root.raw("bso"), "bso");
    p.generation.p_one = b.number("p_one", p.generation.p_one);
    p.generation.p_center = b.number("p_center", p.generation.p_center);
    p.generation.noise_base = b.number("noise_base", p.generation.noise_base);
    if (b.has("refresh_pbest")) {
      const json& v = b.raw("refresh_pbest");
      if (!v.is_boolean()) throw ValidationError("bso.refresh_pbest", "expected true or false");
      p.evaluation.refresh_pbest_on_handling = v.get<bool>();
    }
    if (b.has("noise_horizon")) {
      p.generation.noise_horizon = static_cast<std::int64_t>(b.unsigned_integer("noise_horizon", 0));
      horizon_given = true;
    }
    b.finish();
  }
  if (!(p.generation.p_one >= 0.0 && p.generation.p_one <= 1.0)) throw ValidationError("bso.p_one", "must be in [0, 1]");
  if (!(p.generation.p_center >= 0.0 && p.generation.p_center <= 1.0)) {
    throw ValidationError("bso.p_center", "must be in [0, 1]");
  }
  if (!(p.generation.noise_base > 0.0)) throw ValidationError("bso.noise_base", "must be positive");

  if (root.has("rbso")) {
    ObjectReader r(root.raw("rbso"), "rbso");
    if (r.has("m_g")) p.grouping.max_groups = read_max_groups(r.raw("m_g"), s.robot_count, "rbso.m_g");
    p.global_budget = static_cast<std::int64_t>(r.unsigned_integer("T_g", static_cast<std::uint64_t>(p.global_budget)));
    p.grouping.mean_distance_threshold = r.number("m_d", p.grouping.mean_distance_threshold);
    p.motion.max_steps = static_cast<std::int64_t>(r.unsigned_integer("m_s", static_cast<std::uint64_t>(p.motion.max_steps)));
    p.motion.step_length = r.number("step_length", p.motion.step_length);
    p.motion.d_safe = r.number("d_safe", p.motion.d_safe);
    p.motion.sample_dt = r.number("sample_dt", p.motion.sample_dt);
    p.motion.patience = static_cast<std::int64_t>(r.unsigned_integer("patience", static_cast<std::uint64_t>(p.motion.patience)));
    r.finish();
  }
  if (p.grouping.max_groups < 2) throw ValidationError("rbso.m_g", "at least two groups are required");
  if (!(p.grouping.mean_distance_threshold > 0.0)) throw ValidationError("rbso.m_d", "must be positive");
  if (p.motion.max_steps < 1) throw ValidationError("rbso.m_s", "must be at least 1");
  if (!(p.motion.step_length > 0.0)) throw ValidationError("rbso.step_length", "must be positive");
  if (!(p.motion.d_safe > 0.0)) throw ValidationError("rbso.d_safe", "must be positive");
  if (!(p.motion.sample_dt > 0.0)) throw ValidationError("rbso.sample_dt", "must be positive");
  if (p.motion.patience < 1) throw ValidationError("rbso.patience", "must be at least 1");
  if (!horizon_given) p.generation.noise_horizon = std::max<std::int64_t>(1, p.global_budget);
  if (p.generation.noise_horizon < 1) throw ValidationError("bso.noise_horizon", "must be at least 1");

  p.seed = root.unsigned_integer("seed", p.seed);
  p.placement_seed = s.robots_seed;
  root.finish();

  // Static parts of the world can be checked before any seed is chosen.
  EnvironmentSpec probe;
  probe.width = s.width;
  probe.height = s.height;
  probe.obstacles = s.obstacles;
  probe.targets = s.targets;
  probe.attenuation_a = s.attenuation_a;
  probe.detect_epsilon = s.detect_epsilon;
  probe.population_n = s.robot_count;
  probe.robot_starts = s.robot_starts;
  validate(probe);
  return s;
}

json point_json(Vec2 p) { return json::array({p.x, p.y}); }

}  // namespace

Scenario load_scenario(std::string_view text, std::span<const std::string> overrides) {
  json doc = json::parse(text.begin(), text.end(), nullptr, false);
  if (doc.is_discarded()) throw ScenarioParseError("scenario is not valid JSON");
  for (const auto& o : overrides) apply_override(doc, o);
  return parse_document(doc);
}

Scenario load_scenario_file(const std::string& path, std::span<const std::string> overrides) {
  std::ifstream in(path);
  if (!in) throw ScenarioParseError(fmt::format("cannot open scenario file '{}'", path));
  std::stringstream buffer;
  buffer << in.rdbuf();
  try {
    return load_scenario(buffer.str(), overrides);
  } catch (const ScenarioParseError& e) {
    throw ScenarioParseError(fmt::format("{}: {}", path, e.what()));
  }
}

ScenarioInstance instantiate(const Scenario& s, std::optional<std::uint64_t> seed) {
  ScenarioInstance out;
  out.params = s.params;
  if (seed) out.params.seed = *seed;
  const std::uint64_t run_seed = out.params.seed;

  EnvironmentSpec& env = out.env;
  env.width = s.width;
  env.height = s.height;
  env.obstacles = s.obstacles;
  env.targets = s.targets;
  env.attenuation_a = s.attenuation_a;
  env.detect_epsilon = s.detect_epsilon;
  env.population_n = s.robot_count;
  env.robot_starts = s.robot_starts;

  // Random targets keep this margin from obstacles so the detection disc is reachable.
  const double target_margin = s.detect_epsilon + s.params.motion.d_safe;

  if (s.targets_random) {
    Rng rng(s.targets_random->seed.value_or(stream_seed(run_seed, SeedStream::targets)));
    for (std::size_t i = 0; i < s.targets_random->count; ++i) {
      bool placed = false;
      for (int attempt = 0; attempt < 100000 && !placed; ++attempt) {
        const Vec2 p{rng.uniform(0.0, s.width), rng.uniform(0.0, s.height)};
        placed = std::all_of(env.obstacles.begin(), env.obstacles.end(),
                             [&](const Rectangle& r) { return r.distance_to(p) >= target_margin; });
        if (placed) env.targets.push_back({p});
      }
      if (!placed) throw ValidationError("targets_random", fmt::format("could not place target {}", i));
    }
  }

  if (s.obstacles_random) {
    const RandomObstacles& spec = *s.obstacles_random;
    Rng rng(spec.seed.value_or(stream_seed(run_seed, SeedStream::obstacles)));
    for (std::size_t i = 0; i < spec.count; ++i) {
      bool placed = false;
      for (int attempt = 0; attempt < 100000 && !placed; ++attempt) {
        const double w = rng.uniform(spec.min_side, spec.max_side);
        const double h = rng.uniform(spec.min_side, spec.max_side);
        const double x = rng.uniform(spec.wall_clearance, s.width - spec.wall_clearance - w);
        const double y = rng.uniform(spec.wall_clearance, s.height - spec.wall_clearance - h);
        const Rectangle r{{x, y}, {x + w, y + h}};
        placed = std::all_of(env.obstacles.begin(), env.obstacles.end(),
                             [&](const Rectangle& o) { return o.gap_to(r) >= spec.clearance; }) &&
                 std::all_of(env.targets.begin(), env.targets.end(),
                             [&](const TargetSpec& t) { return r.distance_to(t.location) >= target_margin; });
        if (placed) env.obstacles.push_back(r);
      }
      if (!placed) throw ValidationError("obstacles_random", fmt::format("could not place obstacle {}", i));
    }
  }

  validate(env);
  validate(out.params);
  return out;
}

std::string to_json(const Scenario& s) {
  json doc;
  doc["arena"] = {{"width", s.width}, {"height", s.height}};
  json obstacles = json::array();
  for (const auto& r : s.obstacles) obstacles.push_back({{"min", point_json(r.min_corner)}, {"max", point_json(r.max_corner)}});
  doc["obstacles"] = obstacles;
  if (s.obstacles_random) {
    const auto& o = *s.obstacles_random;
    doc["obstacles_random"] = {{"count", o.count},
                               {"min_side", o.min_side},
                               {"max_side", o.max_side},
                               {"clearance", o.clearance},
                               {"wall_clearance", o.wall_clearance}};
    if (o.seed) doc["obstacles_random"]["seed"] = *o.seed;
  }
  if (s.targets_random) {
    doc["targets_random"] = {{"count", s.targets_random->count}};
    if (s.targets_random->seed) doc["targets_random"]["seed"] = *s.targets_random->seed;
  } else {
    json targets = json::array();
    for (const auto& t : s.targets) targets.push_back(point_json(t.location));
    doc["targets"] = targets;
  }
  doc["robots_random"] = {{"count", s.robot_count}};
  if (s.robots_seed) doc["robots_random"]["seed"] = *s.robots_seed;
  if (!s.robot_starts.empty()) {
    json robots = json::array();
    for (const Vec2& p : s.robot_starts) robots.push_back(point_json(p));
    doc["robots"] = robots;
  }
  doc["signal"] = {{"a", s.attenuation_a}, {"epsilon", s.detect_epsilon}};
  const SimParams& p = s.params;
  doc["bso"] = {{"p_one", p.generation.p_one},
                {"p_center", p.generation.p_center},
                {"noise_base", p.generation.noise_base},
                {"noise_horizon", p.generation.noise_horizon},
                {"refresh_pbest", p.evaluation.refresh_pbest_on_handling}};
  doc["rbso"] = {{"m_g", p.grouping.max_groups},      {"T_g", p.global_budget},
                 {"m_d", p.grouping.mean_distance_threshold}, {"m_s", p.motion.max_steps},
                 {"step_length", p.motion.step_length}, {"d_safe", p.motion.d_safe},
                 {"sample_dt", p.motion.sample_dt},   {"patience", p.motion.patience}};
  doc["seed"] = p.seed;
  return doc.dump(2) + "\n";
}

Scenario published_scenario() {
  Scenario s;
  s.width = 1000.0;
  s.height = 1000.0;
  s.obstacles_random = RandomObstacles{6, 50.0, 150.0, 100.0, 50.0, std::nullopt};
  s.targets_random = RandomTargets{10, std::nullopt};
  s.robot_count = 20;
  s.attenuation_a = 10.0;
  s.detect_epsilon = 5.0;
  SimParams& p = s.params;
  p.generation.p_one = 0.4;
  p.generation.p_center = 0.8;
  p.generation.noise_base = 50.0;
  p.generation.noise_horizon = 20000;
  p.grouping.max_groups = s.robot_count / 4;
  p.grouping.mean_distance_threshold = 250.0;
  p.global_budget = 20000;
  p.motion.max_steps = 500;
  p.motion.step_length = 2.0;
  p.motion.d_safe = 3.0;
  p.motion.sample_dt = 0.1;
  p.seed = 1;
  return s;
}

}  // namespace rbso
