// Acceptance suite: one PASS/FAIL line per criterion; exit status is the
// number of failed criteria.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include <boost/multiprecision/cpp_bin_float.hpp>
#include <fmt/format.h>

#include "rbso/assignment.hpp"
#include "rbso/engine.hpp"
#include "rbso/experiment.hpp"
#include "rbso/generation.hpp"
#include "rbso/grouping.hpp"
#include "rbso/scenario.hpp"

using namespace rbso;
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSeeds = 30;

int failures = 0;

void report(bool pass, const std::string& name, const std::string& detail) {
  std::cout << (pass ? "PASS " : "FAIL ") << name << ": " << detail << std::endl;
  if (!pass) ++failures;
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const std::size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

// P(X >= k) for X ~ Binomial(n, 1/2).
double sign_test_p(std::size_t wins, std::size_t n) {
  double p = 0.0;
  for (std::size_t k = wins; k <= n; ++k) {
    p += std::exp(std::lgamma(n + 1.0) - std::lgamma(k + 1.0) - std::lgamma(n - k + 1.0) - n * std::log(2.0));
  }
  return std::min(1.0, p);
}

// Checks every tick of a full run for the arena, obstacle and separation
// invariants, and every found event against its target.
class SafetySink : public TraceSink {
 public:
  SafetySink(const EnvironmentSpec& env, double d_safe) : env_(env), d_safe_(d_safe), tick_(env.population_n) {}

  void record(const StepRecord& rec) override {
    tick_[rec.robot] = rec.position;
    ++records;
    if (!env_.in_bounds(rec.position)) ++out_of_bounds;
    if (env_.in_obstacle(rec.position)) ++in_obstacle;
    if (rec.event == TraceEvent::found) {
      ++found_events;
      if (!(distance(rec.position, env_.targets[rec.target].location) < env_.detect_epsilon)) ++far_finds;
    }
    if (rec.robot + 1 == tick_.size()) {
      ++ticks;
      for (std::size_t i = 0; i < tick_.size(); ++i) {
        for (std::size_t j = i + 1; j < tick_.size(); ++j) {
          const double d = distance(tick_[i], tick_[j]);
          min_separation = std::min(min_separation, d);
          if (d < d_safe_) ++too_close;
        }
      }
    }
  }

  std::size_t records = 0;
  std::size_t ticks = 0;
  std::size_t out_of_bounds = 0;
  std::size_t in_obstacle = 0;
  std::size_t too_close = 0;
  std::size_t found_events = 0;
  std::size_t far_finds = 0;
  double min_separation = std::numeric_limits<double>::infinity();

 private:
  const EnvironmentSpec& env_;
  double d_safe_;
  std::vector<Vec2> tick_;
};

struct PublishedRuns {
  std::vector<RunResult> rbso;
  std::vector<RunResult> baseline;
  std::size_t unsafe_runs = 0;
  std::size_t ticks_checked = 0;
  std::size_t found_checked = 0;
  double min_separation = std::numeric_limits<double>::infinity();
  std::string first_problem;
};

PublishedRuns run_published_scenario() {
  const Scenario scenario = published_scenario();
  PublishedRuns out;
  for (std::uint64_t seed = 1; seed <= kSeeds; ++seed) {
    const ScenarioInstance inst = instantiate(scenario, seed);
    SafetySink sink(inst.env, inst.params.motion.d_safe);
    out.rbso.push_back(run(inst.env, inst.params, &sink));
    out.baseline.push_back(run_random_walk_baseline(inst.env, inst.params));
    const bool bad = sink.out_of_bounds + sink.in_obstacle + sink.too_close + sink.far_finds > 0 ||
                     sink.records != sink.ticks * inst.env.population_n ||
                     sink.found_events != out.rbso.back().targets_found.size();
    if (bad) {
      ++out.unsafe_runs;
      if (out.first_problem.empty()) {
        out.first_problem = fmt::format(" (seed {}: {} out of bounds, {} in obstacles, {} too close, {} far finds)",
                                        seed, sink.out_of_bounds, sink.in_obstacle, sink.too_close, sink.far_finds);
      }
    }
    out.ticks_checked += sink.ticks;
    out.found_checked += sink.found_events;
    out.min_separation = std::min(out.min_separation, sink.min_separation);
  }
  return out;
}

void published_reproduction(const PublishedRuns& runs) {
  std::size_t all_found = 0;
  std::vector<double> times;
  for (const RunResult& r : runs.rbso) {
    const auto step = r.all_found_step();
    if (step && *step <= 20000) ++all_found;
    // Runs that miss a target count as never finishing.
    times.push_back(step ? static_cast<double>(*step) : std::numeric_limits<double>::infinity());
  }
  const double rate = static_cast<double>(all_found) / static_cast<double>(runs.rbso.size());
  const double med = median(times);
  report(rate >= 0.8 && med <= 12000.0, "published-scenario reproduction",
         fmt::format("{}/{} seeds found all 10 targets within 20000 ticks (rate {:.3f}, need >= 0.800); "
                     "median all-found tick {} (need <= 12000)",
                     all_found, runs.rbso.size(), rate, med, 12000));
}

void baseline_dominance(const PublishedRuns& runs) {
  std::vector<double> ours;
  std::vector<double> theirs;
  std::size_t wins = 0;
  std::size_t losses = 0;
  for (std::size_t i = 0; i < runs.rbso.size(); ++i) {
    const auto a = runs.rbso[i].found_by(8000);
    const auto b = runs.baseline[i].found_by(8000);
    ours.push_back(static_cast<double>(a));
    theirs.push_back(static_cast<double>(b));
    wins += a > b ? 1 : 0;
    losses += a < b ? 1 : 0;
  }
  const double p = sign_test_p(wins, wins + losses);
  const double mo = median(ours);
  const double mt = median(theirs);
  report(mo > mt && p < 0.05, "baseline dominance",
         fmt::format("median targets by tick 8000: rbso {} vs random walk {}; sign test {} wins, {} losses, "
                     "{} ties, one-sided p = {:.3g} (need < 0.05)",
                     mo, mt, wins, losses, runs.rbso.size() - wins - losses, p));
}

void assignment_oracle() {
  std::mt19937_64 gen(20240601);
  std::uniform_real_distribution<double> u(0.0, 1000.0);
  std::size_t checked = 0;
  std::size_t mismatches = 0;
  for (std::size_t n = 2; n <= 7; ++n) {
    for (int trial = 0; trial < 500; ++trial) {
      CostMatrix c(n, n);
      for (std::size_t i = 0; i < n; ++i) {
        for (std::size_t j = 0; j < n; ++j) c(i, j) = u(gen);
      }
      ++checked;
      if (solve_assignment(c).total_cost != brute_force_assignment(c).total_cost) ++mismatches;
    }
  }
  report(mismatches == 0, "assignment oracle",
         fmt::format("{} random matrices, n = 2..7, {} total-cost mismatches against exhaustive search (tolerance 0)",
                     checked, mismatches));
}

void signal_formula() {
  using Big = boost::multiprecision::cpp_bin_float_50;
  std::mt19937_64 gen(1001);
  std::uniform_real_distribution<double> dd(0.0, 2000.0);
  std::uniform_real_distribution<double> da(2.0, 100.0);
  const Big pi = boost::math::constants::pi<Big>();
  double worst = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double d = dd(gen);
    const double a = da(gen);
    const Big ba(a);
    const Big ref = exp(-Big(d) / (ba * ba)) / (ba * sqrt(pi));
    const Big rel = abs((Big(per_target_signal(d, a)) - ref) / ref);
    worst = std::max(worst, static_cast<double>(rel));
  }
  report(worst < 1e-12, "signal formula",
         fmt::format("1000 random (d, a) pairs, d in [0, 2000], a in [2, 100]: worst relative error {:.3g} "
                     "against 50-digit evaluation (need < 1e-12)",
                     worst));
}

void grouping_invariants() {
  GroupingParams params;  // m_g 5, m_d 250
  std::size_t bad_partition = 0;
  std::size_t bad_count = 0;
  std::size_t nondeterministic = 0;
  std::size_t fewest = std::numeric_limits<std::size_t>::max();
  std::size_t most = 0;
  for (std::uint64_t trial = 0; trial < 1000; ++trial) {
    const std::size_t n = 2 + trial % 39;
    const auto draw = [&] {
      std::mt19937_64 gen(mix_seed(trial, 77));
      std::uniform_real_distribution<double> u(0.0, 1000.0);
      std::vector<Vec2> pts(n);
      for (auto& p : pts) p = {u(gen), u(gen)};
      return pts;
    };
    const auto pts = draw();
    const auto groups = diana_split(pts, params);
    std::vector<int> seen(n, 0);
    bool partition = true;
    for (const Group& g : groups) {
      partition = partition && !g.empty();
      for (std::size_t i : g) {
        if (i < n) {
          ++seen[i];
        } else {
          partition = false;
        }
      }
    }
    partition = partition && std::all_of(seen.begin(), seen.end(), [](int c) { return c == 1; });
    bad_partition += partition ? 0 : 1;
    bad_count += groups.size() >= 2 && groups.size() <= params.max_groups ? 0 : 1;
    nondeterministic += diana_split(draw(), params) == groups ? 0 : 1;
    fewest = std::min(fewest, groups.size());
    most = std::max(most, groups.size());
  }
  report(bad_partition + bad_count + nondeterministic == 0, "grouping invariants",
         fmt::format("1000 point sets, N = 2..40, m_g = {}: {} non-partitions, {} group counts outside [2, m_g] "
                     "(observed {}..{}), {} non-deterministic",
                     params.max_groups, bad_partition, bad_count, fewest, most, nondeterministic));
}

void safety_invariants(const PublishedRuns& runs) {
  report(runs.unsafe_runs == 0, "safety invariants",
         fmt::format("{} full published-scenario runs, {} ticks and {} found events checked: {} runs with violations{}; "
                     "minimum separation {:.4f} (d_safe 3)",
                     runs.rbso.size(), runs.ticks_checked, runs.found_checked, runs.unsafe_runs, runs.first_problem,
                     runs.min_separation));
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void determinism() {
  const fs::path root = fs::temp_directory_path() / fmt::format("rbso_acceptance_{}", std::random_device{}());
  fs::create_directories(root);
  const fs::path scenario = root / "published.json";
  std::ofstream(scenario, std::ios::binary) << emit_published_scenario();
  std::size_t compared = 0;
  std::size_t differing = 0;
  std::size_t bytes = 0;
  for (const auto mode : {SearchMode::rbso, SearchMode::random_walk}) {
    std::vector<fs::path> dirs{root / "first", root / "second"};
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      ExperimentConfig c;
      c.scenario_path = scenario.string();
      c.seeds = {1, 2, 3};
      c.mode = mode;
      c.output_dir = dirs[k];
      c.trace = TraceVerbosity::full;
      c.jobs = k == 0 ? 3 : 1;
      run_experiment(c);
    }
    for (std::uint64_t seed : {1, 2, 3}) {
      const std::string a = slurp(trace_path(dirs[0], mode, seed));
      const std::string b = slurp(trace_path(dirs[1], mode, seed));
      ++compared;
      bytes += a.size();
      differing += a == b && !a.empty() ? 0 : 1;
    }
    ++compared;
    differing += slurp(dirs[0] / "summary.csv") == slurp(dirs[1] / "summary.csv") ? 0 : 1;
  }
  std::error_code ec;
  fs::remove_all(root, ec);
  report(differing == 0, "determinism",
         fmt::format("{} trace and summary files from repeated identical runs ({} trace bytes): {} differ", compared,
                     bytes, differing));
}

void generation_statistics() {
  EnvironmentSpec env;
  env.width = 1000.0;
  env.height = 1000.0;
  const Scenario published = published_scenario();
  const GenerationParams params = published.params.generation;
  GroupingResult grouping{{{0, 1, 2, 3}, {4, 5, 6, 7}, {8, 9, 10, 11}, {12, 13, 14, 15}, {16, 17, 18, 19}},
                          {0, 4, 8, 12, 16}};
  std::vector<PersonalBest> pbests(20);
  for (std::size_t i = 0; i < pbests.size(); ++i) pbests[i] = {{50.0 * i, 500.0}, 0.0};
  Rng rng(424242);
  std::size_t draws = 0;
  std::size_t one = 0;
  std::size_t center = 0;
  while (draws < 100000) {
    for (const auto& b : generate_positions(grouping, pbests, params, 0, env, rng).branches) {
      ++draws;
      one += b.one_group ? 1 : 0;
      center += b.from_center ? 1 : 0;
    }
  }
  const double f_one = static_cast<double>(one) / static_cast<double>(draws);
  const double f_center = static_cast<double>(center) / static_cast<double>(draws);
  report(std::abs(f_one - 0.4) <= 0.01 && std::abs(f_center - 0.8) <= 0.01, "generation branch statistics",
         fmt::format("{} draws: one-cluster frequency {:.4f} (need 0.4 +/- 0.01), center frequency {:.4f} "
                     "(need 0.8 +/- 0.01)",
                     draws, f_one, f_center));
}

}  // namespace

int main() {
  const PublishedRuns runs = run_published_scenario();
  published_reproduction(runs);
  baseline_dominance(runs);
  assignment_oracle();
  signal_formula();
  grouping_invariants();
  safety_invariants(runs);
  determinism();
  generation_statistics();
  std::cout << (failures == 0 ? "all acceptance criteria passed" : fmt::format("{} criteria failed", failures))
            << std::endl;
  return failures;
}
