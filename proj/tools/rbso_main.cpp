// rbso: run seeded multi-target search experiments, emit the built-in
// scenario, and cross-check trace files.

#include <cstdint>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <fmt/format.h>

#include "rbso/experiment.hpp"
#include "rbso/scenario.hpp"

namespace {

constexpr int kExitValidation = 2;
constexpr int kExitSeedFailure = 3;
constexpr int kExitCheckFailed = 4;

int cmd_run(const std::string& scenario, const std::string& seeds, const std::optional<std::uint64_t>& seed,
            const std::string& mode, const std::string& out, const std::string& trace,
            const std::vector<std::string>& overrides, std::size_t jobs) {
  rbso::ExperimentConfig config;
  config.scenario_path = scenario;
  config.overrides = overrides;
  config.mode = rbso::parse_search_mode(mode);
  config.trace = rbso::parse_trace_verbosity(trace);
  config.output_dir = out;
  config.jobs = jobs;
  if (seed) config.seeds.push_back(*seed);
  if (!seeds.empty()) {
    const auto more = rbso::parse_seed_list(seeds);
    config.seeds.insert(config.seeds.end(), more.begin(), more.end());
  }
  const auto summary = rbso::run_experiment(config, &std::cout);
  return summary.totals.failed_runs > 0 ? kExitSeedFailure : 0;
}

int cmd_emit(const std::string& out) {
  const std::string text = rbso::emit_published_scenario();
  if (out.empty() || out == "-") {
    std::cout << text;
    return 0;
  }
  std::ofstream file(out, std::ios::binary);
  file << text;
  file.flush();
  if (!file) {
    std::cerr << fmt::format("rbso: cannot write '{}'\n", out);
    return 1;
  }
  return 0;
}

int cmd_verify(const std::string& scenario_path, const std::vector<std::string>& overrides, std::uint64_t seed,
               const std::string& trace, const std::string& summary, bool replay, const std::string& mode,
               const std::string& verbosity) {
  const rbso::Scenario scenario = rbso::load_scenario_file(scenario_path, overrides);
  std::optional<std::filesystem::path> summary_path;
  if (!summary.empty()) summary_path = summary;
  rbso::TraceCheck check = rbso::verify_trace(scenario, seed, trace, summary_path);
  if (replay) {
    std::ostringstream fresh;
    rbso::JsonlTraceWriter writer(fresh, rbso::parse_trace_verbosity(verbosity));
    rbso::run_seed(scenario, seed, rbso::parse_search_mode(mode), &writer);
    std::ifstream in(trace, std::ios::binary);
    std::ostringstream recorded;
    recorded << in.rdbuf();
    if (recorded.str() != fresh.str()) {
      check.ok = false;
      check.problems.push_back("replayed trace differs from the recorded file");
    }
  }
  for (const auto& p : check.problems) std::cout << "problem: " << p << "\n";
  std::cout << fmt::format("{}: {} lines, {}\n", trace, check.lines, check.ok ? "consistent" : "INCONSISTENT");
  return check.ok ? 0 : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Robotic brain storm optimization: multi-target swarm search simulator"};
  app.require_subcommand(1);

  std::string scenario;
  std::string seeds;
  std::optional<std::uint64_t> seed;
  std::string mode = "rbso";
  std::string out = "results";
  std::string trace = "none";
  std::vector<std::string> overrides;
  std::size_t jobs = 0;

  auto* run = app.add_subcommand("run", "Run one or more seeded experiments");
  run->add_option("-s,--scenario", scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  run->add_option("--seeds", seeds, "Seed list, e.g. 1..30 or 1,4,9..12");
  run->add_option("--seed", seed, "Single seed");
  run->add_option("-m,--mode", mode, "Search mode: rbso or random-walk")->check(CLI::IsMember({"rbso", "random-walk"}));
  run->add_option("-o,--out", out, "Output directory");
  run->add_option("-t,--trace", trace, "Trace verbosity: none, events or full")
      ->check(CLI::IsMember({"none", "events", "full"}));
  run->add_option("--set", overrides, "Override a scenario field: dotted.path=value (repeatable)");
  run->add_option("-j,--jobs", jobs, "Worker threads (0: all cores)");

  std::string emit_out;
  auto* emit = app.add_subcommand("emit-scenario", "Print the built-in published-experiment scenario");
  emit->add_option("-o,--out", emit_out, "Write to a file instead of stdout");

  std::string trace_file;
  std::string summary_file;
  std::uint64_t verify_seed = 1;
  bool replay = false;
  std::string verbosity = "full";
  auto* verify = app.add_subcommand("verify", "Cross-check a trace file against the scenario and summary");
  verify->add_option("-s,--scenario", scenario, "Scenario JSON file")->required()->check(CLI::ExistingFile);
  verify->add_option("--seed", verify_seed, "Seed the trace was produced with")->required();
  verify->add_option("--trace", trace_file, "Trace file (JSON lines)")->required()->check(CLI::ExistingFile);
  verify->add_option("--summary", summary_file, "summary.csv from the same run");
  verify->add_option("--set", overrides, "Scenario overrides used for the run");
  verify->add_flag("--replay", replay, "Re-run the seed and require a byte-identical trace");
  verify->add_option("-m,--mode", mode, "Search mode used for the run (with --replay)");
  verify->add_option("--verbosity", verbosity, "Trace verbosity used for the run (with --replay)");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*run) {
      if (seeds.empty() && !seed) {
        std::cerr << "rbso run: at least one seed is required (--seed or --seeds)\n";
        return kExitValidation;
      }
      return cmd_run(scenario, seeds, seed, mode, out, trace, overrides, jobs);
    }
    if (*emit) return cmd_emit(emit_out);
    if (*verify) return cmd_verify(scenario, overrides, verify_seed, trace_file, summary_file, replay, mode, verbosity);
  } catch (const rbso::ValidationError& e) {
    std::cerr << "rbso: invalid scenario: " << e.what() << "\n";
    return kExitValidation;
  } catch (const rbso::ScenarioParseError& e) {
    std::cerr << "rbso: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::invalid_argument& e) {
    std::cerr << "rbso: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "rbso: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
