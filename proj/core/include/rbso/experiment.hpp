#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "rbso/engine.hpp"
#include "rbso/scenario.hpp"
#include "rbso/trace.hpp"

namespace rbso {

enum class SearchMode { rbso, random_walk };
enum class TraceVerbosity { none, events, full };

SearchMode parse_search_mode(std::string_view text);
TraceVerbosity parse_trace_verbosity(std::string_view text);
const char* to_string(SearchMode mode);
const char* to_string(TraceVerbosity verbosity);

/// "1..30", "4", "1,2,7..9". Throws std::invalid_argument on bad syntax.
std::vector<std::uint64_t> parse_seed_list(std::string_view text);

struct ExperimentConfig {
  std::string scenario_path;
  std::vector<std::string> overrides;
  std::vector<std::uint64_t> seeds;
  SearchMode mode = SearchMode::rbso;
  std::filesystem::path output_dir;
  TraceVerbosity trace = TraceVerbosity::none;
  std::size_t jobs = 0;  // 0: hardware concurrency
};

/// Throws std::invalid_argument when the config cannot run.
void validate(const ExperimentConfig& config);

/// Writes one JSON object per line:
/// {"step":..,"robot":..,"x":..,"y":..,"fitness":..,"mode":"..","event":".."}
/// `events` keeps only records whose event is not "none".
class JsonlTraceWriter : public TraceSink {
 public:
  JsonlTraceWriter(std::ostream& out, TraceVerbosity verbosity) : out_(out), verbosity_(verbosity) {}
  void record(const StepRecord& rec) override;
  std::size_t lines() const { return lines_; }

 private:
  std::ostream& out_;
  TraceVerbosity verbosity_;
  std::size_t lines_ = 0;
};

std::string format_trace_line(const StepRecord& rec);

struct SeedRun {
  std::uint64_t seed = 0;
  bool ok = false;
  std::string error;
  RunResult result;
  double wall_seconds = 0.0;
};

struct Quartiles {
  double q1 = 0.0;
  double median = 0.0;
  double q3 = 0.0;
};

/// Linear-interpolation quantiles; empty input gives nullopt.
std::optional<Quartiles> quartiles(std::vector<double> values);

struct ExperimentAggregate {
  std::size_t runs = 0;
  std::size_t failed_runs = 0;
  std::size_t all_found_runs = 0;
  double success_rate = 0.0;
  std::optional<Quartiles> all_found_step;
  std::optional<Quartiles> find_steps;
  std::optional<Quartiles> targets_found;
};

ExperimentAggregate aggregate(const std::vector<SeedRun>& runs);

struct ExperimentSummary {
  std::vector<SeedRun> runs;  // in config seed order
  ExperimentAggregate totals;
};

inline constexpr std::string_view kSummaryHeader =
    "seed,mode,status,targets_total,targets_found,all_found,all_found_step,total_steps,iterations,"
    "total_path_length,find_events,error";

/// One summary row; find_events is "target@step" entries joined by ';'.
std::string format_summary_row(const SeedRun& run, SearchMode mode);

std::filesystem::path trace_path(const std::filesystem::path& dir, SearchMode mode, std::uint64_t seed);

/// Runs the scenario once per seed (in parallel), writing
///   <out>/summary.csv  deterministic per-run metrics
///   <out>/timings.csv  wall-clock seconds per run
///   <out>/trace_<mode>_<seed>.jsonl  when tracing is enabled
/// and printing the aggregate to `log` when given. Per-seed failures are
/// recorded and do not stop the sweep.
ExperimentSummary run_experiment(const ExperimentConfig& config, std::ostream* log = nullptr);

/// Single run with an in-memory trace, used by run_experiment and replay checks.
RunResult run_seed(const Scenario& scenario, std::uint64_t seed, SearchMode mode, TraceSink* sink);

void print_aggregate(std::ostream& out, const ExperimentAggregate& totals);

/// Canonical text of the built-in published-experiment scenario.
std::string emit_published_scenario();

/// Result of cross-checking a trace file against a summary and the scenario.
struct TraceCheck {
  bool ok = true;
  std::vector<std::string> problems;
  std::size_t lines = 0;
};

/// Checks a trace file for one seed: step order, arena/obstacle/separation
/// invariants, found events within epsilon of their targets and unique per
/// target, and agreement with the summary row (finds at `events` or above,
/// total steps and path lengths with a `full` trace).
TraceCheck verify_trace(const Scenario& scenario, std::uint64_t seed, const std::filesystem::path& trace_file,
                        const std::optional<std::filesystem::path>& summary_file);

}  // namespace rbso
