#include "rbso/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <map>
#include <mutex>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <fmt/format.h>
#include <json.hpp>

namespace rbso {

SearchMode parse_search_mode(std::string_view text) {
  if (text == "rbso") return SearchMode::rbso;
  if (text == "random-walk") return SearchMode::random_walk;
  throw std::invalid_argument(fmt::format("unknown mode '{}' (expected rbso or random-walk)", text));
}

TraceVerbosity parse_trace_verbosity(std::string_view text) {
  if (text == "none") return TraceVerbosity::none;
  if (text == "events") return TraceVerbosity::events;
  if (text == "full") return TraceVerbosity::full;
  throw std::invalid_argument(fmt::format("unknown trace verbosity '{}' (expected none, events or full)", text));
}

const char* to_string(SearchMode mode) { return mode == SearchMode::rbso ? "rbso" : "random-walk"; }

const char* to_string(TraceVerbosity verbosity) {
  switch (verbosity) {
    case TraceVerbosity::none:
      return "none";
    case TraceVerbosity::events:
      return "events";
    case TraceVerbosity::full:
      return "full";
  }
  return "none";
}

namespace {

std::uint64_t parse_u64(std::string_view text) {
  if (text.empty()) throw std::invalid_argument("empty seed");
  std::uint64_t v = 0;
  for (char c : text) {
    if (c < '0' || c > '9') throw std::invalid_argument(fmt::format("invalid seed '{}'", text));
    v = v * 10 + static_cast<std::uint64_t>(c - '0');
  }
  return v;
}

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',' || c == '\n' || c == '\r') c = ';';
  }
  return s;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  std::stringstream in(s);
  while (std::getline(in, cur, sep)) out.push_back(cur);
  if (!s.empty() && s.back() == sep) out.emplace_back();
  return out;
}

}  // namespace

std::vector<std::uint64_t> parse_seed_list(std::string_view text) {
  std::vector<std::uint64_t> seeds;
  std::size_t start = 0;
  while (start <= text.size()) {
    const std::size_t comma = text.find(',', start);
    const std::string_view item = text.substr(start, comma == std::string_view::npos ? text.npos : comma - start);
    if (item.empty()) throw std::invalid_argument("empty entry in seed list");
    const std::size_t dots = item.find("..");
    if (dots == std::string_view::npos) {
      seeds.push_back(parse_u64(item));
    } else {
      const std::uint64_t lo = parse_u64(item.substr(0, dots));
      const std::uint64_t hi = parse_u64(item.substr(dots + 2));
      if (hi < lo) throw std::invalid_argument(fmt::format("descending seed range '{}'", item));
      if (hi - lo > 1000000) throw std::invalid_argument(fmt::format("seed range '{}' is too large", item));
      for (std::uint64_t s = lo; s <= hi; ++s) seeds.push_back(s);
    }
    if (comma == std::string_view::npos) break;
    start = comma + 1;
  }
  return seeds;
}

void validate(const ExperimentConfig& config) {
  if (config.seeds.empty()) throw std::invalid_argument("experiment: at least one seed is required");
  if (config.scenario_path.empty()) throw std::invalid_argument("experiment: scenario path is required");
  if (config.output_dir.empty()) throw std::invalid_argument("experiment: output directory is required");
}

std::string format_trace_line(const StepRecord& rec) {
  return fmt::format(R"({{"step":{},"robot":{},"x":{},"y":{},"fitness":{},"mode":"{}","event":"{}"}})", rec.step,
                     rec.robot, rec.position.x, rec.position.y, rec.fitness, trace_mode(rec), trace_event(rec));
}

void JsonlTraceWriter::record(const StepRecord& rec) {
  if (verbosity_ == TraceVerbosity::none) return;
  if (verbosity_ == TraceVerbosity::events && rec.event == TraceEvent::none) return;
  out_ << format_trace_line(rec) << '\n';
  ++lines_;
}

std::optional<Quartiles> quartiles(std::vector<double> values) {
  if (values.empty()) return std::nullopt;
  std::sort(values.begin(), values.end());
  const auto at = [&](double q) {
    const double pos = q * static_cast<double>(values.size() - 1);
    const auto lo = static_cast<std::size_t>(std::floor(pos));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (pos - static_cast<double>(lo)) * (values[hi] - values[lo]);
  };
  return Quartiles{at(0.25), at(0.5), at(0.75)};
}

ExperimentAggregate aggregate(const std::vector<SeedRun>& runs) {
  ExperimentAggregate a;
  a.runs = runs.size();
  std::vector<double> all_found;
  std::vector<double> finds;
  std::vector<double> counts;
  for (const auto& r : runs) {
    if (!r.ok) {
      ++a.failed_runs;
      continue;
    }
    counts.push_back(static_cast<double>(r.result.targets_found.size()));
    for (const auto& e : r.result.targets_found) finds.push_back(static_cast<double>(e.step));
    if (auto step = r.result.all_found_step()) {
      ++a.all_found_runs;
      all_found.push_back(static_cast<double>(*step));
    }
  }
  a.success_rate = a.runs == 0 ? 0.0 : static_cast<double>(a.all_found_runs) / static_cast<double>(a.runs);
  a.all_found_step = quartiles(all_found);
  a.find_steps = quartiles(finds);
  a.targets_found = quartiles(counts);
  return a;
}

std::string format_summary_row(const SeedRun& run, SearchMode mode) {
  if (!run.ok) return fmt::format("{},{},error,,,,,,,,,{}", run.seed, to_string(mode), sanitize(run.error));
  const RunResult& r = run.result;
  std::string events;
  for (const auto& e : r.targets_found) {
    if (!events.empty()) events += ';';
    events += fmt::format("{}@{}", e.target, e.step);
  }
  const auto all = r.all_found_step();
  return fmt::format("{},{},ok,{},{},{},{},{},{},{:.6f},{},", run.seed, to_string(mode), r.target_count,
                     r.targets_found.size(), r.all_found ? 1 : 0, all ? fmt::format("{}", *all) : std::string(),
                     r.total_steps, r.iterations, r.total_path_length(), events);
}

std::filesystem::path trace_path(const std::filesystem::path& dir, SearchMode mode, std::uint64_t seed) {
  return dir / fmt::format("trace_{}_{}.jsonl", to_string(mode), seed);
}

RunResult run_seed(const Scenario& scenario, std::uint64_t seed, SearchMode mode, TraceSink* sink) {
  const ScenarioInstance inst = instantiate(scenario, seed);
  return mode == SearchMode::rbso ? run(inst.env, inst.params, sink)
                                  : run_random_walk_baseline(inst.env, inst.params, sink);
}

void print_aggregate(std::ostream& out, const ExperimentAggregate& a) {
  out << fmt::format("runs: {}  failed: {}  all-found: {}  success rate: {:.3f}\n", a.runs, a.failed_runs,
                     a.all_found_runs, a.success_rate);
  const auto line = [&](const char* name, const std::optional<Quartiles>& q) {
    if (q) {
      out << fmt::format("{}: median {:.1f}  quartiles [{:.1f}, {:.1f}]\n", name, q->median, q->q1, q->q3);
    } else {
      out << fmt::format("{}: n/a\n", name);
    }
  };
  line("all-found step", a.all_found_step);
  line("find step", a.find_steps);
  line("targets found", a.targets_found);
}

ExperimentSummary run_experiment(const ExperimentConfig& config, std::ostream* log) {
  validate(config);
  const Scenario scenario = load_scenario_file(config.scenario_path, config.overrides);

  std::error_code ec;
  std::filesystem::create_directories(config.output_dir, ec);
  if (ec) {
    throw std::runtime_error(
        fmt::format("cannot create output directory '{}': {}", config.output_dir.string(), ec.message()));
  }

  ExperimentSummary summary;
  summary.runs.resize(config.seeds.size());
  std::atomic<std::size_t> next{0};
  const auto worker = [&] {
    for (std::size_t k = next++; k < config.seeds.size(); k = next++) {
      SeedRun& out = summary.runs[k];
      out.seed = config.seeds[k];
      const auto started = std::chrono::steady_clock::now();
      try {
        if (config.trace == TraceVerbosity::none) {
          out.result = run_seed(scenario, out.seed, config.mode, nullptr);
        } else {
          const auto path = trace_path(config.output_dir, config.mode, out.seed);
          std::ofstream file(path, std::ios::binary);
          if (!file) throw std::runtime_error(fmt::format("cannot write trace file '{}'", path.string()));
          JsonlTraceWriter writer(file, config.trace);
          out.result = run_seed(scenario, out.seed, config.mode, &writer);
          file.flush();
          if (!file) throw std::runtime_error(fmt::format("error writing trace file '{}'", path.string()));
        }
        out.ok = true;
      } catch (const std::exception& e) {
        out.ok = false;
        out.error = e.what();
      }
      out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    }
  };
  std::size_t jobs = config.jobs > 0 ? config.jobs : std::max(1u, std::thread::hardware_concurrency());
  jobs = std::min(jobs, config.seeds.size());
  std::vector<std::thread> pool;
  for (std::size_t j = 1; j < jobs; ++j) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  const auto write_file = [](const std::filesystem::path& path, const std::string& text) {
    std::ofstream file(path, std::ios::binary);
    file << text;
    file.flush();
    if (!file) throw std::runtime_error(fmt::format("cannot write '{}'", path.string()));
  };
  std::string rows = std::string(kSummaryHeader) + "\n";
  std::string timings = "seed,wall_seconds\n";
  for (const auto& r : summary.runs) {
    rows += format_summary_row(r, config.mode) + "\n";
    timings += fmt::format("{},{:.6f}\n", r.seed, r.wall_seconds);
  }
  write_file(config.output_dir / "summary.csv", rows);
  write_file(config.output_dir / "timings.csv", timings);

  summary.totals = aggregate(summary.runs);
  if (log != nullptr) {
    for (const auto& r : summary.runs) {
      if (!r.ok) *log << fmt::format("seed {} failed: {}\n", r.seed, r.error);
    }
    print_aggregate(*log, summary.totals);
  }
  return summary;
}

std::string emit_published_scenario() { return to_json(published_scenario()); }

namespace {

struct SummaryRow {
  std::size_t targets_found = 0;
  std::int64_t total_steps = 0;
  double total_path_length = 0.0;
  std::vector<std::pair<std::size_t, std::int64_t>> finds;
};

std::optional<SummaryRow> read_summary_row(const std::filesystem::path& file, std::uint64_t seed,
                                           std::vector<std::string>& problems) {
  std::ifstream in(file);
  if (!in) {
    problems.push_back(fmt::format("cannot open summary '{}'", file.string()));
    return std::nullopt;
  }
  std::string line;
  std::getline(in, line);
  if (line != kSummaryHeader) {
    problems.push_back("summary header does not match the expected columns");
    return std::nullopt;
  }
  while (std::getline(in, line)) {
    const auto cols = split(line, ',');
    if (cols.size() != 12 || cols[0] != std::to_string(seed)) continue;
    if (cols[2] != "ok") {
      problems.push_back(fmt::format("summary row for seed {} records a failed run", seed));
      return std::nullopt;
    }
    SummaryRow row;
    row.targets_found = std::stoul(cols[4]);
    row.total_steps = std::stoll(cols[7]);
    row.total_path_length = std::stod(cols[9]);
    if (!cols[10].empty()) {
      for (const auto& item : split(cols[10], ';')) {
        const auto at = item.find('@');
        row.finds.emplace_back(std::stoul(item.substr(0, at)), std::stoll(item.substr(at + 1)));
      }
    }
    return row;
  }
  problems.push_back(fmt::format("no summary row for seed {}", seed));
  return std::nullopt;
}

}  // namespace

TraceCheck verify_trace(const Scenario& scenario, std::uint64_t seed, const std::filesystem::path& trace_file,
                        const std::optional<std::filesystem::path>& summary_file) {
  TraceCheck check;
  auto& problems = check.problems;
  const ScenarioInstance inst = instantiate(scenario, seed);
  const EnvironmentSpec& env = inst.env;
  const std::size_t n = env.population_n;

  std::ifstream in(trace_file);
  if (!in) {
    check.ok = false;
    problems.push_back(fmt::format("cannot open trace '{}'", trace_file.string()));
    return check;
  }

  const auto targets = make_target_states(env);
  const std::uint64_t placement = inst.params.placement_seed.value_or(stream_seed(inst.params.seed, SeedStream::placement));
  std::vector<Vec2> last(n);
  {
    const auto swarm = initialize(env, inst.params.motion, placement, targets);
    for (std::size_t i = 0; i < n; ++i) last[i] = swarm[i].position;
  }
  std::vector<double> path(n, 0.0);
  std::map<std::int64_t, std::vector<std::pair<std::size_t, Vec2>>> by_step;
  std::vector<std::pair<std::size_t, std::int64_t>> finds;
  std::vector<bool> seen_target(env.targets.size(), false);
  std::int64_t prev_step = 0;
  std::string line;
  const auto problem = [&](std::string msg) {
    if (problems.size() < 50) problems.push_back(std::move(msg));
  };

  while (std::getline(in, line)) {
    ++check.lines;
    const auto rec = nlohmann::json::parse(line, nullptr, false);
    if (rec.is_discarded() || !rec.is_object()) {
      problem(fmt::format("line {}: not a JSON object", check.lines));
      continue;
    }
    const std::int64_t step = rec.value("step", std::int64_t{-1});
    const std::size_t robot = rec.value("robot", std::size_t{0});
    const Vec2 p{rec.value("x", 0.0), rec.value("y", 0.0)};
    const std::string event = rec.value("event", std::string());
    if (step < prev_step) problem(fmt::format("line {}: step {} decreases", check.lines, step));
    prev_step = std::max(prev_step, step);
    if (robot >= n) {
      problem(fmt::format("line {}: robot index {} out of range", check.lines, robot));
      continue;
    }
    if (!env.in_bounds(p)) problem(fmt::format("line {}: robot {} outside the arena", check.lines, robot));
    if (env.in_obstacle(p)) problem(fmt::format("line {}: robot {} inside an obstacle", check.lines, robot));
    if (event.rfind("found:", 0) == 0) {
      const std::size_t k = std::stoul(event.substr(6));
      if (k >= env.targets.size()) {
        problem(fmt::format("line {}: unknown target {}", check.lines, k));
      } else {
        if (seen_target[k]) problem(fmt::format("line {}: target {} found twice", check.lines, k));
        seen_target[k] = true;
        if (!(distance(p, env.targets[k].location) < env.detect_epsilon)) {
          problem(fmt::format("line {}: found event for target {} outside epsilon", check.lines, k));
        }
        finds.emplace_back(k, step);
      }
    }
    by_step[step].emplace_back(robot, p);
  }

  // A full trace has every robot at every step 1..T.
  bool full = !by_step.empty() && by_step.begin()->first == 1 &&
              by_step.rbegin()->first == static_cast<std::int64_t>(by_step.size());
  for (const auto& [step, recs] : by_step) full = full && recs.size() == n;

  if (full) {
    for (const auto& [step, recs] : by_step) {
      for (std::size_t a = 0; a < recs.size(); ++a) {
        for (std::size_t b = a + 1; b < recs.size(); ++b) {
          if (distance(recs[a].second, recs[b].second) < inst.params.motion.d_safe) {
            problem(fmt::format("step {}: robots {} and {} closer than d_safe", step, recs[a].first, recs[b].first));
          }
        }
        path[recs[a].first] += distance(last[recs[a].first], recs[a].second);
        last[recs[a].first] = recs[a].second;
      }
    }
  }

  if (summary_file) {
    if (auto row = read_summary_row(*summary_file, seed, problems)) {
      if (row->targets_found != finds.size() || row->finds != finds) {
        problem("found events in the trace differ from the summary row");
      }
      if (full) {
        if (row->total_steps != by_step.rbegin()->first) problem("total steps differ from the summary row");
        double total = 0.0;
        for (double d : path) total += d;
        if (std::abs(total - row->total_path_length) > 1e-6 * std::max(1.0, total) + 1e-6) {
          problem(fmt::format("path length {:.6f} differs from the summary row {:.6f}", total, row->total_path_length));
        }
      }
    }
  }
  check.ok = problems.empty();
  return check;
}

}  // namespace rbso
