#pragma once

#include <cstddef>
#include <cstdint>
#include <string>

#include "rbso/geometry.hpp"

namespace rbso {

enum class MotionMode { go_to_goal, boundary_follow, arrived, parked };
enum class Activity { searching, handling, idle };
enum class TraceEvent { none, found, handling, arrived, waiting };

/// One robot at one tick. The clock starts at 0 on the initial placement and
/// the first motion tick is step 1.
struct StepRecord {
  std::int64_t step = 0;
  std::size_t robot = 0;
  Vec2 position;
  double fitness = 0.0;
  MotionMode mode = MotionMode::go_to_goal;
  Activity activity = Activity::searching;
  TraceEvent event = TraceEvent::none;
  std::size_t target = 0;  // meaningful for TraceEvent::found
};

class TraceSink {
 public:
  virtual ~TraceSink() = default;
  virtual void record(const StepRecord& rec) = 0;
};

const char* to_string(MotionMode mode);
const char* to_string(TraceEvent event);
/// Mode column of a trace line: "handling" for handling robots, else the motion mode.
const char* trace_mode(const StepRecord& rec);
/// Event column: "none", "found:<k>", "handling", "arrived" or "waiting".
std::string trace_event(const StepRecord& rec);

}  // namespace rbso
