#include "rbso/trace.hpp"

#include <fmt/format.h>

namespace rbso {

const char* to_string(MotionMode mode) {
  switch (mode) {
    case MotionMode::go_to_goal:
      return "go-to-goal";
    case MotionMode::boundary_follow:
      return "boundary-follow";
    case MotionMode::arrived:
      return "arrived";
    case MotionMode::parked:
      return "parked";
  }
  return "unknown";
}

const char* to_string(TraceEvent event) {
  switch (event) {
    case TraceEvent::none:
      return "none";
    case TraceEvent::found:
      return "found";
    case TraceEvent::handling:
      return "handling";
    case TraceEvent::arrived:
      return "arrived";
    case TraceEvent::waiting:
      return "waiting";
  }
  return "unknown";
}

const char* trace_mode(const StepRecord& rec) {
  return rec.activity == Activity::handling ? "handling" : to_string(rec.mode);
}

std::string trace_event(const StepRecord& rec) {
  if (rec.event == TraceEvent::found) return fmt::format("found:{}", rec.target);
  return to_string(rec.event);
}

}  // namespace rbso
