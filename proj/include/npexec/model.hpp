#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace npexec {

// All times and durations are integer nanoseconds. Interfaces that speak
// milliseconds convert at the boundary so that event ordering inside the
// simulator never depends on floating point.
using time_ns = std::int64_t;

constexpr time_ns kNsPerUs = 1'000;
constexpr time_ns kNsPerMs = 1'000'000;
constexpr time_ns kNsPerSec = 1'000'000'000;

time_ns ms_to_ns(double ms);
double ns_to_ms(time_ns t);

enum class TaskKind { Timer, Subscription };

// Lower priority value = higher priority.
enum class PriorityPolicy { Fifo, FixedPriority, RateMonotonic, Edf };

enum class ChainMode { Sequence, Sampled };

struct TaskSpec {
  int id = 0;
  TaskKind kind = TaskKind::Timer;
  time_ns wcet = 0;                    // C
  std::optional<time_ns> period;       // T; required for timers, optional
                                       // minimum inter-arrival for subscriptions
  std::optional<time_ns> deadline;     // D; defaults to the period for timers
  time_ns phase = 0;                   // first release offset, timers only
  int priority = 0;
  std::optional<int> subscribes_to;    // topic id
  std::optional<int> publishes_to;     // topic id

  bool is_timer() const { return kind == TaskKind::Timer; }
};

// Ordered task sequence along which data propagates.
//  - Sequence: timer head, every later task is a subscription activated by
//    its predecessor's publication.
//  - Sampled: all tasks periodic, communicating through last-is-best
//    registers read at job start and written at job finish.
struct Chain {
  int id = 0;
  ChainMode mode = ChainMode::Sampled;
  std::vector<int> task_ids;
};

struct TaskSet {
  std::string name;
  time_ns delta = 0;  // per-release overhead
  std::vector<TaskSpec> tasks;

  const TaskSpec* find(int task_id) const;
  std::size_t index_of(int task_id) const;  // throws if unknown
  double utilization() const;               // sum of C/T over tasks with a period
};

// Throws std::invalid_argument on any model violation: non-positive periods
// or deadlines, duplicate ids or priorities, deadline > period, negative
// wcet/phase/delta, timers without periods.
void validate(const TaskSet& ts);

// Structural checks for one chain against a task set (known ids, sequence
// topology, sampled chains all-periodic).
void validate_chain(const TaskSet& ts, const Chain& chain);

// Least common multiple of all timer periods. Throws "empty hyperperiod"
// when the set has no timer.
time_ns hyperperiod(const TaskSet& ts);

// Returns a copy with priorities 0..n-1 assigned consistently with the
// policy ordering; ties broken by ascending id. Only RateMonotonic and
// FixedPriority admit a static assignment.
TaskSet assign_priorities(const TaskSet& ts, PriorityPolicy policy);

}  // namespace npexec
