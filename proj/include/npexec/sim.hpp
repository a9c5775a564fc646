#pragma once

#include <cstdint>
#include <optional>
#include <utility>
#include <vector>

#include "npexec/model.hpp"

namespace npexec {

// The five executor semantics plus an ideal reference scheduler.
//  - Default:       polling points and processing windows over a wait set.
//  - EventsFifoRO:  events-executor releaser thread feeding a FIFO events
//                   queue; the default thread executes queue-front jobs.
//  - EventsFifoRE:  events-executor timer thread releasing and executing
//                   timers ordered by timestamp (the shipped behavior).
//  - PriorityRO:    as EventsFifoRO with a priority-ordered events queue.
//  - PriorityRE:    as EventsFifoRE with a priority-ordered timer ready
//                   queue; all reached timestamps become releases before
//                   each scheduling decision.
enum class ExecutorVariant { Default, EventsFifoRO, EventsFifoRE, PriorityRO, PriorityRE };

struct ExecutorConfig {
  ExecutorVariant variant = ExecutorVariant::PriorityRO;
  PriorityPolicy policy = PriorityPolicy::Fifo;  // Fifo forced for EventsFifo*
  time_ns delta = 0;                             // per-release overhead
  bool timer_thread_elevated = true;             // RO: releases preempt execution
  double wcet_min_fraction = 1.0;                // < 1: execution drawn uniformly
                                                 //   from [frac*C, C] using the seed
  int subscription_queue_depth = 10;             // drop-oldest message queues
};

struct Job {
  int task_id = 0;
  int index = 0;             // k-th released job of its task
  time_ns nominal_ts = 0;    // timer timestamp / activation time at release
  time_ns enqueue_t = 0;     // instant it entered the ready structure (after delta)
  time_ns start_t = 0;
  time_ns finish_t = 0;
  time_ns abs_deadline = -1;  // -1: task has no deadline
  int skipped_before = 0;     // periods skipped by the update preceding this job
};

struct ScheduleTrace {
  struct Drop {
    int task_id = 0;
    time_ns at = 0;  // instant the skip was detected / message was discarded
    int count = 0;
  };
  std::vector<Job> jobs;  // in start order
  std::vector<Drop> drops;
  time_ns horizon = 0;
};

struct TaskMetrics {
  int task_id = 0;
  std::int64_t released = 0;
  std::int64_t dropped = 0;
  std::int64_t deadline_misses = 0;
  time_ns max_response = 0;
  double mean_response_ms = 0.0;
};

struct ChainMetrics {
  int chain_id = 0;
  std::optional<time_ns> max_latency;  // absent when no propagation completed
};

struct SimMetrics {
  std::vector<TaskMetrics> tasks;
  std::vector<ChainMetrics> chains;
};

// Smallest period multiple strictly beyond `now`, starting from timestamp
// `ts`; second member counts the period boundaries jumped over.
// Requires now >= ts and period > 0.
std::pair<time_ns, int> next_timestamp(time_ns ts, time_ns period, time_ns now);

// Ideal non-preemptive schedule: strictly periodic releases at phase + k*T,
// every release produces a job, the release overhead is ignored, and ties
// are broken by priority then id. This is the oracle the analytical bounds
// and the trace-equivalence checks run against.
ScheduleTrace reference_np_schedule(const TaskSet& ts, PriorityPolicy policy,
                                    time_ns horizon);

// Deterministic discrete-event simulation of one executor variant. All
// releases whose trigger lies before the horizon are processed and started
// work runs to completion, so every recorded job is complete.
ScheduleTrace simulate(const TaskSet& ts, const ExecutorConfig& cfg, time_ns horizon,
                       std::uint64_t seed);

SimMetrics compute_metrics(const ScheduleTrace& trace, const TaskSet& ts,
                           const std::vector<Chain>& chains);

// Event-driven propagation: per head job, the finish of the last chain
// task's job processing that head job's data, maximized over head jobs.
time_ns measure_sequence_latency(const ScheduleTrace& trace, const Chain& chain);

// Register-based propagation (read at start, write at finish): maximum
// reaction time over arrivals placed immediately after each head read.
time_ns measure_sampled_latency(const ScheduleTrace& trace, const Chain& chain);

// phase_max + 2 hyperperiods
time_ns default_horizon(const TaskSet& ts);

}  // namespace npexec
