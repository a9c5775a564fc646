#pragma once

#include <map>
#include <optional>
#include <vector>

#include "npexec/model.hpp"

namespace npexec {

enum class ReleaseOption { RO, RE };

struct TaskAnalysis {
  int task_id = 0;
  time_ns overhead = 0;       // accounted release overhead per job
  time_ns inflated_wcet = 0;  // wcet + overhead
  std::optional<time_ns> wcrt;            // absent: no bound certified
  std::optional<time_ns> wcrt_tightened;  // re-run with the n*delta overhead
  time_ns deadline = 0;
  bool meets_deadline = false;
};

struct ChainBound {
  int chain_id = 0;
  std::optional<time_ns> latency_bound;  // absent when a chain task is unbounded
};

struct AnalysisReport {
  std::vector<TaskAnalysis> tasks;
  bool schedulable = false;
  std::vector<ChainBound> chains;
};

// Release overhead when the timer thread both releases and executes: at
// most one release per task right before a job starts.
time_ns overhead_re(int task_count, time_ns delta);

// Release overhead with a release-only elevated releaser: releases can also
// land during execution. Finds the least t0 >= C_i + sum_j ceil(t0/T_j)*delta
// by fixed-point iteration; throws "overhead unbounded at this utilization"
// when the iteration passes the hyperperiod.
time_ns overhead_ro(const TaskSet& ts, int task_id, time_ns delta);

// Tightened overhead, valid only once schedulability has been established
// with the overhead_ro bounds on a constrained-deadline set.
time_ns overhead_tightened(int task_count, time_ns delta, bool schedulability_proven);

// Smallest t <= D_k with t >= C_k + max_{i>k} C_i + sum_{i<k} ceil(t/T_i)*C_i,
// tasks ordered by their (unique) priorities and wcets already inflated.
// nullopt when no such t exists.
std::optional<time_ns> wcrt_np_fp(const TaskSet& inflated, int task_id);

// Demand bound function: max(0, floor((t - D)/T + 1)) * C.
time_ns dbf(const TaskSpec& task, time_ns t);

// Non-preemptive EDF schedulability: max_{D_i > t} C_i + sum_i dbf_i(t) <= t
// at every step point of the demand/blocking terms up to
// min(hyperperiod, synchronous busy period).
bool edf_schedulable(const TaskSet& inflated);

// Latency bound for a chain: sum of (period + wcrt) over its tasks.
time_ns e2e_bound(const Chain& chain, const TaskSet& ts,
                  const std::map<int, time_ns>& wcrt);

// Overhead inflation, response-time bounds, optional tightening pass, and
// per-chain latency bounds, in that order. Timers-only task sets.
AnalysisReport analyze(const TaskSet& ts, PriorityPolicy policy, ReleaseOption option,
                       time_ns delta, const std::vector<Chain>& chains);

}  // namespace npexec
