#pragma once

// shared helpers for the test binaries

#include <algorithm>
#include <map>
#include <random>
#include <tuple>
#include <vector>

#include "npexec/model.hpp"
#include "npexec/sim.hpp"

namespace testsup {

using namespace npexec;

inline TaskSpec timer(int id, time_ns wcet, time_ns period,
                      std::optional<time_ns> deadline = std::nullopt,
                      time_ns phase = 0) {
  TaskSpec t;
  t.id = id;
  t.kind = TaskKind::Timer;
  t.wcet = wcet;
  t.period = period;
  t.deadline = deadline ? deadline : period;
  t.phase = phase;
  t.priority = id;
  return t;
}

inline TaskSpec subscription(int id, time_ns wcet, int topic,
                             std::optional<time_ns> deadline = std::nullopt) {
  TaskSpec t;
  t.id = id;
  t.kind = TaskKind::Subscription;
  t.wcet = wcet;
  t.subscribes_to = topic;
  t.priority = id;
  t.deadline = deadline;
  return t;
}

inline TaskSet set_of(std::vector<TaskSpec> tasks, time_ns delta = 0) {
  TaskSet ts;
  ts.name = "test";
  ts.delta = delta;
  ts.tasks = std::move(tasks);
  return ts;
}

// (task, start, finish) projection for trace equivalence checks
inline std::vector<std::tuple<int, time_ns, time_ns>> schedule_of(const ScheduleTrace& tr) {
  std::vector<std::tuple<int, time_ns, time_ns>> out;
  for (const auto& j : tr.jobs) out.emplace_back(j.task_id, j.start_t, j.finish_t);
  return out;
}

// single processor, non-preemptive: execution intervals never overlap
inline bool non_preemptive(const ScheduleTrace& tr) {
  for (std::size_t i = 1; i < tr.jobs.size(); ++i)
    if (tr.jobs[i].start_t < tr.jobs[i - 1].finish_t) return false;
  return true;
}

inline std::map<int, std::vector<Job>> jobs_by_task(const ScheduleTrace& tr) {
  std::map<int, std::vector<Job>> out;
  for (const auto& j : tr.jobs) out[j.task_id].push_back(j);
  return out;
}

// Brute-force register replay for sampled chains, independent of the
// measurement implementation: walks the whole trace once per candidate
// arrival carrying per-stage "freshest reflected arrival" register values.
inline time_ns replay_sampled_latency(const ScheduleTrace& tr, const Chain& chain) {
  auto per_task = jobs_by_task(tr);
  const auto& heads = per_task[chain.task_ids.front()];
  const std::size_t n = chain.task_ids.size();

  std::vector<const Job*> all;
  for (const auto& j : tr.jobs) all.push_back(&j);

  time_ns best = -1;
  for (const auto& head : heads) {
    const time_ns arrival_read = head.start_t;  // arrival lands just after it
    // write_time[m]: instant stage m's output first reflected the arrival
    std::vector<time_ns> write_time(n + 1, -1);
    write_time[0] = arrival_read;  // external input, visible after this read
    time_ns done = -1;
    for (const Job* j : all) {
      for (std::size_t m = 1; m <= n; ++m) {
        if (j->task_id != chain.task_ids[m - 1]) continue;
        bool sees = write_time[m - 1] >= 0 &&
                    (m == 1 ? j->start_t > write_time[m - 1]
                            : j->start_t >= write_time[m - 1]);
        if (sees && write_time[m] < 0) {
          write_time[m] = j->finish_t;
          if (m == n) done = j->finish_t;
        }
      }
      if (done >= 0) break;
    }
    if (done >= 0) best = std::max(best, done - arrival_read);
  }
  return best;  // -1: nothing completed
}

// small deterministic task-set source for property tests
struct RandomSets {
  std::mt19937_64 rng;
  explicit RandomSets(std::uint64_t seed) : rng(seed) {}

  TaskSet next(int max_tasks = 6, time_ns max_period_ms = 20) {
    int n = 2 + static_cast<int>(rng() % static_cast<std::uint64_t>(max_tasks - 1));
    std::vector<TaskSpec> tasks;
    for (int i = 0; i < n; ++i) {
      time_ns period = static_cast<time_ns>(2 + rng() % static_cast<std::uint64_t>(
                                                    max_period_ms - 1)) *
                       kNsPerMs;
      time_ns wcet = static_cast<time_ns>(1 + rng() % 3) * kNsPerMs / 2;
      tasks.push_back(timer(i, std::min(wcet, period - 1), period));
    }
    return assign_priorities(set_of(std::move(tasks)), PriorityPolicy::RateMonotonic);
  }
};

}  // namespace testsup
