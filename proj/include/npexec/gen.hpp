#pragma once

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "npexec/model.hpp"

namespace npexec {

struct GenParams {
  double utilization = 0.6;  // target total utilization, never exceeded
  int tasks_min = 10;
  int tasks_max = 200;
  int chains_min = 5;
  int chains_max = 60;
  int chain_len_min = 2;
  int chain_len_max = 15;
  // automotive period set with its published shares; renormalized over
  // whatever subset is configured
  std::vector<std::pair<time_ns, double>> period_weights = {
      {1 * kNsPerMs, 0.03},   {2 * kNsPerMs, 0.02},  {5 * kNsPerMs, 0.02},
      {10 * kNsPerMs, 0.25},  {20 * kNsPerMs, 0.25}, {50 * kNsPerMs, 0.03},
      {100 * kNsPerMs, 0.20}, {200 * kNsPerMs, 0.01}, {1000 * kNsPerMs, 0.04}};
  std::uint64_t seed = 0;
  time_ns delta = 0;
  std::string name;
};

// n per-task utilizations summing to the target, each in (0,1); vectors
// containing a degenerate value are redrawn.
std::vector<double> uunifast_discard(int n, double total_util, std::uint64_t seed);

// Periodic implicit-deadline task set: count drawn from the range, periods
// from the weighted set, wcets from a UUniFast split of the target
// utilization, RM priorities assigned.
TaskSet generate_taskset(const GenParams& params);

// Sampled-mode chains over distinct tasks; count and lengths drawn
// uniformly from the configured ranges.
std::vector<Chain> generate_chains(const TaskSet& ts, const GenParams& params);

// The built-in seven-task sensor set (four cameras, two LiDARs, one IMU) at
// 60, 80, or 90 percent utilization.
TaskSet casestudy_taskset(int utilization_percent);

// splitmix64, used to derive independent seeds for batch experiments
std::uint64_t mix_seed(std::uint64_t x);

}  // namespace npexec
