#include "npexec/gen.hpp"

#include <algorithm>
#include <cmath>
#include <random>
#include <stdexcept>

namespace npexec {

namespace {

// 53-bit uniform in [0,1); mt19937_64 output is specified by the standard,
// so seeded runs reproduce across platforms
double uniform01(std::mt19937_64& rng) {
  return static_cast<double>(rng() >> 11) * 0x1.0p-53;
}

std::uint64_t uniform_below(std::mt19937_64& rng, std::uint64_t n) {
  return rng() % n;
}

int draw_range(std::mt19937_64& rng, int lo, int hi) {
  return lo + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(hi - lo + 1)));
}

void check_params(const GenParams& p) {
  if (!(p.utilization > 0.0 && p.utilization <= 1.0))
    throw std::invalid_argument("utilization must be in (0, 1]");
  if (p.tasks_min < 1 || p.tasks_max < p.tasks_min)
    throw std::invalid_argument("empty task count range");
  if (p.chains_min < 0 || p.chains_max < p.chains_min)
    throw std::invalid_argument("empty chain count range");
  if (p.chain_len_min < 1 || p.chain_len_max < p.chain_len_min)
    throw std::invalid_argument("empty chain length range");
  if (p.period_weights.empty()) throw std::invalid_argument("empty period set");
}

}  // namespace

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::vector<double> uunifast_discard(int n, double total_util, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("n must be >= 1");
  if (!(total_util > 0.0 && total_util <= 1.0))
    throw std::invalid_argument("utilization must be in (0, 1]");
  std::mt19937_64 rng(seed);
  std::vector<double> u(n);
  for (;;) {
    double sum = total_util;
    for (int i = 1; i < n; ++i) {
      double next = sum * std::pow(uniform01(rng), 1.0 / static_cast<double>(n - i));
      u[i - 1] = sum - next;
      sum = next;
    }
    u[n - 1] = sum;
    bool ok = true;
    for (double v : u) ok = ok && v > 0.0 && v < 1.0;
    if (ok) return u;
  }
}

TaskSet generate_taskset(const GenParams& params) {
  check_params(params);
  std::mt19937_64 rng(params.seed);

  double weight_sum = 0.0;
  for (const auto& [p, w] : params.period_weights) weight_sum += w;

  const int n = draw_range(rng, params.tasks_min, params.tasks_max);

  TaskSet ts;
  ts.name = params.name.empty() ? "generated" : params.name;
  ts.delta = params.delta;

  for (int attempt = 0;; ++attempt) {
    ts.tasks.clear();
    std::vector<double> utils =
        uunifast_discard(n, params.utilization, mix_seed(params.seed + attempt));

    std::vector<time_ns> periods(n);
    for (int i = 0; i < n; ++i) {
      double r = uniform01(rng) * weight_sum;
      double acc = 0.0;
      periods[i] = params.period_weights.back().first;
      for (const auto& [p, w] : params.period_weights) {
        acc += w;
        if (r < acc) {
          periods[i] = p;
          break;
        }
      }
    }

    // floor each wcet; the last task absorbs the rounding slack so the set
    // utilization lands within 1e-6 below the target without exceeding it
    bool ok = true;
    double placed = 0.0;
    for (int i = 0; i < n; ++i) {
      double share = i + 1 < n ? utils[i] : params.utilization - placed;
      time_ns wcet = static_cast<time_ns>(
          std::floor(share * static_cast<double>(periods[i])));
      if (wcet <= 0 || wcet >= periods[i]) {
        ok = false;
        break;
      }
      placed += static_cast<double>(wcet) / static_cast<double>(periods[i]);
      TaskSpec t;
      t.id = i;
      t.kind = TaskKind::Timer;
      t.wcet = wcet;
      t.period = periods[i];
      t.deadline = periods[i];
      t.phase = 0;
      t.priority = i;
      ts.tasks.push_back(t);
    }
    if (ok) break;
  }

  return assign_priorities(ts, PriorityPolicy::RateMonotonic);
}

std::vector<Chain> generate_chains(const TaskSet& ts, const GenParams& params) {
  check_params(params);
  std::mt19937_64 rng(mix_seed(params.seed ^ 0x5eedc4a1u));
  const int n = static_cast<int>(ts.tasks.size());

  const int count = draw_range(rng, params.chains_min, params.chains_max);
  std::vector<Chain> chains;
  for (int c = 0; c < count; ++c) {
    int len = draw_range(rng, params.chain_len_min, params.chain_len_max);
    if (len > n) len = n;  // infeasible length clamps to the task count
    // partial Fisher-Yates draws len distinct tasks
    std::vector<int> pool(n);
    for (int i = 0; i < n; ++i) pool[i] = ts.tasks[i].id;
    Chain chain;
    chain.id = c;
    chain.mode = ChainMode::Sampled;
    for (int k = 0; k < len; ++k) {
      int pick = k + static_cast<int>(uniform_below(rng, static_cast<std::uint64_t>(n - k)));
      std::swap(pool[k], pool[pick]);
      chain.task_ids.push_back(pool[k]);
    }
    chains.push_back(std::move(chain));
  }
  return chains;
}

TaskSet casestudy_taskset(int utilization_percent) {
  time_ns camera_wcet = 0;
  switch (utilization_percent) {
    case 60:
      camera_wcet = 10 * kNsPerMs;
      break;
    case 80:
      camera_wcet = 14 * kNsPerMs;
      break;
    case 90:
      camera_wcet = 16 * kNsPerMs;
      break;
    default:
      throw std::invalid_argument("case study exists for 60, 80, and 90 percent only");
  }
  TaskSet ts;
  ts.name = "casestudy" + std::to_string(utilization_percent);
  ts.delta = ms_to_ns(0.12);
  auto add = [&](int id, time_ns wcet, time_ns period) {
    TaskSpec t;
    t.id = id;
    t.kind = TaskKind::Timer;
    t.wcet = wcet;
    t.period = period;
    t.deadline = period;
    t.phase = 0;
    t.priority = id;
    ts.tasks.push_back(t);
  };
  for (int i = 0; i < 4; ++i) add(i, camera_wcet, 84 * kNsPerMs);  // cameras
  for (int i = 4; i < 6; ++i) add(i, 10 * kNsPerMs, 200 * kNsPerMs);  // lidars
  add(6, 1 * kNsPerMs, 30 * kNsPerMs);  // imu
  return assign_priorities(ts, PriorityPolicy::RateMonotonic);
}

}  // namespace npexec
