#include "npexec/model.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <stdexcept>

namespace npexec {

time_ns ms_to_ns(double ms) {
  return static_cast<time_ns>(std::llround(ms * static_cast<double>(kNsPerMs)));
}

double ns_to_ms(time_ns t) {
  return static_cast<double>(t) / static_cast<double>(kNsPerMs);
}

const TaskSpec* TaskSet::find(int task_id) const {
  for (const auto& t : tasks) {
    if (t.id == task_id) return &t;
  }
  return nullptr;
}

std::size_t TaskSet::index_of(int task_id) const {
  for (std::size_t i = 0; i < tasks.size(); ++i) {
    if (tasks[i].id == task_id) return i;
  }
  throw std::invalid_argument("unknown task id " + std::to_string(task_id));
}

double TaskSet::utilization() const {
  double u = 0.0;
  for (const auto& t : tasks) {
    if (t.period) u += static_cast<double>(t.wcet) / static_cast<double>(*t.period);
  }
  return u;
}

void validate(const TaskSet& ts) {
  if (ts.delta < 0) throw std::invalid_argument("delta must be >= 0");
  std::set<int> ids;
  std::set<int> prios;
  for (const auto& t : ts.tasks) {
    if (!ids.insert(t.id).second)
      throw std::invalid_argument("duplicate task id " + std::to_string(t.id));
    if (!prios.insert(t.priority).second)
      throw std::invalid_argument("duplicate priority " + std::to_string(t.priority));
    if (t.wcet < 0) throw std::invalid_argument("wcet must be >= 0");
    if (t.phase < 0) throw std::invalid_argument("phase must be >= 0");
    if (t.is_timer() && !t.period)
      throw std::invalid_argument("timer task " + std::to_string(t.id) + " has no period");
    if (t.period && *t.period <= 0)
      throw std::invalid_argument("period must be > 0");
    if (t.deadline && *t.deadline <= 0)
      throw std::invalid_argument("deadline must be > 0");
    if (t.is_timer() && !t.deadline)
      throw std::invalid_argument("timer task " + std::to_string(t.id) + " has no deadline");
    // the whole artifact assumes constrained deadlines
    if (t.period && t.deadline && *t.deadline > *t.period)
      throw std::invalid_argument("task " + std::to_string(t.id) +
                                  " has deadline > period (constrained deadlines required)");
    if (!t.is_timer() && t.phase != 0)
      throw std::invalid_argument("subscription task " + std::to_string(t.id) +
                                  " must not have a phase");
    if (!t.is_timer() && !t.subscribes_to)
      throw std::invalid_argument("subscription task " + std::to_string(t.id) +
                                  " subscribes to no topic");
  }
}

void validate_chain(const TaskSet& ts, const Chain& chain) {
  if (chain.task_ids.empty()) throw std::invalid_argument("chain has no tasks");
  for (int id : chain.task_ids) {
    if (!ts.find(id))
      throw std::invalid_argument("chain " + std::to_string(chain.id) +
                                  " references unknown task id " + std::to_string(id));
  }
  if (chain.mode == ChainMode::Sampled) {
    for (int id : chain.task_ids) {
      if (!ts.find(id)->is_timer())
        throw std::invalid_argument("sampled chain " + std::to_string(chain.id) +
                                    " contains non-timer task " + std::to_string(id));
    }
    return;
  }
  // sequence mode: timer head, each later task subscribes to its predecessor
  const TaskSpec* head = ts.find(chain.task_ids.front());
  if (!head->is_timer())
    throw std::invalid_argument("sequence chain " + std::to_string(chain.id) +
                                " head is not a timer");
  for (std::size_t i = 1; i < chain.task_ids.size(); ++i) {
    const TaskSpec* prev = ts.find(chain.task_ids[i - 1]);
    const TaskSpec* cur = ts.find(chain.task_ids[i]);
    if (cur->is_timer())
      throw std::invalid_argument("sequence chain " + std::to_string(chain.id) +
                                  " has timer in tail position");
    if (!prev->publishes_to || !cur->subscribes_to ||
        *prev->publishes_to != *cur->subscribes_to)
      throw std::invalid_argument("sequence chain " + std::to_string(chain.id) +
                                  " is not topic-connected at task " + std::to_string(cur->id));
  }
}

time_ns hyperperiod(const TaskSet& ts) {
  time_ns lcm = 0;
  for (const auto& t : ts.tasks) {
    if (!t.is_timer()) continue;
    time_ns p = *t.period;
    if (lcm == 0) {
      lcm = p;
      continue;
    }
    time_ns g = std::gcd(lcm, p);
    __int128 next = static_cast<__int128>(lcm) / g * p;
    if (next > static_cast<__int128>(INT64_MAX))
      throw std::overflow_error("hyperperiod overflows 64-bit nanoseconds");
    lcm = static_cast<time_ns>(next);
  }
  if (lcm == 0) throw std::invalid_argument("empty hyperperiod");
  return lcm;
}

TaskSet assign_priorities(const TaskSet& ts, PriorityPolicy policy) {
  if (policy != PriorityPolicy::RateMonotonic && policy != PriorityPolicy::FixedPriority)
    throw std::invalid_argument("no static priority assignment exists for this policy");

  std::vector<std::size_t> order(ts.tasks.size());
  std::iota(order.begin(), order.end(), 0);
  auto key_rm = [&](std::size_t i) {
    const TaskSpec& t = ts.tasks[i];
    // timers ordered by (period, id); subscriptions after all timers, by id
    return std::make_tuple(t.period ? 0 : 1, t.period.value_or(0), t.id);
  };
  auto key_fp = [&](std::size_t i) {
    const TaskSpec& t = ts.tasks[i];
    return std::make_tuple(0, static_cast<time_ns>(t.priority), t.id);
  };
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return policy == PriorityPolicy::RateMonotonic ? key_rm(a) < key_rm(b)
                                                   : key_fp(a) < key_fp(b);
  });

  TaskSet out = ts;
  int prio = 0;
  for (std::size_t idx : order) out.tasks[idx].priority = prio++;
  return out;
}

}  // namespace npexec
