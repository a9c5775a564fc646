#include "npexec/analysis.hpp"

#include <algorithm>
#include <set>
#include <stdexcept>

namespace npexec {

namespace {

time_ns ceil_div(time_ns a, time_ns b) { return (a + b - 1) / b; }

void require_timers_only(const TaskSet& ts) {
  for (const auto& t : ts.tasks)
    if (!t.is_timer())
      throw std::invalid_argument("analysis requires a timers-only task set");
}

std::vector<std::size_t> priority_order(const TaskSet& ts) {
  std::vector<std::size_t> order(ts.tasks.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return std::make_pair(ts.tasks[a].priority, ts.tasks[a].id) <
           std::make_pair(ts.tasks[b].priority, ts.tasks[b].id);
  });
  return order;
}

}  // namespace

time_ns overhead_re(int task_count, time_ns delta) {
  if (task_count < 1) throw std::invalid_argument("task count must be >= 1");
  if (delta < 0) throw std::invalid_argument("delta must be >= 0");
  return static_cast<time_ns>(task_count) * delta;
}

time_ns overhead_ro(const TaskSet& ts, int task_id, time_ns delta) {
  require_timers_only(ts);
  const TaskSpec& task = ts.tasks[ts.index_of(task_id)];
  const time_ns limit = hyperperiod(ts);
  const int n = static_cast<int>(ts.tasks.size());

  auto releases_within = [&](time_ns t) -> __int128 {
    __int128 total = 0;
    for (const auto& other : ts.tasks)
      total += static_cast<__int128>(ceil_div(t, *other.period)) * delta;
    return total;
  };

  time_ns t = task.wcet + static_cast<time_ns>(n) * delta;
  for (;;) {
    if (t > limit) throw std::runtime_error("overhead unbounded at this utilization");
    __int128 next = task.wcet + releases_within(t);
    if (next > static_cast<__int128>(limit) + 1) next = static_cast<__int128>(limit) + 1;
    if (next == t) return static_cast<time_ns>(releases_within(t));
    t = static_cast<time_ns>(next);
  }
}

time_ns overhead_tightened(int task_count, time_ns delta, bool schedulability_proven) {
  if (!schedulability_proven)
    throw std::logic_error("tightening requires prior schedulability proof");
  return overhead_re(task_count, delta);
}

std::optional<time_ns> wcrt_np_fp(const TaskSet& inflated, int task_id) {
  require_timers_only(inflated);
  std::vector<std::size_t> order = priority_order(inflated);
  std::size_t k = 0;
  while (inflated.tasks[order[k]].id != task_id) ++k;

  const TaskSpec& task = inflated.tasks[order[k]];
  const time_ns deadline = *task.deadline;

  time_ns blocking = 0;  // at most one already-running lower-priority job
  for (std::size_t i = k + 1; i < order.size(); ++i)
    blocking = std::max(blocking, inflated.tasks[order[i]].wcet);

  time_ns t = 0;
  for (;;) {
    __int128 next = static_cast<__int128>(task.wcet) + blocking;
    for (std::size_t i = 0; i < k; ++i) {
      const TaskSpec& hi = inflated.tasks[order[i]];
      next += static_cast<__int128>(ceil_div(t, *hi.period)) * hi.wcet;
    }
    if (next > deadline) return std::nullopt;
    if (next == t) return t;
    t = static_cast<time_ns>(next);
  }
}

time_ns dbf(const TaskSpec& task, time_ns t) {
  if (t < 0) throw std::invalid_argument("dbf needs t >= 0");
  if (!task.deadline || !task.period) throw std::invalid_argument("dbf needs D and T");
  if (t < *task.deadline) return 0;
  __int128 v = static_cast<__int128>((t - *task.deadline) / *task.period + 1) * task.wcet;
  return v > INT64_MAX ? INT64_MAX : static_cast<time_ns>(v);
}

bool edf_schedulable(const TaskSet& inflated) {
  require_timers_only(inflated);
  if (inflated.tasks.empty()) return true;
  if (inflated.utilization() > 1.0) return false;

  const time_ns hp = hyperperiod(inflated);

  // synchronous busy period: least t with t = max_i C_i + sum_i ceil(t/T_i)*C_i
  time_ns busy = 0;
  for (const auto& t : inflated.tasks) busy = std::max(busy, t.wcet);
  const time_ns busy_base = busy;
  while (busy <= hp) {
    __int128 next = busy_base;
    for (const auto& t : inflated.tasks)
      next += static_cast<__int128>(ceil_div(busy, *t.period)) * t.wcet;
    if (next > static_cast<__int128>(hp) + 1) next = static_cast<__int128>(hp) + 1;
    if (next == busy) break;
    busy = static_cast<time_ns>(next);
  }
  const time_ns limit = std::min(busy, hp);

  // demand and blocking change only at t = D_i + k*T_i
  std::set<time_ns> points;
  for (const auto& t : inflated.tasks)
    for (time_ns p = *t.deadline; p <= limit; p += *t.period) points.insert(p);

  for (time_ns t : points) {
    if (t <= 0) continue;
    time_ns blocking = 0;
    __int128 demand = 0;
    for (const auto& task : inflated.tasks) {
      if (*task.deadline > t) blocking = std::max(blocking, task.wcet);
      demand += dbf(task, t);
    }
    if (blocking + demand > t) return false;
  }
  return true;
}

time_ns e2e_bound(const Chain& chain, const TaskSet& ts,
                  const std::map<int, time_ns>& wcrt) {
  time_ns sum = 0;
  for (int id : chain.task_ids) {
    const TaskSpec* task = ts.find(id);
    if (!task) throw std::invalid_argument("chain references unknown task id");
    if (!task->period) throw std::invalid_argument("chain task has no period");
    auto it = wcrt.find(id);
    if (it == wcrt.end()) throw std::runtime_error("chain task unbounded");
    sum += *task->period + it->second;
  }
  return sum;
}

AnalysisReport analyze(const TaskSet& ts, PriorityPolicy policy, ReleaseOption option,
                       time_ns delta, const std::vector<Chain>& chains) {
  validate(ts);
  require_timers_only(ts);
  if (policy == PriorityPolicy::Fifo)
    throw std::invalid_argument("analysis needs a priority policy");
  const int n = static_cast<int>(ts.tasks.size());

  // step 1: account the release overhead by prolonging the wcets
  std::vector<time_ns> overhead(ts.tasks.size());
  for (std::size_t i = 0; i < ts.tasks.size(); ++i)
    overhead[i] = option == ReleaseOption::RE ? overhead_re(n, delta)
                                              : overhead_ro(ts, ts.tasks[i].id, delta);

  TaskSet base = policy == PriorityPolicy::RateMonotonic
                     ? assign_priorities(ts, PriorityPolicy::RateMonotonic)
                     : ts;
  auto inflated_with = [&](const std::vector<time_ns>& ov) {
    TaskSet out = base;
    for (std::size_t i = 0; i < out.tasks.size(); ++i) out.tasks[i].wcet += ov[i];
    return out;
  };
  TaskSet inflated = inflated_with(overhead);

  // step 2: response-time bounds
  auto bounds_for = [&](const TaskSet& infl) {
    std::vector<std::optional<time_ns>> r(infl.tasks.size());
    if (policy == PriorityPolicy::Edf) {
      if (edf_schedulable(infl))
        for (std::size_t i = 0; i < infl.tasks.size(); ++i) r[i] = *infl.tasks[i].deadline;
    } else {
      for (std::size_t i = 0; i < infl.tasks.size(); ++i)
        r[i] = wcrt_np_fp(infl, infl.tasks[i].id);
    }
    return r;
  };
  std::vector<std::optional<time_ns>> wcrt = bounds_for(inflated);

  AnalysisReport report;
  report.schedulable = true;
  for (std::size_t i = 0; i < ts.tasks.size(); ++i) {
    TaskAnalysis ta;
    ta.task_id = base.tasks[i].id;
    ta.overhead = overhead[i];
    ta.inflated_wcet = inflated.tasks[i].wcet;
    ta.wcrt = wcrt[i];
    ta.deadline = *base.tasks[i].deadline;
    ta.meets_deadline = wcrt[i].has_value() && *wcrt[i] <= ta.deadline;
    if (!ta.meets_deadline) report.schedulable = false;
    report.tasks.push_back(ta);
  }

  // step 2b: with schedulability established, the n*delta overhead is valid
  // and re-tightens the bounds used downstream
  std::map<int, time_ns> wcrt_for_chains;
  if (report.schedulable && option == ReleaseOption::RO) {
    time_ns tight = overhead_tightened(n, delta, true);
    std::vector<time_ns> tight_ov(ts.tasks.size(), tight);
    std::vector<std::optional<time_ns>> tightened = bounds_for(inflated_with(tight_ov));
    for (std::size_t i = 0; i < ts.tasks.size(); ++i) {
      report.tasks[i].wcrt_tightened = tightened[i];
      if (tightened[i]) wcrt_for_chains[report.tasks[i].task_id] = *tightened[i];
    }
  } else {
    for (const auto& ta : report.tasks)
      if (ta.wcrt) wcrt_for_chains[ta.task_id] = *ta.wcrt;
  }

  // step 3: latency bounds per chain
  for (const auto& c : chains) {
    validate_chain(ts, c);
    ChainBound cb;
    cb.chain_id = c.id;
    bool bounded = true;
    for (int id : c.task_ids) bounded = bounded && wcrt_for_chains.count(id) > 0;
    if (bounded) cb.latency_bound = e2e_bound(c, ts, wcrt_for_chains);
    report.chains.push_back(cb);
  }
  return report;
}

}  // namespace npexec
