#include "npexec/sim.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <deque>
#include <limits>
#include <map>
#include <queue>
#include <random>
#include <stdexcept>
#include <tuple>

namespace npexec {

namespace {

constexpr time_ns kNoTime = std::numeric_limits<time_ns>::max();

// Static queue-ordering priority per task. FixedPriority uses the declared
// priorities; RateMonotonic ranks timers by (period, id) and subscriptions
// inherit the highest (numerically lowest) priority among their upstream
// publishers, following topics transitively back to the timers.
std::vector<std::int64_t> effective_priorities(const TaskSet& ts, PriorityPolicy policy) {
  const std::size_t n = ts.tasks.size();
  std::vector<std::int64_t> eff(n, 0);
  if (policy == PriorityPolicy::Fifo || policy == PriorityPolicy::Edf) return eff;
  if (policy == PriorityPolicy::FixedPriority) {
    for (std::size_t i = 0; i < n; ++i) eff[i] = ts.tasks[i].priority;
    return eff;
  }

  // RateMonotonic
  std::vector<std::size_t> timer_order;
  for (std::size_t i = 0; i < n; ++i)
    if (ts.tasks[i].is_timer()) timer_order.push_back(i);
  std::sort(timer_order.begin(), timer_order.end(), [&](std::size_t a, std::size_t b) {
    return std::make_pair(*ts.tasks[a].period, ts.tasks[a].id) <
           std::make_pair(*ts.tasks[b].period, ts.tasks[b].id);
  });
  std::fill(eff.begin(), eff.end(), std::numeric_limits<std::int64_t>::max() / 2);
  std::int64_t rank = 0;
  for (std::size_t idx : timer_order) eff[idx] = rank++;

  // propagate to subscriptions along topics
  std::vector<int> state(n, 0);  // 0 unvisited, 1 in progress, 2 done
  auto resolve = [&](auto&& self, std::size_t i) -> std::int64_t {
    if (ts.tasks[i].is_timer() || state[i] == 2) return eff[i];
    if (state[i] == 1) throw std::invalid_argument("subscription activation cycle");
    state[i] = 1;
    std::int64_t best = std::numeric_limits<std::int64_t>::max() / 2;
    for (std::size_t j = 0; j < n; ++j) {
      if (ts.tasks[j].publishes_to && ts.tasks[i].subscribes_to &&
          *ts.tasks[j].publishes_to == *ts.tasks[i].subscribes_to)
        best = std::min(best, self(self, j));
    }
    eff[i] = best;
    state[i] = 2;
    return best;
  };
  for (std::size_t i = 0; i < n; ++i) resolve(resolve, i);
  return eff;
}

struct ReadyJob {
  std::size_t task = 0;
  int index = 0;
  time_ns nominal = 0;
  time_ns enqueue = 0;
  time_ns abs_deadline = -1;
  int skipped_before = 0;
  // ordering key: {policy key, priority, id, nominal, enqueue seq}
  std::array<std::int64_t, 5> key{};

  bool operator>(const ReadyJob& o) const { return key > o.key; }
};

using ReadyQueue =
    std::priority_queue<ReadyJob, std::vector<ReadyJob>, std::greater<ReadyJob>>;

struct TimerHeapEnt {
  time_ns ts;
  int prio;
  int id;
  std::size_t idx;
  bool operator>(const TimerHeapEnt& o) const {
    return std::tie(ts, prio, id) > std::tie(o.ts, o.prio, o.id);
  }
};

class SimEngine {
 public:
  SimEngine(const TaskSet& ts, const ExecutorConfig& cfg, time_ns horizon,
            std::uint64_t seed)
      : ts_(ts), cfg_(cfg), horizon_(horizon), rng_(seed) {
    const std::size_t n = ts_.tasks.size();
    eff_ = effective_priorities(ts_, cfg_.policy);
    timer_ts_.assign(n, 0);
    pending_skip_.assign(n, 0);
    next_index_.assign(n, 0);
    sub_msgs_.assign(n, {});
    for (std::size_t i = 0; i < n; ++i) {
      const TaskSpec& t = ts_.tasks[i];
      if (t.is_timer()) {
        timer_ts_[i] = t.phase;
        if (t.phase < horizon_) push_timer(i);
      }
      for (std::size_t j = 0; j < n; ++j) {
        if (t.publishes_to && ts_.tasks[j].subscribes_to &&
            *t.publishes_to == *ts_.tasks[j].subscribes_to)
          subscribers_[i].push_back(j);
      }
    }
    for (auto& [k, v] : subscribers_)
      std::sort(v.begin(), v.end(),
                [&](std::size_t a, std::size_t b) { return ts_.tasks[a].id < ts_.tasks[b].id; });
    trace_.horizon = horizon_;
  }

  ScheduleTrace run() {
    switch (cfg_.variant) {
      case ExecutorVariant::Default:
        run_default();
        break;
      case ExecutorVariant::EventsFifoRO:
      case ExecutorVariant::PriorityRO:
        run_ro();
        break;
      case ExecutorVariant::EventsFifoRE:
      case ExecutorVariant::PriorityRE:
        run_re();
        break;
    }
    return std::move(trace_);
  }

 private:
  const TaskSet& ts_;
  ExecutorConfig cfg_;
  time_ns horizon_;
  std::mt19937_64 rng_;
  std::vector<std::int64_t> eff_;

  std::vector<time_ns> timer_ts_;
  std::vector<int> pending_skip_;
  std::vector<int> next_index_;
  std::vector<std::deque<time_ns>> sub_msgs_;  // pending activation times per sub
  std::map<std::size_t, std::vector<std::size_t>> subscribers_;

  std::priority_queue<TimerHeapEnt, std::vector<TimerHeapEnt>, std::greater<TimerHeapEnt>>
      timer_heap_;
  std::uint64_t seq_ = 0;
  ScheduleTrace trace_;

  bool fifo_order() const {
    return cfg_.variant == ExecutorVariant::EventsFifoRO ||
           cfg_.variant == ExecutorVariant::EventsFifoRE;
  }

  void push_timer(std::size_t idx) {
    timer_heap_.push({timer_ts_[idx], ts_.tasks[idx].priority, ts_.tasks[idx].id, idx});
  }

  // earliest timer with a live timestamp (below the horizon); lazily skips
  // entries invalidated by timestamp updates
  std::optional<TimerHeapEnt> peek_timer() {
    while (!timer_heap_.empty()) {
      TimerHeapEnt e = timer_heap_.top();
      if (e.ts != timer_ts_[e.idx] || e.ts >= horizon_) {
        timer_heap_.pop();
        continue;
      }
      return e;
    }
    return std::nullopt;
  }

  time_ns draw_exec(std::size_t idx) {
    time_ns c = ts_.tasks[idx].wcet;
    if (cfg_.wcet_min_fraction >= 1.0 || c == 0) return c;
    time_ns lo = static_cast<time_ns>(
        std::ceil(cfg_.wcet_min_fraction * static_cast<double>(c)));
    lo = std::clamp<time_ns>(lo, 0, c);
    return lo + static_cast<time_ns>(rng_() % static_cast<std::uint64_t>(c - lo + 1));
  }

  int counted_skips(time_ns nominal, time_ns period, int raw) const {
    if (raw <= 0) return 0;
    time_ns span = horizon_ - nominal;  // boundaries nominal + m*T with m*T < span
    if (span <= period) return 0;
    time_ns m = (span - 1) / period;
    return static_cast<int>(std::min<time_ns>(raw, m));
  }

  // Advance a timer's timestamp relative to `now` and account skipped
  // periods; boundaries at or beyond the horizon are not counted as drops.
  void advance_timestamp(std::size_t idx, time_ns now, time_ns drop_at) {
    time_ns old = timer_ts_[idx];
    auto [nts, skipped] = next_timestamp(old, *ts_.tasks[idx].period, now);
    timer_ts_[idx] = nts;
    pending_skip_[idx] = skipped;
    int counted = counted_skips(old, *ts_.tasks[idx].period, skipped);
    if (counted > 0) trace_.drops.push_back({ts_.tasks[idx].id, drop_at, counted});
    if (nts < horizon_) push_timer(idx);
  }

  std::int64_t policy_key(std::size_t idx, time_ns abs_deadline) const {
    if (cfg_.policy == PriorityPolicy::Edf) return abs_deadline;
    return eff_[idx];
  }

  ReadyJob make_job(std::size_t idx, time_ns nominal, time_ns enqueue, int skipped) {
    ReadyJob j;
    j.task = idx;
    j.index = next_index_[idx]++;
    j.nominal = nominal;
    j.enqueue = enqueue;
    j.skipped_before = skipped;
    const TaskSpec& t = ts_.tasks[idx];
    j.abs_deadline = t.deadline ? nominal + *t.deadline : -1;
    j.key = {policy_key(idx, j.abs_deadline), static_cast<std::int64_t>(t.priority),
             static_cast<std::int64_t>(t.id), nominal, static_cast<std::int64_t>(seq_++)};
    return j;
  }

  void record(const ReadyJob& j, time_ns start, time_ns finish) {
    assert(trace_.jobs.empty() || trace_.jobs.back().start_t <= start);
    trace_.jobs.push_back({ts_.tasks[j.task].id, j.index, j.nominal, j.enqueue, start,
                           finish, j.abs_deadline, j.skipped_before});
  }

  // Publication with zero DDS delay: activation lands in the subscriber's
  // message queue (depth-limited, drop-oldest).
  void publish(std::size_t idx, time_ns at) {
    auto it = subscribers_.find(idx);
    if (it == subscribers_.end()) return;
    for (std::size_t sub : it->second) {
      auto& q = sub_msgs_[sub];
      if (static_cast<int>(q.size()) >= cfg_.subscription_queue_depth) {
        q.pop_front();
        trace_.drops.push_back({ts_.tasks[sub].id, at, 1});
      }
      q.push_back(at);
    }
  }

  bool any_sub_pending() const {
    for (const auto& q : sub_msgs_)
      if (!q.empty()) return true;
    return false;
  }

  // earliest pending activation across all subscription queues, ties by id
  std::optional<std::size_t> earliest_activated_sub() const {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < ts_.tasks.size(); ++i) {
      if (sub_msgs_[i].empty()) continue;
      if (!best || sub_msgs_[i].front() < sub_msgs_[*best].front() ||
          (sub_msgs_[i].front() == sub_msgs_[*best].front() &&
           ts_.tasks[i].id < ts_.tasks[*best].id))
        best = i;
    }
    return best;
  }

  // ---- Default executor: polling points and processing windows ----------

  void run_default() {
    std::vector<std::size_t> sample_order;
    for (std::size_t i = 0; i < ts_.tasks.size(); ++i) sample_order.push_back(i);
    // wait-set order: timers before subscriptions, each by (priority, id)
    std::sort(sample_order.begin(), sample_order.end(), [&](std::size_t a, std::size_t b) {
      return std::make_tuple(!ts_.tasks[a].is_timer(), ts_.tasks[a].priority, ts_.tasks[a].id) <
             std::make_tuple(!ts_.tasks[b].is_timer(), ts_.tasks[b].priority, ts_.tasks[b].id);
    });

    time_ns now = 0;
    for (;;) {
      // polling point: sample at most one job of each eligible task
      std::vector<ReadyJob> wait_set;
      for (std::size_t idx : sample_order) {
        const TaskSpec& t = ts_.tasks[idx];
        if (t.is_timer()) {
          if (timer_ts_[idx] <= now && timer_ts_[idx] < horizon_) {
            int sk = pending_skip_[idx];
            pending_skip_[idx] = 0;
            wait_set.push_back(make_job(idx, timer_ts_[idx], now, sk));
          }
        } else if (!sub_msgs_[idx].empty()) {
          time_ns activation = sub_msgs_[idx].front();
          sub_msgs_[idx].pop_front();
          wait_set.push_back(make_job(idx, activation, now, 0));
        }
      }

      if (wait_set.empty()) {
        time_ns next = kNoTime;
        for (std::size_t i = 0; i < ts_.tasks.size(); ++i)
          if (ts_.tasks[i].is_timer() && timer_ts_[i] < horizon_)
            next = std::min(next, timer_ts_[i]);
        if (next == kNoTime) break;  // quiescent
        now = std::max(now, next);
        continue;
      }

      // processing window: run the wait set to completion in sampled order;
      // a timer's timestamp advances at the instant its job starts
      for (ReadyJob& j : wait_set) {
        if (ts_.tasks[j.task].is_timer()) advance_timestamp(j.task, now, now);
        time_ns start = now;
        time_ns finish = start + draw_exec(j.task);
        record(j, start, finish);
        now = finish;
        publish(j.task, finish);
      }
    }
  }

  // ---- Release-Only: releaser thread feeding the events queue -----------

  void run_ro() {
    const bool fifo = fifo_order();
    std::deque<ReadyJob> fifo_q;
    ReadyQueue prio_q;

    auto queue_empty = [&] { return fifo ? fifo_q.empty() : prio_q.empty(); };
    auto queue_pop = [&] {
      ReadyJob j = fifo ? fifo_q.front() : prio_q.top();
      if (fifo)
        fifo_q.pop_front();
      else
        prio_q.pop();
      return j;
    };
    auto queue_push = [&](ReadyJob j) {
      if (fifo)
        fifo_q.push_back(std::move(j));
      else
        prio_q.push(std::move(j));
    };

    time_ns now = 0;
    for (;;) {
      // release work due at this decision point: timer releases landing
      // exactly here (elevated) or deferred to here (non-elevated), and
      // subscriptions activated by the publication that just happened; each
      // costs delta and delays the next start
      for (;;) {
        auto top = peek_timer();
        if (top && top->ts <= now) {
          time_ns nominal = top->ts;
          int sk = pending_skip_[top->idx];
          pending_skip_[top->idx] = 0;
          // an elevated releaser reads the clock at the timestamp itself
          advance_timestamp(top->idx, cfg_.timer_thread_elevated ? nominal : now, now);
          now += cfg_.delta;
          queue_push(make_job(top->idx, nominal, now, sk));
          continue;
        }
        if (auto sub = earliest_activated_sub()) {
          time_ns at = sub_msgs_[*sub].front();
          sub_msgs_[*sub].pop_front();
          now += cfg_.delta;
          queue_push(make_job(*sub, at, now, 0));
          continue;
        }
        break;
      }

      if (!queue_empty()) {
        ReadyJob j = queue_pop();
        time_ns start = now;
        time_ns finish = start + draw_exec(j.task);
        if (cfg_.timer_thread_elevated) {
          // releases during execution suspend and prolong the running job
          time_ns cursor = start;
          for (;;) {
            auto top = peek_timer();
            if (!top || top->ts >= finish) break;
            time_ns nominal = top->ts;
            int sk = pending_skip_[top->idx];
            pending_skip_[top->idx] = 0;
            advance_timestamp(top->idx, nominal, nominal);
            cursor = std::max(cursor, nominal) + cfg_.delta;
            finish += cfg_.delta;
            queue_push(make_job(top->idx, nominal, cursor, sk));
          }
        }
        record(j, start, finish);
        now = finish;
        publish(j.task, finish);
        continue;
      }

      auto top = peek_timer();
      if (!top) break;  // no future releases below the horizon, queue drained
      now = std::max(now, top->ts);
    }
  }

  // ---- Release-and-Execute: timer management thread executes timers -----

  void run_re() {
    const bool fifo = fifo_order();
    ReadyQueue timer_ready;      // PriorityRE only
    std::deque<ReadyJob> sub_q;  // default thread, FIFO

    auto finish_job = [&](ReadyJob& j, time_ns start) {
      time_ns finish = start + draw_exec(j.task);
      record(j, start, finish);
      publish(j.task, finish);
      return finish;
    };

    time_ns now = 0;
    for (;;) {
      if (fifo) {
        // Release the head and execute it immediately while it is eligible;
        // deferred updates past further period multiples cause skipping.
        auto top = peek_timer();
        if (top && top->ts <= now) {
          time_ns nominal = top->ts;
          int sk = pending_skip_[top->idx];
          pending_skip_[top->idx] = 0;
          advance_timestamp(top->idx, now, now);
          now += cfg_.delta;
          ReadyJob j = make_job(top->idx, nominal, now, sk);
          now = finish_job(j, now);
          continue;
        }
      } else {
        // PriorityRE: convert every reached timestamp into a release before
        // the scheduling decision
        for (;;) {
          auto top = peek_timer();
          if (!top || top->ts > now) break;
          time_ns nominal = top->ts;
          int sk = pending_skip_[top->idx];
          pending_skip_[top->idx] = 0;
          advance_timestamp(top->idx, now, now);
          now += cfg_.delta;
          timer_ready.push(make_job(top->idx, nominal, now, sk));
        }
        if (!timer_ready.empty()) {
          ReadyJob j = timer_ready.top();
          timer_ready.pop();
          now = finish_job(j, now);
          continue;
        }
      }

      // timer thread idle: the default thread releases every activated
      // subscription into its queue, then runs the queue front
      if (any_sub_pending()) {
        while (auto sub = earliest_activated_sub()) {
          time_ns at = sub_msgs_[*sub].front();
          sub_msgs_[*sub].pop_front();
          now += cfg_.delta;
          sub_q.push_back(make_job(*sub, at, now, 0));
        }
        continue;  // releases moved the clock; the timer thread gets first go
      }
      if (!sub_q.empty()) {
        auto top = peek_timer();
        if (top && top->ts <= now) continue;  // timer thread has priority
        ReadyJob j = sub_q.front();
        sub_q.pop_front();
        now = finish_job(j, now);
        continue;
      }

      auto top = peek_timer();
      if (!top) break;
      now = std::max(now, top->ts);
    }
  }
};

}  // namespace

std::pair<time_ns, int> next_timestamp(time_ns ts, time_ns period, time_ns now) {
  assert(now >= ts && period > 0);
  time_ns steps = (now - ts) / period + 1;
  return {ts + steps * period, static_cast<int>(steps - 1)};
}

ScheduleTrace reference_np_schedule(const TaskSet& ts, PriorityPolicy policy,
                                    time_ns horizon) {
  if (policy == PriorityPolicy::Fifo)
    throw std::invalid_argument("reference scheduler needs a priority policy");
  if (horizon <= 0) throw std::invalid_argument("horizon must be > 0");
  validate(ts);
  for (const auto& t : ts.tasks)
    if (!t.is_timer())
      throw std::invalid_argument("reference scheduler requires a timers-only task set");

  std::vector<std::int64_t> eff = effective_priorities(ts, policy);

  struct Release {
    time_ns at;
    std::size_t idx;
    int index;
  };
  std::vector<Release> releases;
  for (std::size_t i = 0; i < ts.tasks.size(); ++i) {
    const TaskSpec& t = ts.tasks[i];
    int k = 0;
    for (time_ns r = t.phase; r < horizon; r += *t.period) releases.push_back({r, i, k++});
  }
  std::sort(releases.begin(), releases.end(), [&](const Release& a, const Release& b) {
    return std::make_tuple(a.at, ts.tasks[a.idx].priority, ts.tasks[a.idx].id) <
           std::make_tuple(b.at, ts.tasks[b.idx].priority, ts.tasks[b.idx].id);
  });

  ReadyQueue ready;
  std::uint64_t seq = 0;
  auto push_release = [&](const Release& r) {
    const TaskSpec& t = ts.tasks[r.idx];
    ReadyJob j;
    j.task = r.idx;
    j.index = r.index;
    j.nominal = r.at;
    j.enqueue = r.at;
    j.abs_deadline = r.at + *t.deadline;
    std::int64_t k0 = policy == PriorityPolicy::Edf ? j.abs_deadline : eff[r.idx];
    j.key = {k0, static_cast<std::int64_t>(t.priority), static_cast<std::int64_t>(t.id),
             j.nominal, static_cast<std::int64_t>(seq++)};
    ready.push(j);
  };

  ScheduleTrace trace;
  trace.horizon = horizon;
  std::size_t cursor = 0;
  time_ns now = 0;
  while (cursor < releases.size() || !ready.empty()) {
    if (ready.empty()) now = std::max(now, releases[cursor].at);
    while (cursor < releases.size() && releases[cursor].at <= now)
      push_release(releases[cursor++]);
    if (ready.empty()) continue;
    ReadyJob j = ready.top();
    ready.pop();
    time_ns start = now;
    time_ns finish = start + ts.tasks[j.task].wcet;
    trace.jobs.push_back({ts.tasks[j.task].id, j.index, j.nominal, j.enqueue, start,
                          finish, j.abs_deadline, 0});
    now = finish;
  }
  return trace;
}

ScheduleTrace simulate(const TaskSet& ts, const ExecutorConfig& cfg, time_ns horizon,
                       std::uint64_t seed) {
  if (horizon <= 0) throw std::invalid_argument("horizon must be > 0");
  validate(ts);

  const bool fifo_variant = cfg.variant == ExecutorVariant::EventsFifoRO ||
                            cfg.variant == ExecutorVariant::EventsFifoRE;
  const bool prio_variant = cfg.variant == ExecutorVariant::PriorityRO ||
                            cfg.variant == ExecutorVariant::PriorityRE;
  if (fifo_variant && cfg.policy != PriorityPolicy::Fifo)
    throw std::invalid_argument("events-fifo executors require the FIFO policy");
  if (prio_variant && cfg.policy == PriorityPolicy::Fifo)
    throw std::invalid_argument("priority executors require a non-FIFO policy");

  if (cfg.policy == PriorityPolicy::Edf) {
    for (const auto& t : ts.tasks) {
      if (!t.is_timer() && !t.deadline)
        throw std::runtime_error("EDF undefined for deadline-less subscription");
      if (t.is_timer() && *t.deadline != *t.period)
        throw std::invalid_argument("EDF scheduling requires implicit timer deadlines");
    }
  }

  return SimEngine(ts, cfg, horizon, seed).run();
}

SimMetrics compute_metrics(const ScheduleTrace& trace, const TaskSet& ts,
                           const std::vector<Chain>& chains) {
  SimMetrics m;
  std::map<int, TaskMetrics> per_task;
  std::map<int, double> response_sum;
  for (const auto& t : ts.tasks) per_task[t.id].task_id = t.id;
  for (const auto& j : trace.jobs) {
    auto& tm = per_task.at(j.task_id);
    tm.released++;
    time_ns resp = j.finish_t - j.nominal_ts;
    tm.max_response = std::max(tm.max_response, resp);
    response_sum[j.task_id] += ns_to_ms(resp);
    if (j.abs_deadline >= 0 && j.finish_t > j.abs_deadline) tm.deadline_misses++;
  }
  for (const auto& d : trace.drops) per_task.at(d.task_id).dropped += d.count;
  for (const auto& t : ts.tasks) {
    auto& tm = per_task.at(t.id);
    if (tm.released > 0)
      tm.mean_response_ms = response_sum[t.id] / static_cast<double>(tm.released);
    m.tasks.push_back(tm);
  }
  for (const auto& c : chains) {
    validate_chain(ts, c);
    ChainMetrics cm;
    cm.chain_id = c.id;
    try {
      cm.max_latency = c.mode == ChainMode::Sequence
                           ? measure_sequence_latency(trace, c)
                           : measure_sampled_latency(trace, c);
    } catch (const std::runtime_error&) {
      // no propagation completed within this trace
    }
    m.chains.push_back(cm);
  }
  return m;
}

time_ns measure_sequence_latency(const ScheduleTrace& trace, const Chain& chain) {
  if (chain.mode != ChainMode::Sequence)
    throw std::invalid_argument("chain is not sequence mode");
  // jobs of each stage indexed by activation time; activations are the
  // predecessor's finish instants, unique per task
  std::map<int, std::map<time_ns, const Job*>> by_nominal;
  for (const auto& j : trace.jobs) by_nominal[j.task_id][j.nominal_ts] = &j;

  const auto& heads = by_nominal[chain.task_ids.front()];
  time_ns best = -1;
  for (const auto& [nominal, head] : heads) {
    time_ns t = head->finish_t;
    bool complete = true;
    for (std::size_t m = 1; m < chain.task_ids.size(); ++m) {
      const auto& stage = by_nominal[chain.task_ids[m]];
      auto it = stage.find(t);
      if (it == stage.end()) {
        complete = false;
        break;
      }
      t = it->second->finish_t;
    }
    if (complete) best = std::max(best, t - head->nominal_ts);
  }
  if (best < 0) throw std::runtime_error("no complete propagation");
  return best;
}

time_ns measure_sampled_latency(const ScheduleTrace& trace, const Chain& chain) {
  if (chain.mode != ChainMode::Sampled)
    throw std::invalid_argument("chain is not sampled mode");
  std::map<int, std::vector<const Job*>> by_task;  // in start order
  for (const auto& j : trace.jobs) by_task[j.task_id].push_back(&j);

  const auto& heads = by_task[chain.task_ids.front()];
  time_ns best = -1;
  // arrival immediately after head job k's read is first seen by head job
  // k+1; registers are written at finish and a read at the same instant
  // observes the write
  for (std::size_t k = 0; k + 1 < heads.size(); ++k) {
    time_ns t = heads[k + 1]->finish_t;
    bool complete = true;
    for (std::size_t m = 1; m < chain.task_ids.size(); ++m) {
      const auto& jobs = by_task[chain.task_ids[m]];
      auto it = std::lower_bound(jobs.begin(), jobs.end(), t,
                                 [](const Job* j, time_ns v) { return j->start_t < v; });
      if (it == jobs.end()) {
        complete = false;
        break;
      }
      t = (*it)->finish_t;
    }
    if (complete) best = std::max(best, t - heads[k]->start_t);
  }
  if (best < 0) throw std::runtime_error("no complete propagation");
  return best;
}

time_ns default_horizon(const TaskSet& ts) {
  time_ns max_phase = 0;
  for (const auto& t : ts.tasks) max_phase = std::max(max_phase, t.phase);
  return max_phase + 2 * hyperperiod(ts);
}

}  // namespace npexec
