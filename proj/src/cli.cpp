#include "npexec/cli.hpp"

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "npexec/analysis.hpp"
#include "npexec/csv.hpp"
#include "npexec/gen.hpp"
#include "npexec/sim.hpp"
#include "npexec/taskset_io.hpp"

namespace npexec::cli {

namespace {

namespace fs = std::filesystem;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 2;
constexpr int kExitUnschedulable = 3;
constexpr int kExitUnsupported = 4;

std::uint64_t default_seed() {
  if (const char* env = std::getenv("NPEXEC_SEED")) return std::strtoull(env, nullptr, 10);
  return 0;
}

std::pair<int, int> parse_range(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos) {
    int v = std::stoi(s);
    return {v, v};
  }
  return {std::stoi(s.substr(0, colon)), std::stoi(s.substr(colon + 1))};
}

struct ExecutorChoice {
  ExecutorVariant variant;
  PriorityPolicy policy;
  bool reference = false;
};

std::optional<ExecutorChoice> executor_by_name(const std::string& name,
                                               PriorityPolicy reference_policy) {
  if (name == "default") return ExecutorChoice{ExecutorVariant::Default, PriorityPolicy::Fifo};
  if (name == "events-fifo-ro")
    return ExecutorChoice{ExecutorVariant::EventsFifoRO, PriorityPolicy::Fifo};
  if (name == "events-fifo-re")
    return ExecutorChoice{ExecutorVariant::EventsFifoRE, PriorityPolicy::Fifo};
  if (name == "rm-ro")
    return ExecutorChoice{ExecutorVariant::PriorityRO, PriorityPolicy::RateMonotonic};
  if (name == "rm-re")
    return ExecutorChoice{ExecutorVariant::PriorityRE, PriorityPolicy::RateMonotonic};
  if (name == "edf-ro") return ExecutorChoice{ExecutorVariant::PriorityRO, PriorityPolicy::Edf};
  if (name == "edf-re") return ExecutorChoice{ExecutorVariant::PriorityRE, PriorityPolicy::Edf};
  if (name == "fp-ro")
    return ExecutorChoice{ExecutorVariant::PriorityRO, PriorityPolicy::FixedPriority};
  if (name == "fp-re")
    return ExecutorChoice{ExecutorVariant::PriorityRE, PriorityPolicy::FixedPriority};
  if (name == "reference")
    return ExecutorChoice{ExecutorVariant::PriorityRO, reference_policy, true};
  return std::nullopt;
}

PriorityPolicy policy_by_name(const std::string& name) {
  if (name == "rm") return PriorityPolicy::RateMonotonic;
  if (name == "fp") return PriorityPolicy::FixedPriority;
  if (name == "edf") return PriorityPolicy::Edf;
  throw CLI::ValidationError("--policy", "unknown policy '" + name + "'");
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write '" + path.string() + "'");
  out << content;
}

struct CommonSimArgs {
  std::string taskset_path;
  std::string horizon_text;
  int hyperperiods = 2;
  std::uint64_t seed = default_seed();
  std::string delta_text;
  double wcet_min_fraction = 1.0;
  int jobs = 1;
  std::string out_dir = ".";
};

time_ns resolve_horizon(const TaskSet& ts, const std::string& horizon_text,
                        int hyperperiods) {
  if (!horizon_text.empty()) return parse_duration(horizon_text);
  time_ns max_phase = 0;
  for (const auto& t : ts.tasks) max_phase = std::max(max_phase, t.phase);
  return max_phase + hyperperiods * hyperperiod(ts);
}

time_ns resolve_delta(const TaskSet& ts, const std::string& delta_text) {
  return delta_text.empty() ? ts.delta : parse_duration(delta_text);
}

ScheduleTrace run_executor(const TaskSet& ts, const ExecutorChoice& choice,
                           time_ns delta, time_ns horizon, std::uint64_t seed,
                           double wcet_min_fraction) {
  if (choice.reference) return reference_np_schedule(ts, choice.policy, horizon);
  ExecutorConfig cfg;
  cfg.variant = choice.variant;
  cfg.policy = choice.policy;
  cfg.delta = delta;
  cfg.wcet_min_fraction = wcet_min_fraction;
  return simulate(ts, cfg, horizon, seed);
}

// ---- generate --------------------------------------------------------------

int cmd_generate(const std::string& out_path, double utilization,
                 const std::string& tasks_range, const std::string& chains_range,
                 const std::string& chain_len_range, const std::string& periods_csv,
                 std::uint64_t seed, const std::string& delta_text,
                 const std::string& name, int casestudy_util) {
  TaskSet ts;
  std::vector<Chain> chains;
  if (casestudy_util != 0) {
    ts = casestudy_taskset(casestudy_util);
  } else {
    GenParams params;
    params.utilization = utilization;
    std::tie(params.tasks_min, params.tasks_max) = parse_range(tasks_range);
    std::tie(params.chains_min, params.chains_max) = parse_range(chains_range);
    std::tie(params.chain_len_min, params.chain_len_max) = parse_range(chain_len_range);
    params.seed = seed;
    params.name = name;
    if (!delta_text.empty()) params.delta = parse_duration(delta_text);
    if (!periods_csv.empty()) {
      std::vector<std::pair<time_ns, double>> chosen;
      std::stringstream ss(periods_csv);
      std::string item;
      while (std::getline(ss, item, ',')) {
        time_ns p = parse_duration(item);
        double w = 1.0;
        for (const auto& [dp, dw] : GenParams{}.period_weights)
          if (dp == p) w = dw;
        chosen.emplace_back(p, w);
      }
      params.period_weights = chosen;
    }
    ts = generate_taskset(params);
    if (params.chains_max > 0) {
      chains = generate_chains(ts, params);
      if (params.chain_len_max > static_cast<int>(ts.tasks.size()))
        std::cerr << "warning: chain lengths clamped to the task count ("
                  << ts.tasks.size() << ")\n";
    }
  }

  save_taskset_file(out_path, ts, chains);
  std::cout << "tasks=" << ts.tasks.size() << " chains=" << chains.size()
            << " utilization=" << ts.utilization()
            << " hyperperiod_ms=" << format_ms(hyperperiod(ts)) << " -> " << out_path
            << "\n";
  return kExitOk;
}

// ---- analyze ---------------------------------------------------------------

int cmd_analyze(const std::string& taskset_path, const std::string& policy_name,
                const std::string& option_name, const std::string& delta_text,
                const std::string& out_dir) {
  TaskSetFile file = load_taskset_file(taskset_path);
  for (const auto& t : file.taskset.tasks) {
    if (!t.is_timer()) {
      std::cerr << "analysis supports timers-only task sets; task " << t.id
                << " is a subscription\n";
      return kExitUnsupported;
    }
  }
  PriorityPolicy policy = policy_by_name(policy_name);
  ReleaseOption option = option_name == "re" ? ReleaseOption::RE : ReleaseOption::RO;
  time_ns delta = resolve_delta(file.taskset, delta_text);

  AnalysisReport report;
  try {
    report = analyze(file.taskset, policy, option, delta, file.chains);
  } catch (const std::runtime_error& e) {
    std::cerr << e.what() << "\n";
    return kExitUnschedulable;
  }

  std::ostringstream tasks_csv, chains_csv;
  write_analysis_tasks_csv(tasks_csv, report);
  write_analysis_chains_csv(chains_csv, report);
  if (!out_dir.empty()) {
    fs::create_directories(out_dir);
    write_file(fs::path(out_dir) / "analysis_tasks.csv", tasks_csv.str());
    write_file(fs::path(out_dir) / "analysis_chains.csv", chains_csv.str());
  } else {
    std::cout << tasks_csv.str();
    if (!report.chains.empty()) std::cout << chains_csv.str();
  }
  std::cout << (report.schedulable ? "schedulable" : "not schedulable") << "\n";
  return report.schedulable ? kExitOk : kExitUnschedulable;
}

// ---- simulate --------------------------------------------------------------

int cmd_simulate(const CommonSimArgs& args, const std::vector<std::string>& executors,
                 const std::string& policy_name) {
  TaskSetFile file = load_taskset_file(args.taskset_path);
  PriorityPolicy ref_policy = policy_by_name(policy_name);

  std::vector<ExecutorChoice> choices;
  for (const auto& name : executors) {
    auto c = executor_by_name(name, ref_policy);
    if (!c) {
      std::cerr << "unknown executor '" << name << "'\n";
      return kExitUsage;
    }
    choices.push_back(*c);
  }

  time_ns horizon = resolve_horizon(file.taskset, args.horizon_text, args.hyperperiods);
  time_ns delta = resolve_delta(file.taskset, args.delta_text);
  fs::create_directories(args.out_dir);

  auto run_one = [&](std::size_t i) {
    ScheduleTrace trace = run_executor(file.taskset, choices[i], delta, horizon,
                                       args.seed, args.wcet_min_fraction);
    SimMetrics metrics = compute_metrics(trace, file.taskset, file.chains);
    std::ostringstream t, d, m;
    write_trace_csv(t, trace);
    write_drops_csv(d, trace);
    write_metrics_text(m, metrics);
    fs::path base = fs::path(args.out_dir);
    write_file(base / (executors[i] + "_trace.csv"), t.str());
    write_file(base / (executors[i] + "_drops.csv"), d.str());
    write_file(base / (executors[i] + "_metrics.txt"), m.str());
    std::int64_t dropped = 0;
    for (const auto& tm : metrics.tasks) dropped += tm.dropped;
    return dropped;
  };

  std::vector<std::int64_t> dropped(choices.size());
  if (args.jobs > 1) {
    std::vector<std::future<std::int64_t>> futs;
    for (std::size_t i = 0; i < choices.size(); ++i)
      futs.push_back(std::async(std::launch::async, run_one, i));
    for (std::size_t i = 0; i < choices.size(); ++i) dropped[i] = futs[i].get();
  } else {
    for (std::size_t i = 0; i < choices.size(); ++i) dropped[i] = run_one(i);
  }
  for (std::size_t i = 0; i < choices.size(); ++i)
    std::cout << executors[i] << ": horizon_ms=" << format_ms(horizon)
              << " dropped=" << dropped[i] << "\n";
  return kExitOk;
}

// ---- compare ---------------------------------------------------------------

struct LatencySource {
  bool is_bound = false;
  ExecutorChoice executor{};   // sim:<name>
  PriorityPolicy policy{};     // bound:<policy>-<option>
  ReleaseOption option{};
};

std::optional<LatencySource> parse_source(const std::string& text) {
  LatencySource src;
  std::string body;
  if (text.rfind("sim:", 0) == 0) {
    body = text.substr(4);
    auto c = executor_by_name(body, PriorityPolicy::RateMonotonic);
    if (!c) return std::nullopt;
    src.executor = *c;
    return src;
  }
  if (text.rfind("bound:", 0) == 0) {
    body = text.substr(6);
    auto dash = body.rfind('-');
    if (dash == std::string::npos) return std::nullopt;
    src.is_bound = true;
    try {
      src.policy = policy_by_name(body.substr(0, dash));
    } catch (const CLI::ValidationError&) {
      return std::nullopt;
    }
    std::string opt = body.substr(dash + 1);
    if (opt != "ro" && opt != "re") return std::nullopt;
    src.option = opt == "re" ? ReleaseOption::RE : ReleaseOption::RO;
    return src;
  }
  return std::nullopt;
}

int cmd_compare(const CommonSimArgs& args, const std::string& a_text,
                const std::string& b_text, int bins) {
  TaskSetFile file = load_taskset_file(args.taskset_path);
  auto a = parse_source(a_text);
  auto b = parse_source(b_text);
  if (!a || !b) {
    std::cerr << "latency sources are sim:<executor> or bound:<policy>-<option>\n";
    return kExitUsage;
  }

  time_ns horizon = resolve_horizon(file.taskset, args.horizon_text, args.hyperperiods);
  time_ns delta = resolve_delta(file.taskset, args.delta_text);

  auto latencies = [&](const LatencySource& src) {
    std::vector<std::optional<time_ns>> out(file.chains.size());
    if (src.is_bound) {
      AnalysisReport report;
      try {
        report = analyze(file.taskset, src.policy, src.option, delta, file.chains);
      } catch (const std::runtime_error& e) {
        // no certifiable bounds; chains stay missing rather than failing
        std::cerr << e.what() << "\n";
        return out;
      }
      for (std::size_t i = 0; i < file.chains.size(); ++i)
        out[i] = report.chains[i].latency_bound;
    } else {
      ScheduleTrace trace = run_executor(file.taskset, src.executor, delta, horizon,
                                         args.seed, args.wcet_min_fraction);
      SimMetrics metrics = compute_metrics(trace, file.taskset, file.chains);
      for (std::size_t i = 0; i < file.chains.size(); ++i)
        out[i] = metrics.chains[i].max_latency;
    }
    return out;
  };

  std::vector<std::optional<time_ns>> la, lb;
  if (args.jobs > 1) {
    auto fa = std::async(std::launch::async, latencies, *a);
    lb = latencies(*b);
    la = fa.get();
  } else {
    la = latencies(*a);
    lb = latencies(*b);
  }

  std::vector<CompareRow> rows;
  for (std::size_t i = 0; i < file.chains.size(); ++i) {
    CompareRow r;
    r.chain_id = file.chains[i].id;
    r.latency_a = la[i];
    r.latency_b = lb[i];
    if (la[i] && lb[i] && *la[i] > 0)
      r.reduction = static_cast<double>(*la[i] - *lb[i]) / static_cast<double>(*la[i]);
    rows.push_back(r);
  }

  fs::create_directories(args.out_dir);
  std::ostringstream c, h;
  write_compare_csv(c, rows);
  write_compare_histogram_csv(h, rows, bins);
  write_file(fs::path(args.out_dir) / "compare.csv", c.str());
  write_file(fs::path(args.out_dir) / "compare_hist.csv", h.str());

  std::vector<double> reductions;
  for (const auto& r : rows)
    if (r.reduction) reductions.push_back(*r.reduction);
  if (!reductions.empty()) {
    std::sort(reductions.begin(), reductions.end());
    std::cout << "chains=" << reductions.size()
              << " median_reduction=" << reductions[reductions.size() / 2] << "\n";
  } else {
    std::cout << "chains=0\n";
  }
  return kExitOk;
}

}  // namespace

int run(std::vector<std::string> args) {
  CLI::App app{"ROS 2 executor scheduling simulator and non-preemptive "
               "schedulability analyzer"};
  app.name("npexec");
  app.require_subcommand(1);

  // generate
  auto* gen = app.add_subcommand("generate", "generate a synthetic task-set file");
  std::string gen_out, gen_tasks = "10:200", gen_chains = "0", gen_len = "2:15";
  std::string gen_periods, gen_delta, gen_name;
  double gen_util = 0.6;
  std::uint64_t gen_seed = default_seed();
  int gen_case = 0;
  gen->add_option("-o,--output", gen_out, "output task-set file")->required();
  gen->add_option("--utilization", gen_util, "target utilization in (0, 1]");
  gen->add_option("--tasks", gen_tasks, "task count or range A:B");
  gen->add_option("--chains", gen_chains, "chain count or range A:B");
  gen->add_option("--chain-length", gen_len, "chain length or range A:B");
  gen->add_option("--periods", gen_periods, "comma-separated period list (ms default)");
  gen->add_option("--seed", gen_seed, "generator seed");
  gen->add_option("--delta", gen_delta, "per-release overhead to store in the file");
  gen->add_option("--name", gen_name, "task-set name");
  gen->add_option("--casestudy", gen_case, "built-in sensor set at 60, 80 or 90 percent")
      ->check(CLI::IsMember({60, 80, 90}));

  // analyze
  auto* ana = app.add_subcommand("analyze", "overhead, response-time and latency bounds");
  std::string ana_path, ana_policy = "rm", ana_option = "ro", ana_delta, ana_out;
  ana->add_option("taskset", ana_path, "task-set file")->required();
  ana->add_option("--policy", ana_policy, "rm, fp or edf")
      ->check(CLI::IsMember({"rm", "fp", "edf"}));
  ana->add_option("--option", ana_option, "ro or re")->check(CLI::IsMember({"ro", "re"}));
  ana->add_option("--delta", ana_delta, "per-release overhead (default: file value)");
  ana->add_option("-o,--out-dir", ana_out, "write CSVs here instead of stdout");

  // simulate
  auto* sim = app.add_subcommand("simulate", "run executor simulations");
  CommonSimArgs sim_args;
  std::vector<std::string> sim_execs;
  std::string sim_policy = "rm";
  sim->add_option("taskset", sim_args.taskset_path, "task-set file")->required();
  sim->add_option("--executor", sim_execs,
                  "default, events-fifo-ro, events-fifo-re, rm-ro, rm-re, edf-ro, "
                  "edf-re, fp-ro, fp-re, reference")
      ->required();
  sim->add_option("--policy", sim_policy, "policy for the reference executor");
  sim->add_option("--hyperperiods", sim_args.hyperperiods, "horizon in hyperperiods");
  sim->add_option("--horizon", sim_args.horizon_text, "absolute horizon (ms default)");
  sim->add_option("--seed", sim_args.seed, "simulation seed");
  sim->add_option("--delta", sim_args.delta_text, "per-release overhead");
  sim->add_option("--wcet-min-fraction", sim_args.wcet_min_fraction,
                  "draw execution times uniformly from [f*C, C]");
  sim->add_option("--jobs", sim_args.jobs, "run executors concurrently");
  sim->add_option("-o,--out-dir", sim_args.out_dir, "output directory");

  // compare
  auto* cmp = app.add_subcommand("compare", "per-chain latency comparison");
  CommonSimArgs cmp_args;
  std::string cmp_a, cmp_b;
  int cmp_bins = 20;
  cmp->add_option("taskset", cmp_args.taskset_path, "task-set file")->required();
  cmp->add_option("--a", cmp_a, "sim:<executor> or bound:<policy>-<option>")->required();
  cmp->add_option("--b", cmp_b, "sim:<executor> or bound:<policy>-<option>")->required();
  cmp->add_option("--hyperperiods", cmp_args.hyperperiods, "horizon in hyperperiods");
  cmp->add_option("--horizon", cmp_args.horizon_text, "absolute horizon (ms default)");
  cmp->add_option("--seed", cmp_args.seed, "simulation seed");
  cmp->add_option("--delta", cmp_args.delta_text, "per-release overhead");
  cmp->add_option("--bins", cmp_bins, "histogram bin count");
  cmp->add_option("--jobs", cmp_args.jobs, "run the two sources concurrently");
  cmp->add_option("-o,--out-dir", cmp_args.out_dir, "output directory");

  try {
    std::reverse(args.begin(), args.end());
    app.parse(std::move(args));
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  // flag-shaped values are usage concerns, not input-file concerns
  try {
    if (gen->parsed()) {
      parse_range(gen_tasks);
      parse_range(gen_chains);
      parse_range(gen_len);
      if (!gen_delta.empty()) parse_duration(gen_delta);
    }
    if (ana->parsed() && !ana_delta.empty()) parse_duration(ana_delta);
    for (const CommonSimArgs* a : {&sim_args, &cmp_args}) {
      if (!a->delta_text.empty()) parse_duration(a->delta_text);
      if (!a->horizon_text.empty()) parse_duration(a->horizon_text);
    }
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (gen->parsed()) {
      if (gen_case == 0 && !(gen_util > 0.0 && gen_util <= 1.0)) {
        std::cerr << "utilization must be in (0, 1]\n";
        return kExitUsage;
      }
      return cmd_generate(gen_out, gen_util, gen_tasks, gen_chains, gen_len, gen_periods,
                          gen_seed, gen_delta, gen_name, gen_case);
    }
    if (ana->parsed()) return cmd_analyze(ana_path, ana_policy, ana_option, ana_delta, ana_out);
    if (sim->parsed()) return cmd_simulate(sim_args, sim_execs, sim_policy);
    if (cmp->parsed()) return cmd_compare(cmp_args, cmp_a, cmp_b, cmp_bins);
  } catch (const std::exception& e) {
    std::cerr << e.what() << "\n";
    return kExitUnsupported;
  }
  return kExitUsage;
}

}  // namespace npexec::cli
