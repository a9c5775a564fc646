#include "npexec/taskset_io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace npexec {

using nlohmann::json;

namespace {

TaskKind parse_kind(const std::string& s) {
  if (s == "timer") return TaskKind::Timer;
  if (s == "subscription") return TaskKind::Subscription;
  throw std::invalid_argument("unknown task kind '" + s + "'");
}

ChainMode parse_mode(const std::string& s) {
  if (s == "sequence") return ChainMode::Sequence;
  if (s == "sampled") return ChainMode::Sampled;
  throw std::invalid_argument("unknown chain mode '" + s + "'");
}

}  // namespace

TaskSetFile load_taskset(std::istream& in) {
  json j = json::parse(in);
  TaskSetFile out;
  out.taskset.name = j.value("name", std::string{});
  out.taskset.delta = ms_to_ns(j.value("delta_ms", 0.0));

  for (const auto& jt : j.at("tasks")) {
    TaskSpec t;
    t.id = jt.at("id").get<int>();
    t.kind = parse_kind(jt.value("kind", std::string("timer")));
    t.wcet = ms_to_ns(jt.at("wcet_ms").get<double>());
    if (jt.contains("period_ms")) t.period = ms_to_ns(jt.at("period_ms").get<double>());
    if (jt.contains("deadline_ms"))
      t.deadline = ms_to_ns(jt.at("deadline_ms").get<double>());
    else if (t.period)
      t.deadline = t.period;  // implicit deadline
    t.phase = ms_to_ns(jt.value("phase_ms", 0.0));
    t.priority = jt.at("priority").get<int>();
    if (jt.contains("subscribes_to")) t.subscribes_to = jt.at("subscribes_to").get<int>();
    if (jt.contains("publishes_to")) t.publishes_to = jt.at("publishes_to").get<int>();
    out.taskset.tasks.push_back(t);
  }

  if (j.contains("chains")) {
    for (const auto& jc : j.at("chains")) {
      Chain c;
      c.id = jc.at("id").get<int>();
      c.mode = parse_mode(jc.at("mode").get<std::string>());
      c.task_ids = jc.at("task_ids").get<std::vector<int>>();
      out.chains.push_back(c);
    }
  }

  validate(out.taskset);
  for (const auto& c : out.chains) validate_chain(out.taskset, c);
  return out;
}

TaskSetFile load_taskset_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open task-set file '" + path + "'");
  return load_taskset(in);
}

void save_taskset(std::ostream& out, const TaskSet& ts, const std::vector<Chain>& chains) {
  json j;
  j["name"] = ts.name;
  j["delta_ms"] = ns_to_ms(ts.delta);
  j["tasks"] = json::array();
  for (const auto& t : ts.tasks) {
    json jt;
    jt["id"] = t.id;
    jt["kind"] = t.is_timer() ? "timer" : "subscription";
    jt["wcet_ms"] = ns_to_ms(t.wcet);
    if (t.period) jt["period_ms"] = ns_to_ms(*t.period);
    if (t.deadline) jt["deadline_ms"] = ns_to_ms(*t.deadline);
    jt["phase_ms"] = ns_to_ms(t.phase);
    jt["priority"] = t.priority;
    if (t.subscribes_to) jt["subscribes_to"] = *t.subscribes_to;
    if (t.publishes_to) jt["publishes_to"] = *t.publishes_to;
    j["tasks"].push_back(jt);
  }
  if (!chains.empty()) {
    j["chains"] = json::array();
    for (const auto& c : chains) {
      json jc;
      jc["id"] = c.id;
      jc["mode"] = c.mode == ChainMode::Sequence ? "sequence" : "sampled";
      jc["task_ids"] = c.task_ids;
      j["chains"].push_back(jc);
    }
  }
  out << j.dump(2) << "\n";
}

void save_taskset_file(const std::string& path, const TaskSet& ts,
                       const std::vector<Chain>& chains) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write task-set file '" + path + "'");
  save_taskset(out, ts, chains);
}

time_ns parse_duration(const std::string& text) {
  std::string s = text;
  time_ns scale = kNsPerMs;
  auto ends_with = [&](const char* suf) {
    std::size_t n = std::string(suf).size();
    return s.size() > n && s.compare(s.size() - n, n, suf) == 0;
  };
  if (ends_with("ns")) {
    scale = 1;
    s.resize(s.size() - 2);
  } else if (ends_with("us")) {
    scale = kNsPerUs;
    s.resize(s.size() - 2);
  } else if (ends_with("ms")) {
    scale = kNsPerMs;
    s.resize(s.size() - 2);
  } else if (ends_with("s")) {
    scale = kNsPerSec;
    s.resize(s.size() - 1);
  }
  std::size_t pos = 0;
  double v = std::stod(s, &pos);
  if (pos != s.size()) throw std::invalid_argument("bad duration '" + text + "'");
  return static_cast<time_ns>(std::llround(v * static_cast<double>(scale)));
}

}  // namespace npexec
