#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "npexec/model.hpp"

namespace npexec {

struct TaskSetFile {
  TaskSet taskset;
  std::vector<Chain> chains;
};

// JSON task-set file:
//   { "name": ..., "delta_ms": ...,
//     "tasks": [{id, kind, wcet_ms, period_ms, deadline_ms, phase_ms,
//                priority, subscribes_to, publishes_to}],
//     "chains": [{id, mode, task_ids}] }
// Omitted deadline_ms defaults to period_ms; omitted phase_ms defaults to 0.
TaskSetFile load_taskset(std::istream& in);
TaskSetFile load_taskset_file(const std::string& path);

void save_taskset(std::ostream& out, const TaskSet& ts, const std::vector<Chain>& chains);
void save_taskset_file(const std::string& path, const TaskSet& ts,
                       const std::vector<Chain>& chains);

// Duration strings accept ns/us/ms/s suffixes; a bare number means ms.
time_ns parse_duration(const std::string& text);

}  // namespace npexec
