#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "npexec/analysis.hpp"
#include "npexec/sim.hpp"

namespace npexec {

// All writers are deterministic: fixed column order, fixed float precision,
// no timestamps.
void write_trace_csv(std::ostream& out, const ScheduleTrace& trace);
void write_drops_csv(std::ostream& out, const ScheduleTrace& trace);
void write_metrics_text(std::ostream& out, const SimMetrics& metrics);
void write_analysis_tasks_csv(std::ostream& out, const AnalysisReport& report);
void write_analysis_chains_csv(std::ostream& out, const AnalysisReport& report);

struct CompareRow {
  int chain_id = 0;
  std::optional<time_ns> latency_a;
  std::optional<time_ns> latency_b;
  std::optional<double> reduction;  // (a - b) / a
};

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows);
// fixed bins across [-1, 1] plus underflow/overflow rows
void write_compare_histogram_csv(std::ostream& out, const std::vector<CompareRow>& rows,
                                 int bins);

std::string format_ms(time_ns t);  // exact: nanoseconds with six decimals

}  // namespace npexec
