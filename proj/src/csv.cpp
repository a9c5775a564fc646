#include "npexec/csv.hpp"

#include <cinttypes>
#include <cmath>
#include <cstdio>
#include <ostream>

namespace npexec {

namespace {

std::string fmt(const char* f, auto... args) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), f, args...);
  return buf;
}

}  // namespace

std::string format_ms(time_ns t) {
  // integer nanoseconds shown in milliseconds; six decimals keep it exact
  bool neg = t < 0;
  std::int64_t v = neg ? -t : t;
  return fmt("%s%" PRId64 ".%06" PRId64, neg ? "-" : "", v / kNsPerMs, v % kNsPerMs);
}

void write_trace_csv(std::ostream& out, const ScheduleTrace& trace) {
  out << "task_id,index,nominal_ts_ns,enqueue_ns,start_ns,finish_ns,abs_deadline_ns,"
         "skipped_before\n";
  for (const auto& j : trace.jobs) {
    out << j.task_id << ',' << j.index << ',' << j.nominal_ts << ',' << j.enqueue_t
        << ',' << j.start_t << ',' << j.finish_t << ',' << j.abs_deadline << ','
        << j.skipped_before << '\n';
  }
}

void write_drops_csv(std::ostream& out, const ScheduleTrace& trace) {
  out << "task_id,skipped_at_ns,count\n";
  for (const auto& d : trace.drops)
    out << d.task_id << ',' << d.at << ',' << d.count << '\n';
}

void write_metrics_text(std::ostream& out, const SimMetrics& metrics) {
  for (const auto& t : metrics.tasks) {
    out << "task " << t.task_id << " released=" << t.released << " dropped=" << t.dropped
        << " deadline_misses=" << t.deadline_misses
        << " max_response_ms=" << format_ms(t.max_response)
        << " mean_response_ms=" << fmt("%.6f", t.mean_response_ms) << '\n';
  }
  for (const auto& c : metrics.chains) {
    out << "chain " << c.chain_id << " max_latency_ms="
        << (c.max_latency ? format_ms(*c.max_latency) : std::string("n/a")) << '\n';
  }
}

void write_analysis_tasks_csv(std::ostream& out, const AnalysisReport& report) {
  out << "task_id,delta_ms,inflated_wcet_ms,wcrt_ms,deadline_ms,meets_deadline\n";
  for (const auto& t : report.tasks) {
    out << t.task_id << ',' << format_ms(t.overhead) << ',' << format_ms(t.inflated_wcet)
        << ',' << (t.wcrt ? format_ms(*t.wcrt) : std::string()) << ','
        << format_ms(t.deadline) << ',' << (t.meets_deadline ? "true" : "false") << '\n';
  }
}

void write_analysis_chains_csv(std::ostream& out, const AnalysisReport& report) {
  out << "chain_id,latency_bound_ms\n";
  for (const auto& c : report.chains) {
    out << c.chain_id << ','
        << (c.latency_bound ? format_ms(*c.latency_bound) : std::string()) << '\n';
  }
}

void write_compare_csv(std::ostream& out, const std::vector<CompareRow>& rows) {
  out << "chain_id,latency_a_ms,latency_b_ms,reduction\n";
  for (const auto& r : rows) {
    out << r.chain_id << ',' << (r.latency_a ? format_ms(*r.latency_a) : std::string())
        << ',' << (r.latency_b ? format_ms(*r.latency_b) : std::string()) << ','
        << (r.reduction ? fmt("%.6f", *r.reduction) : std::string()) << '\n';
  }
}

void write_compare_histogram_csv(std::ostream& out, const std::vector<CompareRow>& rows,
                                 int bins) {
  std::vector<std::int64_t> counts(static_cast<std::size_t>(bins) + 2, 0);
  const double lo = -1.0, hi = 1.0;
  const double width = (hi - lo) / bins;
  for (const auto& r : rows) {
    if (!r.reduction) continue;
    double v = *r.reduction;
    if (v < lo)
      counts.front()++;
    else if (v >= hi)
      counts.back()++;
    else
      counts[1 + static_cast<std::size_t>((v - lo) / width)]++;
  }
  out << "bin_lo,bin_hi,count\n";
  out << "-inf," << fmt("%.6f", lo) << ',' << counts.front() << '\n';
  for (int b = 0; b < bins; ++b) {
    out << fmt("%.6f", lo + b * width) << ',' << fmt("%.6f", lo + (b + 1) * width) << ','
        << counts[1 + static_cast<std::size_t>(b)] << '\n';
  }
  out << fmt("%.6f", hi) << ",inf," << counts.back() << '\n';
}

}  // namespace npexec
