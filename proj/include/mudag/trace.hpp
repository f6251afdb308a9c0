#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace mudag {

// Per-iteration diagnostics. f_gap and dist_to_opt_sq are NaN when no
// reference solution was supplied; V_t is NaN for methods without a
// potential function.
struct TraceRecord {
  long t = 0;
  double f_gap = 0.0;
  double consensus_err = 0.0;
  double dist_to_opt_sq = 0.0;
  double V_t = 0.0;
  long grad_evals = 0;
  long comm_rounds = 0;
};

extern const char* const kTraceHeader;

// Round-trippable CSV: doubles are written with %.17g.
void write_trace_csv(std::ostream& out, const std::vector<TraceRecord>& trace);
void write_trace_csv(const std::string& path,
                     const std::vector<TraceRecord>& trace);

// Throws std::runtime_error with a line number on malformed input.
std::vector<TraceRecord> read_trace_csv(const std::string& path);

}  // namespace mudag
