#include "mudag/trace.hpp"

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace mudag {

const char* const kTraceHeader =
    "t,f_gap,consensus_err,dist_to_opt_sq,V_t,grad_evals,comm_rounds";

void write_trace_csv(std::ostream& out,
                     const std::vector<TraceRecord>& trace) {
  out << kTraceHeader << '\n';
  char buf[420];
  for (const TraceRecord& r : trace) {
    std::snprintf(buf, sizeof buf, "%ld,%.17g,%.17g,%.17g,%.17g,%ld,%ld\n",
                  r.t, r.f_gap, r.consensus_err, r.dist_to_opt_sq, r.V_t,
                  r.grad_evals, r.comm_rounds);
    out << buf;
  }
}

void write_trace_csv(const std::string& path,
                     const std::vector<TraceRecord>& trace) {
  std::ofstream f(path);
  if (!f) throw std::runtime_error("trace: cannot write '" + path + "'");
  write_trace_csv(f, trace);
  if (!f.good()) throw std::runtime_error("trace: write failed for '" + path + "'");
}

std::vector<TraceRecord> read_trace_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("trace: cannot read '" + path + "'");
  std::string line;
  int lineno = 0;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error("trace: " + path + ":" + std::to_string(lineno) +
                             ": " + what);
  };
  if (!std::getline(f, line)) fail("empty file");
  ++lineno;
  if (line == std::string(kTraceHeader) + "\r") line.pop_back();
  if (line != kTraceHeader) fail("unexpected header '" + line + "'");
  std::vector<TraceRecord> out;
  while (std::getline(f, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tok;
    double field[7];
    for (int i = 0; i < 7; ++i) {
      if (!std::getline(ss, tok, ',')) fail("expected 7 fields");
      char* end = nullptr;
      field[i] = std::strtod(tok.c_str(), &end);
      if (end == tok.c_str() || *end != '\0')
        fail("bad number '" + tok + "'");
    }
    if (std::getline(ss, tok, ',')) fail("expected 7 fields");
    TraceRecord r;
    r.t = long(field[0]);
    r.f_gap = field[1];
    r.consensus_err = field[2];
    r.dist_to_opt_sq = field[3];
    r.V_t = field[4];
    r.grad_evals = long(field[5]);
    r.comm_rounds = long(field[6]);
    out.push_back(r);
  }
  return out;
}

}  // namespace mudag
