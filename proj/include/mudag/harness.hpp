#pragma once

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include "mudag/config.hpp"
#include "mudag/graph.hpp"
#include "mudag/mixing.hpp"
#include "mudag/problem.hpp"
#include "mudag/run.hpp"

namespace mudag {

// Root directory for experiment outputs: $MUDAG_OUTPUT_ROOT, or "out" when
// the variable is unset or empty.
std::string output_root();

// Accepted forms: "ring:8" (also path/complete/star), "er:m:p:seed",
// anything else is treated as an edge-list file path.
Graph parse_graph_spec(const std::string& spec);

// Network and objective assembled from a config; see README for the schema.
struct Instance {
  Graph graph;
  MixingMatrix mixing;
  std::unique_ptr<Problem> problem;
  std::uint64_t er_seed_used = 0;  // meaningful for topology = er only
  int er_attempts = 0;
};

Instance build_instance(const KVConfig& cfg);

struct MethodOutcome {
  std::string name;
  bool ok = false;     // method produced a trace (divergence still counts)
  std::string error;   // set when ok is false
  double eta_used = 0.0;
  int K_used = 0;      // consensus rounds per step where applicable
  RunResult result;
};

struct ExperimentResult {
  std::string dir;
  Reference ref;
  std::vector<MethodOutcome> methods;
  std::map<std::string, std::string> manifest;
};

// Builds the instance, solves the reference, runs each listed method, and
// writes one <method>.csv per completed method plus a `manifest` file into
// <output_root()>/<output>. A method failure is recorded in its outcome and
// the remaining methods still run; config errors (including unknown keys)
// throw before anything is written.
ExperimentResult run_experiment(const KVConfig& cfg);

// Repeats run_experiment with one axis key overridden per value, writing
// each run to <output>/<axis>=<value>/ plus a summary.csv at <output>.
// Axes: K -> method.mudag.K, p -> network.p, sigma -> problem.sigma.value.
struct SweepRow {
  std::string value;
  std::string method;
  long iters_to_eps = -1;  // -1 when the target gap was never reached
  long grad_to_eps = -1;
  long comm_to_eps = -1;
  double final_gap = 0.0;
};

struct SweepResult {
  std::string dir;
  std::vector<SweepRow> rows;
};

SweepResult sweep(const KVConfig& cfg, const std::string& axis,
                  const std::vector<std::string>& values);

}  // namespace mudag
