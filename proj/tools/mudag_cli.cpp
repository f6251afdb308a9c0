// Command-line front end: run experiments from config files, sweep one axis,
// inspect network spectra, solve references, render trace plots.

#include <cstdio>
#include <exception>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "mudag/config.hpp"
#include "mudag/graph.hpp"
#include "mudag/harness.hpp"
#include "mudag/matrix.hpp"
#include "mudag/mixing.hpp"
#include "mudag/mudag.hpp"
#include "mudag/solve_ref.hpp"
#include "mudag/svg_plot.hpp"

namespace {

// Exit codes: 0 ok, 1 usage/config error, 2 runtime error.
constexpr int kConfigError = 1;
constexpr int kRuntimeError = 2;

mudag::KVConfig load_config(const std::string& path,
                            const std::vector<std::string>& overrides) {
  mudag::KVConfig cfg = mudag::KVConfig::parse_file(path);
  for (const std::string& ov : overrides) {
    const std::size_t eq = ov.find('=');
    if (eq == std::string::npos || eq == 0)
      throw std::runtime_error("--set expects key=value, got '" + ov + "'");
    cfg.set(ov.substr(0, eq), ov.substr(eq + 1));
  }
  return cfg;
}

void print_outcomes(const mudag::ExperimentResult& ex) {
  std::printf("output: %s\n", ex.dir.c_str());
  for (const mudag::MethodOutcome& mo : ex.methods) {
    if (!mo.ok) {
      std::printf("%-6s error: %s\n", mo.name.c_str(), mo.error.c_str());
      continue;
    }
    const mudag::TraceRecord& last = mo.result.trace.back();
    if (mo.result.diverged())
      std::printf("%-6s diverged at t=%ld (trace kept)\n", mo.name.c_str(),
                  mo.result.diverged_at);
    else
      std::printf("%-6s t=%ld f_gap=%.3e consensus=%.3e grads=%ld comm=%ld\n",
                  mo.name.c_str(), last.t, last.f_gap, last.consensus_err,
                  mo.result.grad_evals, mo.result.comm_rounds);
  }
}

int cmd_run(const std::string& config,
            const std::vector<std::string>& overrides) {
  const mudag::KVConfig cfg = load_config(config, overrides);
  const mudag::ExperimentResult ex = mudag::run_experiment(cfg);
  print_outcomes(ex);
  return 0;
}

int cmd_sweep(const std::string& config, const std::string& axis,
              const std::vector<std::string>& values,
              const std::vector<std::string>& overrides) {
  const mudag::KVConfig cfg = load_config(config, overrides);
  const mudag::SweepResult sw = mudag::sweep(cfg, axis, values);
  std::printf("output: %s\n", sw.dir.c_str());
  std::printf("%-10s %-6s %12s %12s %12s %12s\n", "value", "method",
              "iters_to_eps", "grad_to_eps", "comm_to_eps", "final_gap");
  for (const mudag::SweepRow& r : sw.rows)
    std::printf("%-10s %-6s %12ld %12ld %12ld %12.3e\n", r.value.c_str(),
                r.method.c_str(), r.iters_to_eps, r.grad_to_eps,
                r.comm_to_eps, r.final_gap);
  return 0;
}

int cmd_spectrum(const std::string& spec) {
  const mudag::Graph g = mudag::parse_graph_spec(spec);
  const mudag::MixingMatrix w = mudag::build_mixing(g);
  std::printf("m = %d\n", g.m);
  std::printf("edges = %d\n", g.edge_count());
  std::printf("lambda1_laplacian = %.17g\n", w.lambda1_L);
  std::printf("lambda2 = %.17g\n", w.lambda2);
  std::printf("gap = %.17g\n", w.gap());
  std::printf("gossip_momentum = %.17g\n", w.eta_w());
  for (int K : {1, 2, 4, 8, 16})
    std::printf("contraction_K%d = %.17g\n", K, w.rho(K));
  return 0;
}

int cmd_solve_ref(const std::string& config,
                  const std::vector<std::string>& overrides) {
  const mudag::KVConfig cfg = load_config(config, overrides);
  mudag::Instance inst = mudag::build_instance(cfg);
  mudag::RefOptions ro;
  ro.tol = cfg.get_double("ref.tol", 1e-11);
  const mudag::RefSolution sol = mudag::solve_reference(*inst.problem, ro);
  std::printf("f_star = %.17g\n", sol.f_star);
  std::printf("grad_norm = %.17g\n", sol.grad_norm);
  std::printf("iters = %ld\n", sol.iters);
  const mudag::ProblemConstants& k = inst.problem->constants();
  std::printf("mu = %.17g\nL = %.17g\nM = %.17g\nkappa_g = %.17g\n", k.mu,
              k.L, k.M, k.kappa_g());
  std::printf("lambda2 = %.17g\ngap = %.17g\n", inst.mixing.lambda2,
              inst.mixing.gap());
  return 0;
}

int cmd_plot(const std::string& dir, const std::string& axis) {
  if (axis == "both") {
    std::printf("wrote %s\n", mudag::emit_plot(dir, "grad_evals").c_str());
    std::printf("wrote %s\n", mudag::emit_plot(dir, "comm_rounds").c_str());
  } else {
    std::printf("wrote %s\n", mudag::emit_plot(dir, axis).c_str());
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decentralized smooth strongly convex optimization simulator"};
  app.require_subcommand(1);

  std::string config, axis = "both", spec, dir;
  std::vector<std::string> values, overrides;

  CLI::App* run = app.add_subcommand("run", "Run all methods from a config");
  run->add_option("config", config, "config file")->required();
  run->add_option("--set", overrides, "override key=value");

  CLI::App* sw = app.add_subcommand("sweep", "Repeat a run varying one axis");
  sw->add_option("config", config, "config file")->required();
  std::string sweep_axis;
  sw->add_option("--axis", sweep_axis, "K, p or sigma")->required();
  sw->add_option("--values", values, "axis values")->required()->delimiter(',');
  sw->add_option("--set", overrides, "override key=value");

  CLI::App* sp = app.add_subcommand("spectrum", "Network spectral summary");
  sp->add_option("graph", spec, "ring:m | path:m | complete:m | star:m | "
                                "er:m:p:seed | edge-list file")
      ->required();

  CLI::App* sr = app.add_subcommand("solve-ref",
                                    "Solve the reference problem only");
  sr->add_option("config", config, "config file")->required();
  sr->add_option("--set", overrides, "override key=value");

  CLI::App* pl = app.add_subcommand("plot", "Render SVG plots from traces");
  pl->add_option("dir", dir, "directory holding trace CSVs")->required();
  pl->add_option("--axis", axis, "t, grad_evals, comm_rounds or both");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);  // CLI11 prints usage; nonzero on error
  }

  try {
    if (run->parsed()) return cmd_run(config, overrides);
    if (sw->parsed()) return cmd_sweep(config, sweep_axis, values, overrides);
    if (sp->parsed()) return cmd_spectrum(spec);
    if (sr->parsed()) return cmd_solve_ref(config, overrides);
    if (pl->parsed()) return cmd_plot(dir, axis);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    const std::string what = e.what();
    return what.rfind("config:", 0) == 0 ? kConfigError : kRuntimeError;
  }
  return 0;
}
