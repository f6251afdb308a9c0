#include "mudag/harness.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "mudag/baselines.hpp"
#include "mudag/logistic.hpp"
#include "mudag/mudag.hpp"
#include "mudag/quadratic.hpp"
#include "mudag/solve_ref.hpp"
#include "mudag/trace.hpp"

namespace fs = std::filesystem;

namespace mudag {

namespace {

std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string tok;
  std::istringstream ss(s);
  while (std::getline(ss, tok, sep)) out.push_back(tok);
  return out;
}

// First trace row whose gap is at or below eps_rel x initial gap.
const TraceRecord* first_at_target(const std::vector<TraceRecord>& trace,
                                   double eps_rel) {
  if (trace.empty() || !std::isfinite(trace[0].f_gap)) return nullptr;
  const double target =
      eps_rel *
      std::max(trace[0].f_gap, std::numeric_limits<double>::min());
  for (const TraceRecord& r : trace)
    if (std::isfinite(r.f_gap) && r.f_gap <= target) return &r;
  return nullptr;
}

double last_finite_gap(const std::vector<TraceRecord>& trace) {
  double g = std::numeric_limits<double>::infinity();
  for (const TraceRecord& r : trace)
    if (std::isfinite(r.f_gap)) g = r.f_gap;
  return g;
}

}  // namespace

std::string output_root() {
  const char* env = std::getenv("MUDAG_OUTPUT_ROOT");
  if (env && *env) return env;
  return "out";
}

Graph parse_graph_spec(const std::string& spec) {
  const std::vector<std::string> parts = split(spec, ':');
  const std::string& kind = parts[0];
  if (kind == "ring" || kind == "path" || kind == "complete" ||
      kind == "star") {
    if (parts.size() != 2)
      throw std::runtime_error("graph spec: expected '" + kind + ":m'");
    return named_topology(kind, std::atoi(parts[1].c_str()));
  }
  if (kind == "er") {
    if (parts.size() != 4)
      throw std::runtime_error("graph spec: expected 'er:m:p:seed'");
    const int m = std::atoi(parts[1].c_str());
    const double p = std::atof(parts[2].c_str());
    const std::uint64_t seed = std::strtoull(parts[3].c_str(), nullptr, 10);
    return erdos_renyi_connected(m, p, seed).graph;
  }
  return load_edge_list(spec);
}

Instance build_instance(const KVConfig& cfg) {
  Instance inst;
  const std::string topo = cfg.get_string("network.topology");
  if (topo == "er") {
    const int m = cfg.get_int("network.m");
    ErdosRenyi er = erdos_renyi_connected(m, cfg.get_double("network.p"),
                                          cfg.get_u64("network.seed", 1));
    inst.graph = std::move(er.graph);
    inst.er_seed_used = er.seed_used;
    inst.er_attempts = er.attempts;
  } else if (topo == "file") {
    inst.graph = load_edge_list(cfg.get_string("network.file"));
  } else {
    inst.graph = named_topology(topo, cfg.get_int("network.m"));
  }
  inst.mixing = build_mixing(inst.graph);
  const int m = inst.graph.m;

  const std::string family = cfg.get_string("problem.family");
  if (family == "quadratic") {
    inst.problem = std::make_unique<QuadraticProblem>(random_quadratic(
        m, cfg.get_int("problem.d"), cfg.get_double("problem.quad.mu"),
        cfg.get_double("problem.quad.L"),
        cfg.get_double("problem.quad.noise", 0.3),
        cfg.get_u64("problem.quad.seed", 1)));
  } else if (family == "logistic") {
    const std::string data = cfg.get_string("problem.data", "synth");
    Dataset set;
    int n_per_agent = 0;
    if (data == "synth") {
      n_per_agent = cfg.get_int("problem.n_per_agent");
      set = synth_binary(m * n_per_agent, cfg.get_int("problem.d"),
                         cfg.get_u64("problem.data.seed", 1),
                         cfg.get_double("problem.data.noise", 0.3));
    } else {
      set = load_libsvm(data, cfg.get_int("problem.d", -1));
      n_per_agent = cfg.get_int("problem.n_per_agent", set.n() / m);
    }
    RowPartition part = partition_rows(set, m, n_per_agent,
                                       cfg.get_u64("problem.partition.seed", 1));

    std::vector<double> sigma;
    const std::string mode = cfg.get_string("problem.sigma.mode", "uniform");
    if (mode == "uniform") {
      sigma = sigma_uniform(m, cfg.get_double("problem.sigma.value", 1e-3));
    } else if (mode == "mixed") {
      const double neg = cfg.get_double("problem.sigma.neg");
      if (cfg.has("problem.sigma.match_mean"))
        sigma = sigma_mixed_matching(
            m, neg, cfg.get_double("problem.sigma.match_mean"));
      else
        sigma = sigma_mixed(m, neg, cfg.get_double("problem.sigma.last"));
    } else {
      throw std::runtime_error(
          "config: problem.sigma.mode must be uniform or mixed, got '" + mode +
          "'");
    }
    inst.problem =
        std::make_unique<LogisticProblem>(std::move(part.shards), sigma);
  } else {
    throw std::runtime_error(
        "config: problem.family must be quadratic or logistic, got '" +
        family + "'");
  }
  return inst;
}

ExperimentResult run_experiment(const KVConfig& cfg) {
  KVConfig c = cfg;  // private read-tracking for the unknown-key check
  ExperimentResult out;

  Instance inst = build_instance(c);
  const Problem& p = *inst.problem;
  const ProblemConstants& k = p.constants();
  const MixingMatrix& w = inst.mixing;

  const std::vector<std::string> methods = c.get_list("methods");
  const long T = c.get_long("T", 500);
  const double eps_rel = c.get_double("eps.rel", 1e-8);
  const int tune_grid = c.get_int("tune.grid", 8);
  const std::string out_name = c.get_string("output", "exp");

  RefOptions ro;
  ro.tol = c.get_double("ref.tol", 1e-11);

  // Read per-method keys up front so the unknown-key check sees them even
  // when a method later fails.
  struct MethodCfg {
    double eta = 0.0, alpha = 0.0;
    std::string kspec, form;
    bool tune = false;
    int k_mix = 1;
  };
  std::map<std::string, MethodCfg> mcfg;
  for (const std::string& name : methods) {
    MethodCfg mc;
    if (name == "mudag") {
      mc.eta = c.get_double("method.mudag.eta", 0.0);
      mc.alpha = c.get_double("method.mudag.alpha", 0.0);
      mc.kspec = c.get_string("method.mudag.K", "4");
      mc.form = c.get_string("method.mudag.form", "direct");
      if (mc.form != "direct" && mc.form != "tracking")
        throw std::runtime_error(
            "config: method.mudag.form must be direct or tracking");
    } else if (name == "agd") {
      mc.eta = c.get_double("method.agd.eta", 0.0);
      mc.alpha = c.get_double("method.agd.alpha", 0.0);
    } else if (name == "dgd" || name == "extra" || name == "nids") {
      mc.tune = c.get_bool("method." + name + ".tune", true);
      mc.eta = c.get_double("method." + name + ".eta", 0.0);
      if (name == "dgd") mc.k_mix = c.get_int("method.dgd.K_mix", 1);
    } else {
      throw std::runtime_error("config: unknown method '" + name + "'");
    }
    mcfg[name] = mc;
  }

  {
    const std::vector<std::string> stray = c.unused_keys();
    if (!stray.empty()) {
      std::string msg = "config: unknown keys:";
      for (const std::string& s : stray) msg += " " + s;
      throw std::runtime_error(msg);
    }
  }

  const fs::path dir = fs::path(output_root()) / out_name;
  fs::create_directories(dir);
  out.dir = dir.string();

  const RefSolution sol = solve_reference(p, ro);
  out.ref.x_star = sol.x;
  out.ref.f_star = sol.f_star;

  std::map<std::string, std::string>& man = out.manifest;
  man["network.m"] = std::to_string(inst.graph.m);
  man["network.edges"] = std::to_string(inst.graph.edge_count());
  man["network.lambda2"] = fmt17(w.lambda2);
  man["network.gap"] = fmt17(w.gap());
  if (c.get_string("network.topology") == "er") {
    man["network.er_seed_used"] = std::to_string(inst.er_seed_used);
    man["network.er_attempts"] = std::to_string(inst.er_attempts);
  }
  man["constants.mu"] = fmt17(k.mu);
  man["constants.L"] = fmt17(k.L);
  man["constants.M"] = fmt17(k.M);
  man["constants.kappa_g"] = fmt17(k.kappa_g());
  if (k.nu) {
    man["constants.nu"] = fmt17(*k.nu);
    man["constants.kappa_l"] = fmt17(*k.kappa_l());
  }
  man["ref.f_star"] = fmt17(sol.f_star);
  man["ref.grad_norm"] = fmt17(sol.grad_norm);
  man["ref.iters"] = std::to_string(sol.iters);
  man["run.T"] = std::to_string(T);
  man["run.eps_rel"] = fmt17(eps_rel);
  for (const auto& [key, val] : c.items()) man["config." + key] = val;

  for (const std::string& name : methods) {
    const MethodCfg& mc = mcfg[name];
    MethodOutcome mo;
    mo.name = name;
    try {
      if (name == "mudag") {
        MudagOptions o;
        o.T = T;
        o.eta = mc.eta;
        o.alpha = mc.alpha;
        o.tracking_form = mc.form == "tracking";
        if (mc.kspec == "theory") {
          const TheoreticalK tk = theoretical_K(p, w, nullptr, &out.ref);
          o.K = tk.K;
          man["method.mudag.rho"] = fmt17(tk.rho);
          man["method.mudag.theta"] = fmt17(tk.theta);
        } else {
          char* end = nullptr;
          const long kk = std::strtol(mc.kspec.c_str(), &end, 10);
          if (end == mc.kspec.c_str() || *end != '\0')
            throw std::runtime_error(
                "config: method.mudag.K must be an integer or 'theory'");
          if (kk < 1 || kk > 64)
            throw std::runtime_error(
                "config: manual method.mudag.K must lie in [1, 64]");
          o.K = int(kk);
        }
        mo.result = run_mudag(p, w, o, &out.ref);
        mo.K_used = o.K;
        mo.eta_used = resolve_params(o, k).eta;
      } else if (name == "agd") {
        BaselineOptions b;
        b.T = T;
        b.eta = mc.eta;
        b.alpha = mc.alpha;
        mo.result = run_agd(p, b, &out.ref);
        mo.eta_used = b.eta > 0.0 ? b.eta : 1.0 / k.L;
      } else {
        BaselineOptions b;
        b.T = T;
        b.K_mix = mc.k_mix;
        auto run_one = [&](double eta) {
          BaselineOptions bb = b;
          bb.eta = eta;
          if (name == "dgd") return run_dgd(p, w, bb, &out.ref);
          if (name == "extra") return run_extra(p, w, bb, &out.ref);
          return run_nids(p, w, bb, &out.ref);
        };
        if (mc.tune) {
          TunedRun tr = tune_step_size(run_one, k.M, eps_rel, tune_grid);
          mo.result = std::move(tr.result);
          mo.eta_used = tr.eta;
        } else {
          mo.eta_used = mc.eta > 0.0 ? mc.eta : 1.0 / k.M;
          mo.result = run_one(mo.eta_used);
        }
        if (name == "dgd") mo.K_used = b.K_mix;
      }
      mo.ok = true;
    } catch (const std::exception& e) {
      mo.ok = false;
      mo.error = e.what();
    }

    if (mo.ok) {
      write_trace_csv((dir / (name + ".csv")).string(), mo.result.trace);
      man["method." + name + ".eta_used"] = fmt17(mo.eta_used);
      if (name == "mudag")
        man["method.mudag.K_used"] = std::to_string(mo.K_used);
      if (name == "dgd")
        man["method.dgd.K_mix"] = std::to_string(mo.K_used);
      man["method." + name + ".status"] =
          mo.result.diverged()
              ? "diverged_at=" + std::to_string(mo.result.diverged_at)
              : "ok";
    } else {
      man["method." + name + ".status"] = "error: " + mo.error;
    }
    out.methods.push_back(std::move(mo));
  }

  std::ofstream mf(dir / "manifest");
  if (!mf)
    throw std::runtime_error("harness: cannot write manifest in " +
                             out.dir);
  for (const auto& [key, val] : man) mf << key << " = " << val << '\n';
  mf.close();
  return out;
}

SweepResult sweep(const KVConfig& cfg, const std::string& axis,
                  const std::vector<std::string>& values) {
  std::string axis_key;
  if (axis == "K")
    axis_key = "method.mudag.K";
  else if (axis == "p")
    axis_key = "network.p";
  else if (axis == "sigma")
    axis_key = "problem.sigma.value";
  else
    throw std::runtime_error("sweep: axis must be K, p or sigma, got '" +
                             axis + "'");
  if (values.empty()) throw std::runtime_error("sweep: no values given");

  SweepResult out;
  const std::string base = cfg.get_string("output", "exp");
  out.dir = (fs::path(output_root()) / base).string();

  for (const std::string& v : values) {
    KVConfig sub = cfg;
    sub.set(axis_key, v);
    sub.set("output", base + "/" + axis + "=" + v);
    ExperimentResult ex = run_experiment(sub);
    const double eps_rel = cfg.get_double("eps.rel", 1e-8);
    for (const MethodOutcome& mo : ex.methods) {
      SweepRow row;
      row.value = v;
      row.method = mo.name;
      if (mo.ok) {
        if (const TraceRecord* r = first_at_target(mo.result.trace, eps_rel)) {
          row.iters_to_eps = r->t;
          row.grad_to_eps = r->grad_evals;
          row.comm_to_eps = r->comm_rounds;
        }
        row.final_gap = last_finite_gap(mo.result.trace);
      } else {
        row.final_gap = std::numeric_limits<double>::quiet_NaN();
      }
      out.rows.push_back(row);
    }
  }

  fs::create_directories(out.dir);
  std::ofstream f(fs::path(out.dir) / "summary.csv");
  if (!f)
    throw std::runtime_error("sweep: cannot write summary.csv in " + out.dir);
  f << "value,method,iters_to_eps,grad_to_eps,comm_to_eps,final_gap\n";
  for (const SweepRow& r : out.rows)
    f << r.value << ',' << r.method << ',' << r.iters_to_eps << ','
      << r.grad_to_eps << ',' << r.comm_to_eps << ',' << fmt17(r.final_gap)
      << '\n';
  return out;
}

}  // namespace mudag
