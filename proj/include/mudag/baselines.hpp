#pragma once

#include <functional>
#include <vector>

#include "mudag/matrix.hpp"
#include "mudag/mixing.hpp"
#include "mudag/problem.hpp"
#include "mudag/run.hpp"

namespace mudag {

// eta = 0 selects 1/L for the centralized method and 1/M for the
// decentralized ones; alpha = 0 selects min(sqrt(mu/L), 0.999) (AGD only).
struct BaselineOptions {
  double eta = 0.0;
  double alpha = 0.0;
  int K_mix = 1;  // plain gossip rounds per DGD step
  long T = 100;
  double divergence_factor = 1e6;
};

// Centralized accelerated gradient descent on f. The iterate is a 1 x d
// block, so the trace's consensus error is identically zero and no
// communication is counted. V_t uses the same potential as the main method.
RunResult run_agd(const Problem& p, const BaselineOptions& opt,
                  const Reference* ref = nullptr,
                  const std::vector<double>* x0 = nullptr);

// Decentralized gradient descent x_{t+1} = W^{K_mix} x_t - eta grad block.
// With a fixed step it converges only to a neighborhood of the optimum.
RunResult run_dgd(const Problem& p, const MixingMatrix& w,
                  const BaselineOptions& opt, const Reference* ref = nullptr,
                  const Matrix* x0 = nullptr);

// EXTRA with Wtilde = (I + W)/2:
//   x_1     = W x_0 - eta g_0
//   x_{t+2} = (I + W) x_{t+1} - Wtilde x_t - eta (g_{t+1} - g_t)
// One W application per step (the previous product is cached).
RunResult run_extra(const Problem& p, const MixingMatrix& w,
                    const BaselineOptions& opt, const Reference* ref = nullptr,
                    const Matrix* x0 = nullptr);

// NIDS with Wtilde = (I + W)/2 and the same first step as EXTRA:
//   x_{t+2} = Wtilde (2 x_{t+1} - x_t - eta (g_{t+1} - g_t))
RunResult run_nids(const Problem& p, const MixingMatrix& w,
                   const BaselineOptions& opt, const Reference* ref = nullptr,
                   const Matrix* x0 = nullptr);

// Grid search over eta = 2^{-k} / M, k = 0 .. grid-1. Runs must carry a
// reference (finite f_gap column). Candidates are ranked lexicographically:
// non-diverged first, then earliest t reaching eps_rel x initial gap, then
// smallest final gap; ties keep the larger step. Deterministic.
struct TunedRun {
  double eta = 0.0;
  int grid_index = -1;
  long reached_t = -1;     // -1 when the target gap was never reached
  double final_gap = 0.0;  // last finite f_gap of the winning run
  RunResult result;
};

TunedRun tune_step_size(const std::function<RunResult(double)>& runner,
                        double M, double eps_rel = 1e-8, int grid = 8);

}  // namespace mudag
