#pragma once

#include <array>
#include <vector>

#include "mudag/matrix.hpp"
#include "mudag/mixing.hpp"
#include "mudag/problem.hpp"
#include "mudag/run.hpp"

namespace mudag {

// Multi-consensus accelerated gradient tracking. Each outer iteration runs
// one synchronized gradient round and K accelerated-gossip rounds.
// eta = 0 and alpha = 0 select the defaults 1/L and min(sqrt(mu/L), 0.999).
struct MudagOptions {
  double eta = 0.0;
  double alpha = 0.0;
  int K = 4;
  long T = 100;
  bool tracking_form = false;
  double divergence_factor = 1e6;  // abort when f-gap exceeds this x initial
};

// Options with defaults applied and validated.
struct MudagParams {
  double eta = 0.0;
  double alpha = 0.0;
  double beta = 0.0;  // (1 - alpha) / (1 + alpha)
  int K = 0;
  bool alpha_above_half = false;  // rate certificates assume alpha <= 1/2
};

// Throws std::runtime_error unless eta > 0, 0 < alpha < 1, K >= 0.
MudagParams resolve_params(const MudagOptions& opt, const ProblemConstants& k);

struct MudagState {
  Matrix x, y;
  // Direct form.
  Matrix y_prev;
  Matrix g_prev;  // gradient block at y_prev; zero before the first step
  // Tracking form.
  Matrix s;    // tracker; row means satisfy sbar = eta * gbar
  Matrix g_y;  // gradient block at the current y
  long t = 0;
  long grad_evals = 0;
  long comm_rounds = 0;
};

// All rows of x0 are replaced by their mean: agents start from a common
// point, momentum history is flat (y0 = y_{-1} = x0) and the stale gradient
// is zero. The tracking form instead evaluates one gradient round to seed
// s0 = eta * grad block at y0.
MudagState mudag_init(const Problem& p, const Matrix& x0,
                      const MudagParams& prm, bool tracking_form);

// Direct form. With g the gradient block at y_t:
//   x_{t+1} = FastMix(y_t + (x_t - y_{t-1}) - eta (g - g_prev), K)
//   y_{t+1} = x_{t+1} + beta (x_{t+1} - x_t)
// Counters: +1 gradient round, +K communication rounds.
void mudag_step(const Problem& p, const MixingMatrix& w,
                const MudagParams& prm, MudagState& st);

// Tracking form, equivalent iterate-for-iterate to the direct form:
//   x_{t+1} = FastMix(y_t, K) - FastMix(s_t, K)
//   y_{t+1} = x_{t+1} + beta (x_{t+1} - x_t)
//   s_{t+1} = FastMix(s_t, K) + eta (g_{t+1} - g_t) - (FastMix(y_t, K) - y_t)
// Counters: +1 gradient round, +2K communication rounds (two gossip calls).
void mudag_step_tracking(const Problem& p, const MixingMatrix& w,
                         const MudagParams& prm, MudagState& st);

// Runs T outer iterations from x0 (zeros when null), recording one trace row
// at t = 0 and after each step. With a reference, f_gap, dist_to_opt_sq and
// the potential V_t are filled; without one they are NaN and only the
// non-finite divergence check applies.
RunResult run_mudag(const Problem& p, const MixingMatrix& w,
                    const MudagOptions& opt, const Reference* ref = nullptr,
                    const Matrix* x0 = nullptr);

// Worst-case gossip budget: the smallest K with (1 - sqrt(1 - lambda2))^K
// <= rho, where rho is the largest contraction admitted by the convergence
// certificate. theta needs a reference minimizer; without one the optimistic
// theta = 1 is used and certified stays false.
struct TheoreticalK {
  int K = 1;
  double rho = 0.0;
  double theta = 1.0;
  bool theta_certified = false;
};

TheoreticalK theoretical_K(const Problem& p, const MixingMatrix& w,
                           const std::vector<double>* xbar0 = nullptr,
                           const Reference* ref = nullptr);

// 3x3 nonnegative comparison matrix bounding how the consensus errors of
// (x, y, s/(M eta)) propagate across one outer iteration, given the gossip
// contraction rho and the smoothness product m_eta = M * eta. Primitive for
// rho > 0, so its Perron data is computed by power iteration.
struct ErrorGain {
  double rho = 0.0;
  double m_eta = 0.0;
  double A[3][3] = {};
  double lambda1 = 0.0;         // Perron root
  std::array<double, 3> v{};    // Perron vector scaled so v[2] = 1
  long power_iters = 0;
};

// Throws std::runtime_error when rho <= 0 or m_eta <= 0.
ErrorGain error_gain(double rho, double m_eta);

// Geometric-decay certificate for the error recursion. Every flag carries a
// 1e-10 additive tolerance. The entry bounds are guaranteed by the analysis
// only for m_eta >= 1 and rho <= rho_bound.
struct ErrorGainReport {
  double rho_bound = 0.0;        // 1/(2(21 me + 6 me^2 + 1)(3 + 2 me))
  bool rho_admissible = false;   // rho <= rho_bound
  bool lambda_le_half = false;   // lambda1 <= 1/2
  bool sqrt_rho_below = false;   // sqrt(rho) < lambda1
  bool v1_small = false;         // v[0] <= v[2] / (2(7 + 2 me))
  bool v2_small = false;  // v[1] <= (1/(2 sqrt(rho)(7+2 me)) + me/sqrt(rho)) v[2]

  bool all_ok() const {
    return rho_admissible && lambda_le_half && sqrt_rho_below && v1_small &&
           v2_small;
  }
};

ErrorGainReport check_error_gain(const ErrorGain& g);

// The error vector the gain matrix acts on:
// (||x - 1 xbar||, ||y - 1 ybar||, ||s - 1 sbar|| / m_eta).
std::array<double, 3> error_vector(const Matrix& x, const Matrix& y,
                                   const Matrix& s, double m_eta);

}  // namespace mudag
