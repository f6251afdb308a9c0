#include "mudag/baselines.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "mudag/consensus.hpp"

namespace mudag {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Shared trace bookkeeping: fills one record per call, tracks the running
// average for the potential, and flags divergence (non-finite values or a
// gap beyond divergence_factor x initial). alpha = 0 disables V_t.
class Recorder {
 public:
  Recorder(const Problem& p, const Reference* ref, double alpha,
           double divergence_factor, RunResult& out)
      : p_(p), ref_(ref), alpha_(alpha), factor_(divergence_factor),
        out_(out) {}

  // Returns false when the run should stop; the record is always appended.
  bool record(const Matrix& x, long t, long grad_evals, long comm_rounds) {
    if (first_) {
      xbar_ = row_mean(x);
      xbar_prev_ = xbar_;
    } else {
      xbar_prev_.swap(xbar_);
      xbar_ = row_mean(x);
    }
    TraceRecord r;
    r.t = t;
    r.consensus_err = consensus_error(x);
    r.grad_evals = grad_evals;
    r.comm_rounds = comm_rounds;
    if (ref_) {
      r.f_gap = p_.global_value(xbar_) - ref_->f_star;
      double dist = 0.0;
      for (int i = 0; i < x.rows(); ++i) {
        const double* xi = x[i];
        for (int k = 0; k < x.cols(); ++k) {
          const double dd = xi[k] - ref_->x_star[k];
          dist += dd * dd;
        }
      }
      r.dist_to_opt_sq = dist;
      if (alpha_ > 0.0) {
        double vq = 0.0;
        for (std::size_t k = 0; k < xbar_.size(); ++k) {
          const double vk =
              first_ ? xbar_[k]
                     : xbar_prev_[k] + (xbar_[k] - xbar_prev_[k]) / alpha_;
          const double dv = vk - ref_->x_star[k];
          vq += dv * dv;
        }
        r.V_t = r.f_gap + 0.5 * p_.constants().mu * vq;
      } else {
        r.V_t = kNaN;
      }
    } else {
      r.f_gap = kNaN;
      r.dist_to_opt_sq = kNaN;
      r.V_t = kNaN;
    }
    out_.trace.push_back(r);
    if (first_) {
      first_ = false;
      gap_limit_ = factor_ * (ref_ && r.f_gap > 0.0 ? r.f_gap : 1.0);
    }
    bool bad = !all_finite(x) || !std::isfinite(r.consensus_err);
    if (ref_ && (!std::isfinite(r.f_gap) || r.f_gap > gap_limit_)) bad = true;
    if (bad) out_.diverged_at = t;
    return !bad;
  }

  const std::vector<double>& xbar() const { return xbar_; }

 private:
  const Problem& p_;
  const Reference* ref_;
  double alpha_;
  double factor_;
  RunResult& out_;
  std::vector<double> xbar_, xbar_prev_;
  double gap_limit_ = kInf;
  bool first_ = true;
};

void finish(RunResult& out, Matrix x, Recorder& rec, long grad_evals,
            long comm_rounds) {
  out.x = std::move(x);
  out.xbar = rec.xbar();
  out.grad_evals = grad_evals;
  out.comm_rounds = comm_rounds;
}

}  // namespace

RunResult run_agd(const Problem& p, const BaselineOptions& opt,
                  const Reference* ref, const std::vector<double>* x0) {
  const ProblemConstants& k = p.constants();
  const int d = p.dim();
  const double eta = opt.eta > 0.0 ? opt.eta : 1.0 / k.L;
  const double alpha =
      opt.alpha > 0.0 ? opt.alpha : std::min(std::sqrt(k.mu / k.L), 0.999);
  if (!(alpha > 0.0 && alpha < 1.0))
    throw std::runtime_error("agd: momentum root must lie in (0, 1)");
  const double beta = (1.0 - alpha) / (1.0 + alpha);

  Matrix x(1, d);
  if (x0) {
    if (int(x0->size()) != d)
      throw std::runtime_error("agd: x0 dimension mismatch");
    for (int i = 0; i < d; ++i) x(0, i) = (*x0)[i];
  }
  Matrix y = x;

  RunResult out;
  Recorder rec(p, ref, alpha, opt.divergence_factor, out);
  long grads = 0;
  if (!rec.record(x, 0, grads, 0)) {
    finish(out, std::move(x), rec, grads, 0);
    return out;
  }
  std::vector<double> g(d), yv(d);
  for (long t = 0; t < opt.T; ++t) {
    for (int i = 0; i < d; ++i) yv[i] = y(0, i);
    g = p.global_grad(yv);
    ++grads;
    Matrix xn(1, d);
    for (int i = 0; i < d; ++i) xn(0, i) = y(0, i) - eta * g[i];
    for (int i = 0; i < d; ++i)
      y(0, i) = xn(0, i) + beta * (xn(0, i) - x(0, i));
    x = std::move(xn);
    if (!rec.record(x, t + 1, grads, 0)) break;
  }
  finish(out, std::move(x), rec, grads, 0);
  return out;
}

RunResult run_dgd(const Problem& p, const MixingMatrix& w,
                  const BaselineOptions& opt, const Reference* ref,
                  const Matrix* x0) {
  const int m = p.agents(), d = p.dim();
  const double eta = opt.eta > 0.0 ? opt.eta : 1.0 / p.constants().M;
  if (opt.K_mix < 0) throw std::runtime_error("dgd: K_mix must be >= 0");

  Matrix x = x0 ? *x0 : Matrix(m, d);
  if (x.rows() != m || x.cols() != d)
    throw std::runtime_error("dgd: x0 must be agents x dim");

  RunResult out;
  Recorder rec(p, ref, 0.0, opt.divergence_factor, out);
  long grads = 0, comm = 0;
  if (!rec.record(x, 0, grads, comm)) {
    finish(out, std::move(x), rec, grads, comm);
    return out;
  }
  Matrix g(m, d);
  for (long t = 0; t < opt.T; ++t) {
    p.aggregate_grad(x, g);
    ++grads;
    Matrix mixed = plain_mix(x, w, opt.K_mix, &comm);
    lincomb(mixed, -eta, g, 0.0, g, x);
    if (!rec.record(x, t + 1, grads, comm)) break;
  }
  finish(out, std::move(x), rec, grads, comm);
  return out;
}

RunResult run_extra(const Problem& p, const MixingMatrix& w,
                    const BaselineOptions& opt, const Reference* ref,
                    const Matrix* x0) {
  const int m = p.agents(), d = p.dim();
  const double eta = opt.eta > 0.0 ? opt.eta : 1.0 / p.constants().M;

  Matrix x_prev = x0 ? *x0 : Matrix(m, d);
  if (x_prev.rows() != m || x_prev.cols() != d)
    throw std::runtime_error("extra: x0 must be agents x dim");

  RunResult out;
  Recorder rec(p, ref, 0.0, opt.divergence_factor, out);
  long grads = 0, comm = 0;
  if (!rec.record(x_prev, 0, grads, comm) || opt.T == 0) {
    finish(out, std::move(x_prev), rec, grads, comm);
    return out;
  }

  Matrix g_prev(m, d);
  p.aggregate_grad(x_prev, g_prev);
  ++grads;
  Matrix wx_prev(m, d);
  apply_mixing(w.W, x_prev, wx_prev);
  ++comm;
  Matrix x(m, d);
  lincomb(wx_prev, -eta, g_prev, 0.0, g_prev, x);
  bool ok = rec.record(x, 1, grads, comm);

  Matrix g(m, d), wx(m, d);
  for (long t = 1; ok && t < opt.T; ++t) {
    p.aggregate_grad(x, g);
    ++grads;
    apply_mixing(w.W, x, wx);
    ++comm;
    // x_next = x + W x - (x_prev + W x_prev)/2 - eta (g - g_prev)
    Matrix xn(m, d);
    {
      std::vector<double>& o = xn.flat();
      const std::vector<double>& xf = x.flat();
      const std::vector<double>& wxf = wx.flat();
      const std::vector<double>& xpf = x_prev.flat();
      const std::vector<double>& wxpf = wx_prev.flat();
      const std::vector<double>& gf = g.flat();
      const std::vector<double>& gpf = g_prev.flat();
      for (std::size_t i = 0; i < o.size(); ++i)
        o[i] = xf[i] + wxf[i] - 0.5 * (xpf[i] + wxpf[i]) -
               eta * (gf[i] - gpf[i]);
    }
    x_prev = std::move(x);
    std::swap(wx_prev, wx);
    std::swap(g_prev, g);
    x = std::move(xn);
    ok = rec.record(x, t + 1, grads, comm);
  }
  finish(out, std::move(x), rec, grads, comm);
  return out;
}

RunResult run_nids(const Problem& p, const MixingMatrix& w,
                   const BaselineOptions& opt, const Reference* ref,
                   const Matrix* x0) {
  const int m = p.agents(), d = p.dim();
  const double eta = opt.eta > 0.0 ? opt.eta : 1.0 / p.constants().M;

  Matrix x_prev = x0 ? *x0 : Matrix(m, d);
  if (x_prev.rows() != m || x_prev.cols() != d)
    throw std::runtime_error("nids: x0 must be agents x dim");

  RunResult out;
  Recorder rec(p, ref, 0.0, opt.divergence_factor, out);
  long grads = 0, comm = 0;
  if (!rec.record(x_prev, 0, grads, comm) || opt.T == 0) {
    finish(out, std::move(x_prev), rec, grads, comm);
    return out;
  }

  Matrix g_prev(m, d);
  p.aggregate_grad(x_prev, g_prev);
  ++grads;
  Matrix x(m, d);
  apply_mixing(w.W, x_prev, x);
  ++comm;
  lincomb(x, -eta, g_prev, 0.0, g_prev, x);
  bool ok = rec.record(x, 1, grads, comm);

  Matrix g(m, d), z(m, d), wz(m, d);
  for (long t = 1; ok && t < opt.T; ++t) {
    p.aggregate_grad(x, g);
    ++grads;
    // z = 2x - x_prev - eta (g - g_prev); x_next = (z + W z)/2
    {
      std::vector<double>& zf = z.flat();
      const std::vector<double>& xf = x.flat();
      const std::vector<double>& xpf = x_prev.flat();
      const std::vector<double>& gf = g.flat();
      const std::vector<double>& gpf = g_prev.flat();
      for (std::size_t i = 0; i < zf.size(); ++i)
        zf[i] = 2.0 * xf[i] - xpf[i] - eta * (gf[i] - gpf[i]);
    }
    apply_mixing(w.W, z, wz);
    ++comm;
    x_prev = std::move(x);
    x = Matrix(m, d);
    lincomb(z, 1.0, wz, 0.0, wz, x);
    for (double& v : x.flat()) v *= 0.5;
    std::swap(g_prev, g);
    ok = rec.record(x, t + 1, grads, comm);
  }
  finish(out, std::move(x), rec, grads, comm);
  return out;
}

TunedRun tune_step_size(const std::function<RunResult(double)>& runner,
                        double M, double eps_rel, int grid) {
  if (!(M > 0.0)) throw std::runtime_error("tune: M must be positive");
  if (grid < 1) throw std::runtime_error("tune: empty grid");

  TunedRun best;
  bool have = false;
  // Lexicographic key: diverged flag, first t reaching the target, final gap.
  auto better = [](bool d1, long r1, double f1, bool d2, long r2, double f2) {
    if (d1 != d2) return !d1;
    const long a = r1 < 0 ? std::numeric_limits<long>::max() : r1;
    const long b = r2 < 0 ? std::numeric_limits<long>::max() : r2;
    if (a != b) return a < b;
    return f1 < f2;
  };

  for (int k = 0; k < grid; ++k) {
    const double eta = std::ldexp(1.0, -k) / M;
    RunResult res = runner(eta);
    if (res.trace.empty() || !std::isfinite(res.trace[0].f_gap))
      throw std::runtime_error("tune: runs must carry a reference f_gap");
    const double target =
        eps_rel * std::max(res.trace[0].f_gap,
                           std::numeric_limits<double>::min());
    long reached = -1;
    double final_gap = kInf;
    for (const TraceRecord& r : res.trace) {
      if (!std::isfinite(r.f_gap)) continue;
      final_gap = r.f_gap;
      if (reached < 0 && r.f_gap <= target) reached = r.t;
    }
    const bool div = res.diverged();
    if (!have || better(div, reached, final_gap, best.result.diverged(),
                        best.reached_t, best.final_gap)) {
      best.eta = eta;
      best.grid_index = k;
      best.reached_t = reached;
      best.final_gap = final_gap;
      best.result = std::move(res);
      have = true;
    }
  }
  return best;
}

}  // namespace mudag
