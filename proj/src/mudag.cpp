#include "mudag/mudag.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <utility>

#include "mudag/consensus.hpp"

namespace mudag {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

MudagParams resolve_params(const MudagOptions& opt, const ProblemConstants& k) {
  MudagParams p;
  p.eta = opt.eta > 0.0 ? opt.eta : 1.0 / k.L;
  p.alpha =
      opt.alpha > 0.0 ? opt.alpha : std::min(std::sqrt(k.mu / k.L), 0.999);
  if (!(p.eta > 0.0) || !std::isfinite(p.eta))
    throw std::runtime_error("mudag: step size must be positive and finite");
  if (!(p.alpha > 0.0 && p.alpha < 1.0))
    throw std::runtime_error("mudag: momentum root must lie in (0, 1)");
  if (opt.K < 0) throw std::runtime_error("mudag: K must be >= 0");
  if (opt.T < 0) throw std::runtime_error("mudag: T must be >= 0");
  p.beta = (1.0 - p.alpha) / (1.0 + p.alpha);
  p.K = opt.K;
  p.alpha_above_half = p.alpha > 0.5;
  return p;
}

MudagState mudag_init(const Problem& p, const Matrix& x0,
                      const MudagParams& prm, bool tracking_form) {
  const int m = p.agents(), d = p.dim();
  if (x0.rows() != m || x0.cols() != d)
    throw std::runtime_error("mudag: x0 must be agents x dim");
  MudagState st;
  st.x = replicate_row(row_mean(x0), m);
  st.y = st.x;
  st.g_y = Matrix(m, d);
  if (tracking_form) {
    p.aggregate_grad(st.y, st.g_y);
    st.grad_evals = 1;
    st.s = st.g_y;
    for (double& v : st.s.flat()) v *= prm.eta;
  } else {
    st.y_prev = st.x;
    st.g_prev = Matrix(m, d);
  }
  return st;
}

void mudag_step(const Problem& p, const MixingMatrix& w,
                const MudagParams& prm, MudagState& st) {
  p.aggregate_grad(st.y, st.g_y);
  ++st.grad_evals;

  Matrix u(st.x.rows(), st.x.cols());
  {
    const std::vector<double>& x = st.x.flat();
    const std::vector<double>& y = st.y.flat();
    const std::vector<double>& yp = st.y_prev.flat();
    const std::vector<double>& g = st.g_y.flat();
    const std::vector<double>& gp = st.g_prev.flat();
    std::vector<double>& uf = u.flat();
    for (std::size_t i = 0; i < uf.size(); ++i)
      uf[i] = y[i] + (x[i] - yp[i]) - prm.eta * (g[i] - gp[i]);
  }
  Matrix xn = fastmix(u, w, prm.K, &st.comm_rounds);

  std::swap(st.y_prev, st.y);
  std::swap(st.g_prev, st.g_y);
  lincomb(xn, prm.beta, xn, -prm.beta, st.x, st.y);
  st.x = std::move(xn);
  ++st.t;
}

void mudag_step_tracking(const Problem& p, const MixingMatrix& w,
                         const MudagParams& prm, MudagState& st) {
  Matrix my = fastmix(st.y, w, prm.K, &st.comm_rounds);
  Matrix ms = fastmix(st.s, w, prm.K, &st.comm_rounds);

  Matrix xn(st.x.rows(), st.x.cols());
  lincomb(my, -1.0, ms, 0.0, ms, xn);

  Matrix yn(st.x.rows(), st.x.cols());
  lincomb(xn, prm.beta, xn, -prm.beta, st.x, yn);

  Matrix gn(st.x.rows(), st.x.cols());
  p.aggregate_grad(yn, gn);
  ++st.grad_evals;

  {
    std::vector<double>& msf = ms.flat();
    const std::vector<double>& myf = my.flat();
    const std::vector<double>& yf = st.y.flat();
    const std::vector<double>& gnf = gn.flat();
    const std::vector<double>& gyf = st.g_y.flat();
    for (std::size_t i = 0; i < msf.size(); ++i)
      msf[i] += prm.eta * (gnf[i] - gyf[i]) - (myf[i] - yf[i]);
  }
  st.s = std::move(ms);
  st.x = std::move(xn);
  st.y = std::move(yn);
  st.g_y = std::move(gn);
  ++st.t;
}

RunResult run_mudag(const Problem& p, const MixingMatrix& w,
                    const MudagOptions& opt, const Reference* ref,
                    const Matrix* x0) {
  const MudagParams prm = resolve_params(opt, p.constants());
  const int m = p.agents(), d = p.dim();
  const Matrix start = x0 ? *x0 : Matrix(m, d);
  MudagState st = mudag_init(p, start, prm, opt.tracking_form);

  RunResult out;
  const double mu = p.constants().mu;
  std::vector<double> xbar = row_mean(st.x);
  std::vector<double> xbar_prev = xbar;

  auto record = [&]() -> TraceRecord {
    TraceRecord r;
    r.t = st.t;
    r.consensus_err = consensus_error(st.x);
    r.grad_evals = st.grad_evals;
    r.comm_rounds = st.comm_rounds;
    if (ref) {
      r.f_gap = p.global_value(xbar) - ref->f_star;
      double dist = 0.0;
      for (int i = 0; i < m; ++i) {
        const double* xi = st.x[i];
        for (int k = 0; k < d; ++k) {
          const double dd = xi[k] - ref->x_star[k];
          dist += dd * dd;
        }
      }
      r.dist_to_opt_sq = dist;
      double vq = 0.0;
      for (int k = 0; k < d; ++k) {
        const double vk = st.t == 0 ? xbar[k]
                                    : xbar_prev[k] + (xbar[k] - xbar_prev[k]) /
                                                         prm.alpha;
        const double dv = vk - ref->x_star[k];
        vq += dv * dv;
      }
      r.V_t = r.f_gap + 0.5 * mu * vq;
    } else {
      r.f_gap = kNaN;
      r.dist_to_opt_sq = kNaN;
      r.V_t = kNaN;
    }
    out.trace.push_back(r);
    return r;
  };

  const TraceRecord r0 = record();
  const double gap_floor = ref && r0.f_gap > 0.0 ? r0.f_gap : 1.0;
  const double gap_limit = opt.divergence_factor * gap_floor;

  for (long t = 0; t < opt.T; ++t) {
    if (opt.tracking_form)
      mudag_step_tracking(p, w, prm, st);
    else
      mudag_step(p, w, prm, st);
    xbar_prev.swap(xbar);
    xbar = row_mean(st.x);
    const TraceRecord r = record();
    bool bad = !all_finite(st.x) || !std::isfinite(r.consensus_err);
    if (ref && (!std::isfinite(r.f_gap) || r.f_gap > gap_limit)) bad = true;
    if (bad) {
      out.diverged_at = st.t;
      break;
    }
  }

  out.x = std::move(st.x);
  out.xbar = std::move(xbar);
  out.grad_evals = st.grad_evals;
  out.comm_rounds = st.comm_rounds;
  return out;
}

TheoreticalK theoretical_K(const Problem& p, const MixingMatrix& w,
                           const std::vector<double>* xbar0,
                           const Reference* ref) {
  const ProblemConstants& k = p.constants();
  if (w.lambda2 >= 1.0)
    throw std::runtime_error("theoretical_K: network is disconnected");
  const double alpha = std::min(std::sqrt(k.mu / k.L), 0.999);

  TheoreticalK out;
  if (ref) {
    const std::vector<double> x0 =
        xbar0 ? *xbar0 : std::vector<double>(p.dim(), 0.0);
    const std::vector<double> g0 = p.global_grad(x0);
    const std::vector<double> gs = p.global_grad(ref->x_star);
    double num = 0.0;
    for (std::size_t i = 0; i < g0.size(); ++i) {
      const double dg = g0[i] - gs[i];
      num += dg * dg;
    }
    double den = p.global_value(x0) - ref->f_star;
    double vq = 0.0;
    for (std::size_t i = 0; i < x0.size(); ++i) {
      const double dv = x0[i] / alpha - ref->x_star[i];
      vq += dv * dv;
    }
    den += 0.5 * k.mu * vq;
    if (num > 0.0 && den > 0.0)
      out.theta = 1.0 + k.mu / (288.0 * p.agents()) * num / den;
    out.theta_certified = true;
  }

  const double mt = k.M * out.theta;
  const double sqrt_rho = k.mu * alpha / (2304.0 * k.L) *
                          std::min(2.0 * k.L / mt, k.L * k.L / (mt * mt));
  out.rho = sqrt_rho * sqrt_rho;

  const double b = 1.0 - std::sqrt(1.0 - w.lambda2);
  if (b <= 0.0) {
    out.K = 1;
    return out;
  }
  const double kd = std::ceil(std::log(out.rho) / std::log(b));
  if (kd >= 2e9)
    throw std::runtime_error(
        "theoretical_K: required K overflows (network nearly disconnected)");
  out.K = std::max(1, int(kd));
  return out;
}

ErrorGain error_gain(double rho, double m_eta) {
  if (!(rho > 0.0))
    throw std::runtime_error("error_gain: rho must be positive");
  if (!(m_eta > 0.0))
    throw std::runtime_error("error_gain: m_eta must be positive");

  ErrorGain g;
  g.rho = rho;
  g.m_eta = m_eta;
  const double me = m_eta;
  const double A[3][3] = {{2.0 * rho, rho, 2.0 * rho * me},
                          {1.0, 0.0, me},
                          {7.0 + 2.0 * me, rho, rho * (1.0 + 2.0 * rho * me)}};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) g.A[i][j] = A[i][j];

  auto matvec = [&](const std::array<double, 3>& v) {
    std::array<double, 3> r{};
    for (int i = 0; i < 3; ++i)
      r[i] = A[i][0] * v[0] + A[i][1] * v[1] + A[i][2] * v[2];
    return r;
  };
  auto nrm = [](const std::array<double, 3>& v) {
    return std::sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2]);
  };

  // The matrix is primitive (all entries of its square are positive), so
  // power iteration from a positive vector converges to the Perron pair.
  const double inv3 = 1.0 / std::sqrt(3.0);
  std::array<double, 3> v{inv3, inv3, inv3};
  double lam = 0.0;
  const long cap = 200000;
  for (long it = 0; it < cap; ++it) {
    const std::array<double, 3> av = matvec(v);
    lam = v[0] * av[0] + v[1] * av[1] + v[2] * av[2];
    const std::array<double, 3> res{av[0] - lam * v[0], av[1] - lam * v[1],
                                    av[2] - lam * v[2]};
    const double rn = nrm(res);
    const double an = nrm(av);
    v = {av[0] / an, av[1] / an, av[2] / an};
    g.power_iters = it + 1;
    if (rn <= 1e-14 * std::max(lam, 1e-300)) break;
  }
  const std::array<double, 3> av = matvec(v);
  g.lambda1 = v[0] * av[0] + v[1] * av[1] + v[2] * av[2];
  g.v = {v[0] / v[2], v[1] / v[2], 1.0};
  return g;
}

ErrorGainReport check_error_gain(const ErrorGain& g) {
  constexpr double tol = 1e-10;
  const double me = g.m_eta;
  ErrorGainReport r;
  r.rho_bound =
      1.0 / (2.0 * (21.0 * me + 6.0 * me * me + 1.0) * (3.0 + 2.0 * me));
  r.rho_admissible = g.rho <= r.rho_bound + tol;
  r.lambda_le_half = g.lambda1 <= 0.5 + tol;
  const double sr = std::sqrt(g.rho);
  r.sqrt_rho_below = sr < g.lambda1 + tol;
  r.v1_small = g.v[0] <= g.v[2] / (2.0 * (7.0 + 2.0 * me)) + tol;
  r.v2_small =
      g.v[1] <=
      (1.0 / (2.0 * sr * (7.0 + 2.0 * me)) + me / sr) * g.v[2] + tol;
  return r;
}

std::array<double, 3> error_vector(const Matrix& x, const Matrix& y,
                                   const Matrix& s, double m_eta) {
  return {consensus_error(x), consensus_error(y),
          consensus_error(s) / m_eta};
}

}  // namespace mudag
