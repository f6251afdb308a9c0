#include "doctest.h"

#include <Eigen/Dense>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "mudag/baselines.hpp"
#include "mudag/consensus.hpp"
#include "mudag/graph.hpp"
#include "mudag/logistic.hpp"
#include "mudag/matrix.hpp"
#include "mudag/mudag.hpp"
#include "mudag/quadratic.hpp"
#include "mudag/rng.hpp"
#include "mudag/solve_ref.hpp"

using namespace mudag;

namespace {

Reference make_reference(const Problem& p) {
  RefSolution s = solve_reference(p);
  return Reference{s.x, s.f_star};
}

LogisticProblem small_logistic(std::uint64_t seed) {
  Dataset data = synth_binary(3 * 20, 5, seed);
  RowPartition part = partition_rows(data, 3, 20, seed + 1);
  return LogisticProblem(std::move(part.shards), sigma_uniform(3, 0.1));
}

// Walks the tracking form, checking the mean-dynamics identities after every
// step: the row means of (x, y, s) evolve exactly like centralized Nesterov
// with its gradient estimator, independent of the gossip budget.
void check_mean_identities(const Problem& p, const MixingMatrix& w, int K,
                           long steps, bool tracking) {
  MudagOptions opt;
  opt.K = K;
  const MudagParams prm = resolve_params(opt, p.constants());
  const int d = p.dim();

  Matrix x0(p.agents(), d);
  Rng rng(91);
  for (double& v : x0.flat()) v = rng.normal();
  MudagState st = mudag_init(p, x0, prm, tracking);

  std::vector<double> xbar = row_mean(st.x);
  std::vector<double> vbar = xbar;  // momentum-average state, v_0 = xbar_0
  Matrix gscratch(p.agents(), d);

  auto close = [](double a, double b) {
    return std::abs(a - b) <= 1e-11 * (1.0 + std::abs(b));
  };

  for (long t = 0; t < steps; ++t) {
    std::vector<double> ybar = row_mean(st.y);

    // The interpolation identity: ybar = (xbar + alpha vbar) / (1 + alpha).
    for (int k = 0; k < d; ++k)
      CHECK(close(ybar[k], (xbar[k] + prm.alpha * vbar[k]) / (1.0 + prm.alpha)));

    std::vector<double> gbar;
    std::vector<double> sbar;
    if (tracking) {
      gbar = row_mean(st.g_y);
      sbar = row_mean(st.s);
      // The tracker's mean is the scaled mean gradient: sbar = eta gbar.
      for (int k = 0; k < d; ++k) CHECK(close(sbar[k], prm.eta * gbar[k]));
    } else {
      p.aggregate_grad(st.y, gscratch);
      gbar = row_mean(gscratch);
      sbar.resize(d);
      for (int k = 0; k < d; ++k) sbar[k] = prm.eta * gbar[k];
    }

    if (tracking)
      mudag_step_tracking(p, w, prm, st);
    else
      mudag_step(p, w, prm, st);

    std::vector<double> xbar_next = row_mean(st.x);
    // Mean descent step: xbar_{t+1} = ybar_t - eta gbar_t.
    for (int k = 0; k < d; ++k)
      CHECK(close(xbar_next[k], ybar[k] - prm.eta * gbar[k]));

    // Momentum-average recursion:
    // vbar_{t+1} = (1 - alpha) vbar_t + alpha ybar_t - (1/alpha) sbar_t.
    std::vector<double> vbar_next(d);
    for (int k = 0; k < d; ++k) {
      vbar_next[k] = xbar[k] + (xbar_next[k] - xbar[k]) / prm.alpha;
      CHECK(close(vbar_next[k], (1.0 - prm.alpha) * vbar[k] +
                                    prm.alpha * ybar[k] - sbar[k] / prm.alpha));
    }
    xbar = std::move(xbar_next);
    vbar = std::move(vbar_next);
  }
}

}  // namespace

TEST_CASE("parameter resolution applies defaults and validates inputs") {
  ProblemConstants k{1.0, 25.0, 30.0, std::nullopt};
  MudagOptions opt;
  MudagParams p = resolve_params(opt, k);
  CHECK(p.eta == doctest::Approx(1.0 / 25.0).epsilon(1e-15));
  CHECK(p.alpha == doctest::Approx(0.2).epsilon(1e-15));
  CHECK(p.beta == doctest::Approx(0.8 / 1.2).epsilon(1e-15));
  CHECK(p.K == 4);
  CHECK(!p.alpha_above_half);

  opt.eta = 0.5;
  opt.alpha = 0.75;
  p = resolve_params(opt, k);
  CHECK(p.eta == 0.5);
  CHECK(p.alpha == 0.75);
  CHECK(p.alpha_above_half);

  // A nearly unconditioned problem caps alpha below 1.
  ProblemConstants flat{10.0, 10.0, 10.0, std::nullopt};
  MudagOptions d;
  CHECK(resolve_params(d, flat).alpha == doctest::Approx(0.999));

  MudagOptions bad;
  bad.alpha = 1.5;
  CHECK_THROWS_AS(resolve_params(bad, k), std::runtime_error);
  bad = MudagOptions{};
  bad.K = -1;
  CHECK_THROWS_AS(resolve_params(bad, k), std::runtime_error);
  bad = MudagOptions{};
  bad.T = -5;
  CHECK_THROWS_AS(resolve_params(bad, k), std::runtime_error);
}

TEST_CASE("initial state replicates the mean and flattens the momentum") {
  QuadraticProblem p = random_quadratic(5, 3, 1.0, 10.0, 0.3, 2);
  MudagOptions opt;
  MudagParams prm = resolve_params(opt, p.constants());
  Matrix x0(5, 3);
  Rng rng(4);
  for (double& v : x0.flat()) v = rng.normal();
  std::vector<double> mean = row_mean(x0);

  MudagState st = mudag_init(p, x0, prm, false);
  CHECK(consensus_error(st.x) == 0.0);
  for (int i = 0; i < 5; ++i)
    for (int k = 0; k < 3; ++k) CHECK(st.x(i, k) == mean[k]);
  CHECK(frobenius_dist(st.y, st.x) == 0.0);
  CHECK(frobenius_dist(st.y_prev, st.x) == 0.0);
  CHECK(frobenius_norm(st.g_prev) == 0.0);
  CHECK(st.grad_evals == 0);

  MudagState tr = mudag_init(p, x0, prm, true);
  CHECK(tr.grad_evals == 1);
  Matrix g = p.aggregate_grad(tr.y);
  for (std::size_t i = 0; i < g.size(); ++i)
    CHECK(tr.s.flat()[i] == doctest::Approx(prm.eta * g.flat()[i]).epsilon(1e-15));

  Matrix wrong(4, 3);
  CHECK_THROWS_AS(mudag_init(p, wrong, prm, false), std::runtime_error);
}

TEST_CASE("direct and tracking forms produce the same iterates") {
  QuadraticProblem p = random_quadratic(4, 3, 1.0, 12.0, 0.5, 6);
  MixingMatrix w = build_mixing(make_ring(4));
  MudagOptions opt;
  opt.K = 2;
  const MudagParams prm = resolve_params(opt, p.constants());

  Matrix x0(4, 3);
  Rng rng(13);
  for (double& v : x0.flat()) v = rng.normal();
  MudagState a = mudag_init(p, x0, prm, false);
  MudagState b = mudag_init(p, x0, prm, true);

  for (int t = 0; t < 60; ++t) {
    mudag_step(p, w, prm, a);
    mudag_step_tracking(p, w, prm, b);
    const double scale = 1.0 + frobenius_norm(a.x);
    CHECK(frobenius_dist(a.x, b.x) <= 1e-9 * scale);
    CHECK(frobenius_dist(a.y, b.y) <= 1e-9 * scale);
  }

  // End-to-end runner comparison on a logistic instance.
  LogisticProblem lp = small_logistic(7);
  MixingMatrix lw =
      build_mixing(erdos_renyi_connected(lp.agents(), 0.8, 3).graph);
  Reference ref = make_reference(lp);
  MudagOptions ro;
  ro.K = 3;
  ro.T = 50;
  RunResult direct = run_mudag(lp, lw, ro, &ref);
  ro.tracking_form = true;
  RunResult tracking = run_mudag(lp, lw, ro, &ref);
  REQUIRE(direct.trace.size() == tracking.trace.size());
  CHECK(frobenius_dist(direct.x, tracking.x) <=
        1e-8 * (1.0 + frobenius_norm(direct.x)));
  for (std::size_t i = 0; i < direct.trace.size(); ++i) {
    CHECK(std::abs(direct.trace[i].f_gap - tracking.trace[i].f_gap) <=
          1e-8 * (1.0 + std::abs(direct.trace[i].f_gap)));
    CHECK(std::abs(direct.trace[i].consensus_err -
                   tracking.trace[i].consensus_err) <= 1e-8);
  }
}

TEST_CASE("mean dynamics identities hold for both forms and problems") {
  QuadraticProblem quad = random_quadratic(6, 4, 1.0, 10.0, 0.4, 8);
  MixingMatrix wq = build_mixing(erdos_renyi_connected(6, 0.6, 2).graph);
  LogisticProblem logi = small_logistic(11);
  MixingMatrix wl =
      build_mixing(erdos_renyi_connected(logi.agents(), 0.9, 1).graph);

  for (bool tracking : {false, true})
    for (int K : {1, 4}) {
      check_mean_identities(quad, wq, K, 80, tracking);
      check_mean_identities(logi, wl, K, 80, tracking);
    }
}

TEST_CASE("complete graph with K = 1 reduces to centralized acceleration") {
  QuadraticProblem p = random_quadratic(5, 3, 1.0, 16.0, 0.5, 9);
  MixingMatrix w = build_mixing(make_complete(5));
  Reference ref = make_reference(p);

  MudagOptions opt;
  opt.K = 1;
  opt.T = 200;
  RunResult dec = run_mudag(p, w, opt, &ref);

  BaselineOptions agd_opt;
  agd_opt.T = 200;
  RunResult cen = run_agd(p, agd_opt, &ref);

  REQUIRE(dec.trace.size() == cen.trace.size());
  for (std::size_t i = 0; i < dec.trace.size(); ++i) {
    CHECK(dec.trace[i].consensus_err <= 1e-12);
    CHECK(std::abs(dec.trace[i].f_gap - cen.trace[i].f_gap) <=
          1e-12 * (1.0 + std::abs(cen.trace[i].f_gap)));
  }
  for (int k = 0; k < p.dim(); ++k)
    CHECK(dec.xbar[k] == doctest::Approx(cen.xbar[k]).epsilon(1e-12));
}

TEST_CASE("zero gradient at a consensus start is a fixed point") {
  // Identical agents, so every local gradient vanishes at the common
  // minimizer and the whole state must stay put.
  const int m = 4, d = 3;
  Matrix h(d, d);
  h(0, 0) = 2.0;
  h(1, 1) = 5.0;
  h(2, 2) = 1.0;
  Matrix c(m, d);
  for (int i = 0; i < m; ++i) {
    c(i, 0) = 2.0;
    c(i, 1) = -5.0;
    c(i, 2) = 0.5;
  }
  QuadraticProblem p({h, h, h, h}, c);
  std::vector<double> xstar = p.closed_form_minimizer();
  Matrix x0 = replicate_row(xstar, m);
  MixingMatrix w = build_mixing(make_ring(m));

  MudagOptions opt;
  opt.K = 3;
  opt.T = 25;
  RunResult r = run_mudag(p, w, opt, nullptr, &x0);
  CHECK(frobenius_dist(r.x, x0) <= 1e-12);
  CHECK(!r.diverged());
}

TEST_CASE("gossip budget from the convergence certificate") {
  // lambda2 = 0 collapses the budget to a single round.
  QuadraticProblem p = random_quadratic(6, 3, 1.0, 10.0, 0.3, 3);
  MixingMatrix complete = build_mixing(make_complete(6));
  TheoreticalK tk = theoretical_K(p, complete);
  CHECK(tk.K == 1);
  CHECK(!tk.theta_certified);
  CHECK(tk.theta == 1.0);

  // Frozen arithmetic: kappa_g = 100, M/L = 2, gap such that the gossip base
  // is exactly 0.1. alpha = 0.1, sqrt(rho) = (0.1 / 230400) min(1, 1/4),
  // so K = ceil(ln rho / ln 0.1) = 14.
  {
    Matrix c(2, 2);
    Matrix h1(2, 2), h2(2, 2);
    h1(0, 0) = 1.0;
    h1(1, 1) = 200.0;
    h2(0, 0) = 1.0;
    h2(1, 1) = 0.0;
    QuadraticProblem frozen({h1, h2}, c);
    CHECK(frozen.constants().mu == doctest::Approx(1.0));
    CHECK(frozen.constants().L == doctest::Approx(100.0));
    CHECK(frozen.constants().M == doctest::Approx(200.0));

    MixingMatrix fake;
    fake.m = 2;
    fake.lambda2 = 0.19;  // 1 - sqrt(1 - 0.19) = 0.1
    TheoreticalK ft = theoretical_K(frozen, fake);
    const double sr = 0.1 / (2304.0 * 100.0) * 0.25;
    CHECK(ft.rho == doctest::Approx(sr * sr).epsilon(1e-13));
    CHECK(ft.K == 14);
  }

  // Starting at the minimizer certifies the optimistic curvature factor.
  Reference ref{p.closed_form_minimizer(),
                p.global_value(p.closed_form_minimizer())};
  MixingMatrix ring = build_mixing(make_ring(6));
  TheoreticalK at_opt = theoretical_K(p, ring, &ref.x_star, &ref);
  CHECK(at_opt.theta == 1.0);
  CHECK(at_opt.theta_certified);

  // Away from the minimizer the factor exceeds 1 and matches the formula.
  std::vector<double> x0(p.dim(), 2.0);
  TheoreticalK away = theoretical_K(p, ring, &x0, &ref);
  CHECK(away.theta_certified);
  {
    const double alpha = std::sqrt(p.constants().mu / p.constants().L);
    std::vector<double> g0 = p.global_grad(x0);
    std::vector<double> gs = p.global_grad(ref.x_star);
    double num = 0.0;
    for (std::size_t i = 0; i < g0.size(); ++i)
      num += (g0[i] - gs[i]) * (g0[i] - gs[i]);
    double den = p.global_value(x0) - ref.f_star;
    for (std::size_t i = 0; i < x0.size(); ++i) {
      const double dv = x0[i] / alpha - ref.x_star[i];
      den += 0.5 * p.constants().mu * dv * dv;
    }
    const double want = 1.0 + p.constants().mu / (288.0 * p.agents()) * num / den;
    CHECK(away.theta == doctest::Approx(want).epsilon(1e-12));
    CHECK(away.theta > 1.0);
    // A larger curvature factor can only shrink rho and grow K.
    CHECK(away.rho <= at_opt.rho);
    CHECK(away.K >= at_opt.K);
  }

  // Degenerate networks are rejected rather than looping or overflowing.
  MixingMatrix disconnected;
  disconnected.lambda2 = 1.0;
  CHECK_THROWS_AS(theoretical_K(p, disconnected), std::runtime_error);
  MixingMatrix near;
  near.lambda2 = 1.0 - 1e-18;
  CHECK_THROWS_AS(theoretical_K(p, near), std::runtime_error);
}

TEST_CASE("error gain matrix matches a general eigensolver") {
  for (double me : {1.0, 2.0, 5.0}) {
    const double bound =
        1.0 / (2.0 * (21.0 * me + 6.0 * me * me + 1.0) * (3.0 + 2.0 * me));
    for (int k = 0; k <= 6; ++k) {
      const double rho = bound * std::pow(10.0, -k);
      ErrorGain g = error_gain(rho, me);

      Eigen::Matrix3d A;
      A << 2.0 * rho, rho, 2.0 * rho * me, 1.0, 0.0, me, 7.0 + 2.0 * me, rho,
          rho * (1.0 + 2.0 * rho * me);
      for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
          CHECK(g.A[i][j] == doctest::Approx(A(i, j)).epsilon(1e-15));

      // The returned pair must satisfy its own eigen-equation tightly; this
      // is the solver's contract and is well conditioned at every rho.
      double vn = 0.0, rn = 0.0;
      for (int i = 0; i < 3; ++i) {
        double ri = -g.lambda1 * g.v[i];
        for (int j = 0; j < 3; ++j) ri += g.A[i][j] * g.v[j];
        rn += ri * ri;
        vn += g.v[i] * g.v[i];
      }
      CHECK(std::sqrt(rn) <= 1e-10 * g.lambda1 * std::sqrt(vn));

      // Agreement with an independent dense eigensolver. As rho shrinks the
      // three eigenvalues cluster (their relative separation decays like
      // rho^(1/3)), so cross-solver agreement is limited by conditioning,
      // not by either solver: measured divergence reaches ~1e-7 at the
      // smallest grid point. Tight comparison where the problem is well
      // separated, a conditioning-aware envelope everywhere.
      const double eps = k == 0 ? 1e-12 : 1e-6;
      Eigen::EigenSolver<Eigen::Matrix3d> es(A);
      int lead = 0;
      for (int i = 1; i < 3; ++i)
        if (es.eigenvalues()(i).real() > es.eigenvalues()(lead).real())
          lead = i;
      const double lam = es.eigenvalues()(lead).real();
      CHECK(std::abs(es.eigenvalues()(lead).imag()) <= 1e-12);
      CHECK(g.lambda1 == doctest::Approx(lam).epsilon(eps));

      Eigen::Vector3cd vec = es.eigenvectors().col(lead);
      for (int i = 0; i < 3; ++i) {
        const std::complex<double> scaled = vec(i) / vec(2);
        CHECK(std::abs(scaled.imag()) <= 1e-12);
        CHECK(g.v[i] == doctest::Approx(scaled.real()).epsilon(eps));
      }

      CHECK(g.power_iters >= 1);
      CHECK(check_error_gain(g).all_ok());
    }
  }

  // At the admissibility edge for m_eta = 1 the gain stays below 1/2.
  ErrorGain edge = error_gain(1.0 / 280.0, 1.0);
  ErrorGainReport rep = check_error_gain(edge);
  CHECK(rep.rho_bound == doctest::Approx(1.0 / 280.0).epsilon(1e-15));
  CHECK(rep.rho_admissible);
  CHECK(rep.lambda_le_half);
  CHECK(edge.lambda1 <= 0.5 + 1e-10);
  CHECK(rep.all_ok());

  // A rho above the admissible bound must be flagged.
  ErrorGain fat = error_gain(0.2, 1.0);
  CHECK(!check_error_gain(fat).rho_admissible);

  CHECK_THROWS_AS(error_gain(0.0, 1.0), std::runtime_error);
  CHECK_THROWS_AS(error_gain(1e-3, 0.0), std::runtime_error);
  CHECK_THROWS_AS(error_gain(-1.0, 1.0), std::runtime_error);
}

TEST_CASE("error vector components") {
  Matrix x = replicate_row({1.0, 2.0}, 3);
  Matrix y = x, s = x;
  std::array<double, 3> e = error_vector(x, y, s, 2.0);
  CHECK(e[0] == 0.0);
  CHECK(e[1] == 0.0);
  CHECK(e[2] == 0.0);

  y(0, 0) += 3.0;  // deviations (2, -1, -1), norm sqrt(6)
  s(1, 1) += 1.0;
  e = error_vector(x, y, s, 2.0);
  CHECK(e[0] == 0.0);
  CHECK(e[1] == doctest::Approx(std::sqrt(6.0)).epsilon(1e-14));
  CHECK(e[2] == doctest::Approx(std::sqrt(2.0 / 3.0) / 2.0).epsilon(1e-14));
}

TEST_CASE("divergence is detected and reported in the trace") {
  QuadraticProblem p = random_quadratic(4, 3, 1.0, 10.0, 0.4, 12);
  MixingMatrix w = build_mixing(make_ring(4));
  Reference ref = make_reference(p);

  MudagOptions opt;
  opt.eta = 50.0 / p.constants().L;
  opt.T = 500;
  RunResult r = run_mudag(p, w, opt, &ref);
  CHECK(r.diverged());
  CHECK(r.diverged_at >= 1);
  CHECK(long(r.trace.size()) == r.diverged_at + 1);
  CHECK(r.trace.back().t == r.diverged_at);
  for (std::size_t i = 0; i + 1 < r.trace.size(); ++i)
    CHECK(std::isfinite(r.trace[i].f_gap));

  // Without a reference only non-finite states can trigger the flag; the
  // blow-up is still caught once the iterates overflow.
  RunResult nr = run_mudag(p, w, opt);
  CHECK(nr.diverged());

  // The tuned default never diverges here.
  MudagOptions good;
  good.T = 50;
  CHECK(!run_mudag(p, w, good, &ref).diverged());
}

TEST_CASE("gradient and communication counters") {
  QuadraticProblem p = random_quadratic(4, 2, 1.0, 8.0, 0.3, 14);
  MixingMatrix w = build_mixing(make_ring(4));

  MudagOptions opt;
  opt.K = 3;
  opt.T = 7;
  RunResult direct = run_mudag(p, w, opt);
  CHECK(direct.grad_evals == 7);
  CHECK(direct.comm_rounds == 21);
  REQUIRE(direct.trace.size() == 8);
  CHECK(direct.trace[0].grad_evals == 0);
  CHECK(direct.trace[0].comm_rounds == 0);
  for (int i = 0; i < 8; ++i) CHECK(direct.trace[i].t == i);
  CHECK(direct.trace[3].grad_evals == 3);
  CHECK(direct.trace[3].comm_rounds == 9);

  opt.tracking_form = true;
  RunResult tracking = run_mudag(p, w, opt);
  CHECK(tracking.grad_evals == 8);  // one extra round seeds the tracker
  CHECK(tracking.comm_rounds == 42);
  CHECK(tracking.trace[0].grad_evals == 1);

  // K = 0 runs without any communication.
  MudagOptions k0;
  k0.K = 0;
  k0.T = 5;
  RunResult nk = run_mudag(p, w, k0);
  CHECK(nk.comm_rounds == 0);

  // T = 0 records only the initial row.
  MudagOptions t0;
  t0.T = 0;
  Matrix x0(4, 2);
  Rng rng(5);
  for (double& v : x0.flat()) v = rng.normal();
  RunResult still = run_mudag(p, w, t0, nullptr, &x0);
  REQUIRE(still.trace.size() == 1);
  CHECK(still.trace[0].consensus_err == 0.0);  // rows collapsed to the mean
  std::vector<double> mean = row_mean(x0);
  for (int k = 0; k < 2; ++k)
    CHECK(still.xbar[k] == doctest::Approx(mean[k]).epsilon(1e-15));
}

TEST_CASE("potential decays at the certified rate under the certified budget") {
  QuadraticProblem p = random_quadratic(6, 4, 1.0, 25.0, 0.3, 5);
  MixingMatrix w = build_mixing(make_ring(6));
  Reference ref = make_reference(p);

  std::vector<double> zeros(p.dim(), 0.0);
  TheoreticalK tk = theoretical_K(p, w, &zeros, &ref);
  CHECK(tk.theta_certified);
  REQUIRE(tk.K >= 1);

  MudagOptions opt;
  opt.K = tk.K;
  opt.T = 150;
  RunResult r = run_mudag(p, w, opt, &ref);
  REQUIRE(!r.diverged());
  const double alpha = std::sqrt(p.constants().mu / p.constants().L);
  double worst = -1e300;
  for (std::size_t t = 0; t + 1 < r.trace.size(); ++t)
    worst = std::max(worst, r.trace[t + 1].V_t - (1.0 - alpha / 2.0) * r.trace[t].V_t);
  CHECK(worst <= 1e-9);
}
