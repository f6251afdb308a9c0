#include "mudag/quadratic.hpp"

#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mudag/eigen_sym.hpp"
#include "mudag/rng.hpp"

namespace mudag {

QuadraticProblem::QuadraticProblem(std::vector<Matrix> H, Matrix c)
    : H_(std::move(H)), c_(std::move(c)) {
  if (H_.empty()) throw std::runtime_error("quadratic: no agents");
  d_ = H_[0].rows();
  const int m = int(H_.size());
  if (c_.rows() != m || c_.cols() != d_)
    throw std::runtime_error("quadratic: c must be m x d");
  for (const auto& Hi : H_)
    if (Hi.rows() != d_ || Hi.cols() != d_)
      throw std::runtime_error("quadratic: inconsistent Hessian shapes");

  Hbar_ = Matrix(d_, d_);
  for (const auto& Hi : H_)
    for (std::size_t t = 0; t < Hbar_.size(); ++t)
      Hbar_.flat()[t] += Hi.flat()[t];
  for (double& v : Hbar_.flat()) v /= double(m);

  const std::vector<double> evbar = sym_eigenvalues(Hbar_);
  if (!(evbar.front() > 0.0))
    throw std::runtime_error("quadratic: mean Hessian is not positive definite");
  k_.mu = evbar.front();
  k_.L = evbar.back();

  double M = 0.0;
  double numin = std::numeric_limits<double>::infinity();
  for (const auto& Hi : H_) {
    const std::vector<double> ev = sym_eigenvalues(Hi);
    M = std::max(M, std::max(std::abs(ev.front()), std::abs(ev.back())));
    numin = std::min(numin, ev.front());
  }
  k_.M = std::max(M, k_.L);
  if (numin > 0.0) k_.nu = numin;
  validate_constants(k_);
}

double QuadraticProblem::local_value(int i, std::span<const double> x) const {
  assert(int(x.size()) == d_);
  const Matrix& Hi = H_[i];
  double q = 0.0, lin = 0.0;
  for (int r = 0; r < d_; ++r) {
    const double* hr = Hi[r];
    double hx = 0.0;
    for (int k = 0; k < d_; ++k) hx += hr[k] * x[k];
    q += x[r] * hx;
    lin += c_(i, r) * x[r];
  }
  return 0.5 * q - lin;
}

void QuadraticProblem::local_grad(int i, std::span<const double> x,
                                  std::span<double> g) const {
  assert(int(x.size()) == d_ && int(g.size()) == d_);
  const Matrix& Hi = H_[i];
  for (int r = 0; r < d_; ++r) {
    const double* hr = Hi[r];
    double hx = 0.0;
    for (int k = 0; k < d_; ++k) hx += hr[k] * x[k];
    g[r] = hx - c_(i, r);
  }
}

std::vector<double> QuadraticProblem::closed_form_minimizer() const {
  return spd_solve(Hbar_, row_mean(c_));
}

QuadraticProblem random_quadratic(int m, int d, double mu, double L,
                                  double noise, std::uint64_t seed) {
  if (!(0.0 < mu && mu <= L))
    throw std::runtime_error("quadratic: need 0 < mu <= L");
  Rng rng(seed);

  // Orthonormal basis via modified Gram-Schmidt on a Gaussian matrix.
  Matrix Q(d, d);
  for (double& v : Q.flat()) v = rng.normal();
  for (int j = 0; j < d; ++j) {
    for (int k = 0; k < j; ++k) {
      double proj = 0.0;
      for (int r = 0; r < d; ++r) proj += Q(r, j) * Q(r, k);
      for (int r = 0; r < d; ++r) Q(r, j) -= proj * Q(r, k);
    }
    double nrm = 0.0;
    for (int r = 0; r < d; ++r) nrm += Q(r, j) * Q(r, j);
    nrm = std::sqrt(nrm);
    if (nrm < 1e-12) throw std::runtime_error("quadratic: degenerate basis");
    for (int r = 0; r < d; ++r) Q(r, j) /= nrm;
  }

  Matrix target(d, d);
  for (int a = 0; a < d; ++a) {
    const double lam = d == 1 ? L : mu + (L - mu) * double(a) / double(d - 1);
    for (int r = 0; r < d; ++r)
      for (int s = 0; s < d; ++s) target(r, s) += lam * Q(r, a) * Q(s, a);
  }

  std::vector<Matrix> H(m, Matrix(d, d));
  for (int i = 0; i < m; ++i) {
    for (int r = 0; r < d; ++r)
      for (int s = 0; s <= r; ++s) {
        const double z = rng.normal() * noise;
        H[i](r, s) = z;
        H[i](s, r) = z;
      }
  }
  // Recenter the noise so the mean Hessian equals the target exactly.
  Matrix meanH(d, d);
  for (const auto& Hi : H)
    for (std::size_t t = 0; t < meanH.size(); ++t)
      meanH.flat()[t] += Hi.flat()[t] / double(m);
  for (auto& Hi : H)
    for (std::size_t t = 0; t < Hi.size(); ++t)
      Hi.flat()[t] += target.flat()[t] - meanH.flat()[t];

  Matrix c(m, d);
  for (double& v : c.flat()) v = rng.normal();
  return QuadraticProblem(std::move(H), std::move(c));
}

}  // namespace mudag
