#pragma once

#include <cstdint>
#include <vector>

#include "mudag/problem.hpp"

namespace mudag {

// f_i(x) = (1/2) x^T H_i x - c_i^T x with symmetric H_i. The average
// Hessian Hbar = (1/m) sum H_i must be positive definite; individual H_i may
// be indefinite (non-convex locals). Constants are certified spectrally:
// mu/L from Hbar, M = max_i ||H_i||_2, nu = min_i lambda_min(H_i) if > 0.
class QuadraticProblem final : public Problem {
 public:
  QuadraticProblem(std::vector<Matrix> H, Matrix c);

  int agents() const override { return int(H_.size()); }
  int dim() const override { return d_; }
  double local_value(int i, std::span<const double> x) const override;
  void local_grad(int i, std::span<const double> x,
                  std::span<double> g) const override;
  const ProblemConstants& constants() const override { return k_; }

  const Matrix& hessian(int i) const { return H_[i]; }
  const Matrix& mean_hessian() const { return Hbar_; }

  // Exact minimizer Hbar^{-1} cbar; independent of the iterative reference
  // solver, used as its oracle.
  std::vector<double> closed_form_minimizer() const;

 private:
  int d_ = 0;
  std::vector<Matrix> H_;
  Matrix c_;      // row i = c_i
  Matrix Hbar_;
  ProblemConstants k_;
};

// Seeded instance with mean Hessian spectrum exactly linspace(mu, L) and
// per-agent zero-mean symmetric noise of the given scale. noise = 0 gives
// identical agents.
QuadraticProblem random_quadratic(int m, int d, double mu, double L,
                                  double noise, std::uint64_t seed);

}  // namespace mudag
