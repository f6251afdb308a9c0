#pragma once

#include <optional>
#include <span>
#include <vector>

#include "mudag/matrix.hpp"

namespace mudag {

// Certified curvature bounds for f = (1/m) sum_i f_i:
//   mu : strong convexity of f            (must be > 0)
//   L  : gradient Lipschitz constant of f
//   M  : per-agent gradient Lipschitz bound, max_i Lip(grad f_i)
//   nu : common local strong convexity, present only when every f_i has it
// Invariant 0 < mu <= L <= M.
struct ProblemConstants {
  double mu = 0.0;
  double L = 0.0;
  double M = 0.0;
  std::optional<double> nu;

  double kappa_g() const { return L / mu; }
  std::optional<double> kappa_l() const {
    if (nu && *nu > 0.0) return M / *nu;
    return std::nullopt;
  }
};

// Throws std::runtime_error when the ordering invariant fails.
void validate_constants(const ProblemConstants& c);

// A decentralized objective: agent i owns f_i, the global objective is
// f(x) = (1/m) sum_i f_i(x). Block quantities act on m x d matrices whose
// row i belongs to agent i; the aggregate gradient stacks grad f_i(x_i) per
// row (no 1/m factor), so the mean of its rows is the tracked average
// gradient gbar.
class Problem {
 public:
  virtual ~Problem() = default;

  virtual int agents() const = 0;
  virtual int dim() const = 0;
  virtual double local_value(int i, std::span<const double> x) const = 0;
  virtual void local_grad(int i, std::span<const double> x,
                          std::span<double> g) const = 0;
  virtual const ProblemConstants& constants() const = 0;

  // f and grad f at a single point.
  double global_value(std::span<const double> x) const;
  std::vector<double> global_grad(std::span<const double> x) const;

  // F(X) = (1/m) sum_i f_i(X_i) over a block.
  double aggregate_value(const Matrix& X) const;

  // Row i of G becomes grad f_i(X_i). Agents are evaluated in parallel under
  // ExecMode::parallel; rows are disjoint so the result is deterministic.
  void aggregate_grad(const Matrix& X, Matrix& G) const;
  Matrix aggregate_grad(const Matrix& X) const;
};

}  // namespace mudag
