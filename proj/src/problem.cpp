#include "mudag/problem.hpp"

#include <cassert>
#include <stdexcept>

namespace mudag {

void validate_constants(const ProblemConstants& c) {
  if (!(c.mu > 0.0))
    throw std::runtime_error("constants: mu must be positive");
  if (!(c.mu <= c.L && c.L <= c.M))
    throw std::runtime_error("constants: need 0 < mu <= L <= M");
  if (c.nu && !(*c.nu > 0.0))
    throw std::runtime_error("constants: nu, when present, must be positive");
}

double Problem::global_value(std::span<const double> x) const {
  const int m = agents();
  double s = 0.0;
  for (int i = 0; i < m; ++i) s += local_value(i, x);
  return s / double(m);
}

std::vector<double> Problem::global_grad(std::span<const double> x) const {
  const int m = agents();
  const int d = dim();
  Matrix per_agent(m, d);
  const bool parallel = exec_mode() == ExecMode::parallel;
#pragma omp parallel for schedule(static) if (parallel)
  for (int i = 0; i < m; ++i)
    local_grad(i, x, std::span<double>(per_agent[i], d));
  // Fixed-order reduction keeps the result thread-count independent.
  return row_mean(per_agent);
}

double Problem::aggregate_value(const Matrix& X) const {
  const int m = agents();
  const int d = dim();
  assert(X.rows() == m && X.cols() == d);
  double s = 0.0;
  for (int i = 0; i < m; ++i)
    s += local_value(i, std::span<const double>(X[i], d));
  return s / double(m);
}

void Problem::aggregate_grad(const Matrix& X, Matrix& G) const {
  const int m = agents();
  const int d = dim();
  assert(X.rows() == m && X.cols() == d);
  if (!G.same_shape(X)) G = Matrix(m, d);
  const bool parallel = exec_mode() == ExecMode::parallel;
#pragma omp parallel for schedule(static) if (parallel)
  for (int i = 0; i < m; ++i)
    local_grad(i, std::span<const double>(X[i], d), std::span<double>(G[i], d));
}

Matrix Problem::aggregate_grad(const Matrix& X) const {
  Matrix G;
  aggregate_grad(X, G);
  return G;
}

}  // namespace mudag
