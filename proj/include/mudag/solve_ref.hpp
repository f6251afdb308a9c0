#pragma once

#include <cstdint>
#include <vector>

#include "mudag/problem.hpp"

namespace mudag {

// High-accuracy minimizer estimate used as ground truth when a closed form
// is unavailable.
struct RefSolution {
  std::vector<double> x;
  double f_star = 0.0;
  double grad_norm = 0.0;
  long iters = 0;
};

struct RefOptions {
  double tol = 1e-11;       // stop when ||grad f(y_t)|| <= tol
  long max_iters = 2000000;
};

// Accelerated gradient descent on the global objective from x0 (zeros when
// empty). Returns the last momentum point y_t, whose gradient norm met tol.
// Throws std::runtime_error when max_iters is exhausted first.
RefSolution solve_reference(const Problem& p, const RefOptions& opt = {},
                            std::vector<double> x0 = {});

}  // namespace mudag
