#pragma once

#include <vector>

#include "mudag/matrix.hpp"
#include "mudag/trace.hpp"

namespace mudag {

// Certified minimizer used by runners to fill the gap/distance columns of a
// trace. Obtain from solve_reference or a closed form.
struct Reference {
  std::vector<double> x_star;
  double f_star = 0.0;
};

// Outcome of one optimizer run. diverged_at is the iteration at which a
// non-finite value or a gap blow-up was detected, -1 for a clean run; the
// trace always holds every record produced up to that point.
struct RunResult {
  std::vector<TraceRecord> trace;
  Matrix x;                  // final iterate block
  std::vector<double> xbar;  // row mean of x
  long grad_evals = 0;
  long comm_rounds = 0;
  long diverged_at = -1;

  bool diverged() const { return diverged_at >= 0; }
};

}  // namespace mudag
