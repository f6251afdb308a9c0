#include "mudag/solve_ref.hpp"

#include <cmath>
#include <stdexcept>

namespace mudag {

RefSolution solve_reference(const Problem& p, const RefOptions& opt,
                            std::vector<double> x0) {
  const int d = p.dim();
  const ProblemConstants& k = p.constants();
  const double eta = 1.0 / k.L;
  const double alpha = std::min(std::sqrt(k.mu / k.L), 0.999);
  const double beta = (1.0 - alpha) / (1.0 + alpha);

  if (x0.empty()) x0.assign(d, 0.0);
  if (int(x0.size()) != d)
    throw std::runtime_error("solve_reference: x0 dimension mismatch");

  std::vector<double> x = x0, y = x0, xn(d);
  for (long t = 0; t < opt.max_iters; ++t) {
    std::vector<double> g = p.global_grad(y);
    double gn = 0.0;
    for (double v : g) gn += v * v;
    gn = std::sqrt(gn);
    if (gn <= opt.tol) {
      RefSolution out;
      out.x = y;
      out.f_star = p.global_value(y);
      out.grad_norm = gn;
      out.iters = t;
      return out;
    }
    for (int i = 0; i < d; ++i) xn[i] = y[i] - eta * g[i];
    for (int i = 0; i < d; ++i) y[i] = xn[i] + beta * (xn[i] - x[i]);
    x.swap(xn);
  }
  throw std::runtime_error("solve_reference: no convergence within " +
                           std::to_string(opt.max_iters) + " iterations");
}

}  // namespace mudag
