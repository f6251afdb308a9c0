#include "mudag/mixing.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "mudag/eigen_sym.hpp"

namespace mudag {

double MixingMatrix::eta_w() const {
  const double c = std::sqrt(std::max(0.0, 1.0 - lambda2 * lambda2));
  return (1.0 - c) / (1.0 + c);
}

double MixingMatrix::rho(int K) const {
  const double base = 1.0 - std::sqrt(std::max(0.0, 1.0 - lambda2));
  return std::pow(base, K);
}

MixingMatrix build_mixing(const Graph& g) {
  const Matrix L = laplacian(g);
  const std::vector<double> ev = sym_eigenvalues(L);
  const double l1 = ev.back();
  if (l1 <= 0.0) throw std::runtime_error("mixing: graph has no edges");
  // Algebraic connectivity == 0 means a disconnected graph.
  if (ev[1] <= 1e-10 * std::max(1.0, l1))
    throw std::runtime_error("mixing: graph is disconnected");

  MixingMatrix wm;
  wm.m = g.m;
  wm.lambda1_L = l1;
  wm.lambda2 = std::clamp(1.0 - ev[1] / l1, 0.0, 1.0 - 1e-15);
  wm.W = Matrix(g.m, g.m);
  const double inv = 1.0 / l1;
  for (int i = 0; i < g.m; ++i) {
    for (int j = 0; j < g.m; ++j) wm.W(i, j) = -L(i, j) * inv;
    wm.W(i, i) = 1.0 - L(i, i) * inv;
  }
  return wm;
}

}  // namespace mudag
