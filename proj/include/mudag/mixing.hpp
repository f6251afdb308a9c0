#pragma once

#include "mudag/graph.hpp"
#include "mudag/matrix.hpp"

namespace mudag {

// Gossip weight matrix W = I - L/lambda1(L): symmetric, doubly stochastic,
// positive semidefinite, spectrum in [0, 1], W_ij nonzero only on edges and
// the diagonal. lambda2 < 1 iff the graph is connected.
struct MixingMatrix {
  Matrix W;
  int m = 0;
  double lambda1_L = 0.0;  // largest Laplacian eigenvalue
  double lambda2 = 0.0;    // second largest eigenvalue of W

  double gap() const { return 1.0 - lambda2; }

  // Momentum weight of the accelerated gossip recursion.
  double eta_w() const;

  // Consensus contraction target (1 - sqrt(1 - lambda2))^K.
  double rho(int K) const;
};

// Throws std::runtime_error if the graph is disconnected.
MixingMatrix build_mixing(const Graph& g);

}  // namespace mudag
