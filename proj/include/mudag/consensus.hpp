#pragma once

#include "mudag/matrix.hpp"
#include "mudag/mixing.hpp"

namespace mudag {

// Accelerated gossip: x^{k+1} = (1+eta_w) W x^k - eta_w x^{k-1} with
// x^{-1} = x^0, run for exactly K applications of W. K = 0 is the identity.
// Preserves the column averages of x0 exactly (up to roundoff). If comm is
// non-null it is incremented by K.
Matrix fastmix(const Matrix& x0, const MixingMatrix& wm, int K,
               long* comm = nullptr);

// Plain gossip x^{k+1} = W x^k for K rounds.
Matrix plain_mix(const Matrix& x0, const MixingMatrix& wm, int K,
                 long* comm = nullptr);

// ||x - 1 xbar^T||_F: Frobenius distance from the consensus subspace.
double consensus_error(const Matrix& x);

}  // namespace mudag
