#include "mudag/consensus.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>
#include <utility>

namespace mudag {

Matrix fastmix(const Matrix& x0, const MixingMatrix& wm, int K, long* comm) {
  assert(x0.rows() == wm.m);
  if (K < 0) throw std::runtime_error("fastmix: K must be >= 0");
  if (comm) *comm += K;
  if (K == 0) return x0;

  const double eta = wm.eta_w();
  Matrix prev = x0;             // x^{k-1}
  Matrix cur = x0;              // x^k
  Matrix mixed(x0.rows(), x0.cols());
  for (int k = 0; k < K; ++k) {
    apply_mixing(wm.W, cur, mixed);
    // next = (1+eta)*mixed - eta*prev, rotated through prev to avoid copies
    std::size_t n = mixed.size();
    for (std::size_t t = 0; t < n; ++t)
      prev.flat()[t] = (1.0 + eta) * mixed.flat()[t] - eta * prev.flat()[t];
    std::swap(prev, cur);
  }
  return cur;
}

Matrix plain_mix(const Matrix& x0, const MixingMatrix& wm, int K, long* comm) {
  assert(x0.rows() == wm.m);
  if (K < 0) throw std::runtime_error("plain_mix: K must be >= 0");
  if (comm) *comm += K;
  if (K == 0) return x0;
  Matrix cur = x0;
  Matrix mixed(x0.rows(), x0.cols());
  for (int k = 0; k < K; ++k) {
    apply_mixing(wm.W, cur, mixed);
    std::swap(cur, mixed);
  }
  return cur;
}

double consensus_error(const Matrix& x) {
  const std::vector<double> mean = row_mean(x);
  double s = 0.0;
  for (int i = 0; i < x.rows(); ++i) {
    const double* xi = x[i];
    for (int k = 0; k < x.cols(); ++k) {
      const double d = xi[k] - mean[k];
      s += d * d;
    }
  }
  return std::sqrt(s);
}

}  // namespace mudag
