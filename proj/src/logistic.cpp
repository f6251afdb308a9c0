#include "mudag/logistic.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "mudag/eigen_sym.hpp"
#include "mudag/rng.hpp"

namespace mudag {

namespace {

// log(1 + exp(-t)) without overflow.
double log1p_exp_neg(double t) {
  if (t > 0.0) return std::log1p(std::exp(-t));
  return -t + std::log1p(std::exp(t));
}

// 1 / (1 + exp(t)) without overflow.
double sigmoid_neg(double t) {
  if (t > 0.0) {
    const double e = std::exp(-t);
    return e / (1.0 + e);
  }
  return 1.0 / (1.0 + std::exp(t));
}

Matrix gram(const Matrix& X) {
  const int n = X.rows(), d = X.cols();
  Matrix B(d, d);
  for (int j = 0; j < n; ++j) {
    const double* xj = X[j];
    for (int r = 0; r < d; ++r) {
      if (xj[r] == 0.0) continue;
      for (int s = 0; s <= r; ++s) B(r, s) += xj[r] * xj[s];
    }
  }
  for (int r = 0; r < d; ++r)
    for (int s = r + 1; s < d; ++s) B(r, s) = B(s, r);
  return B;
}

}  // namespace

Dataset parse_libsvm(std::istream& in, int dim_hint) {
  std::vector<std::vector<std::pair<int, double>>> rows;
  std::vector<double> labels;
  std::string line;
  int lineno = 0;
  int maxidx = 0;
  auto fail = [&](const std::string& what) {
    throw std::runtime_error("libsvm: line " + std::to_string(lineno) + ": " +
                             what);
  };
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string tok;
    if (!(ss >> tok)) continue;
    double label;
    try {
      std::size_t pos;
      label = std::stod(tok, &pos);
      if (pos != tok.size()) fail("bad label '" + tok + "'");
    } catch (const std::exception&) {
      throw std::runtime_error("libsvm: line " + std::to_string(lineno) +
                               ": bad label '" + tok + "'");
    }
    if (label == 0.0) label = -1.0;
    if (label != 1.0 && label != -1.0)
      fail("label must be +1, -1 or 0, got '" + tok + "'");
    std::vector<std::pair<int, double>> feats;
    while (ss >> tok) {
      const std::size_t colon = tok.find(':');
      if (colon == std::string::npos || colon == 0 || colon + 1 == tok.size())
        fail("bad feature token '" + tok + "'");
      int idx;
      double val;
      try {
        std::size_t pos;
        idx = std::stoi(tok.substr(0, colon), &pos);
        if (pos != colon) fail("bad feature index in '" + tok + "'");
        val = std::stod(tok.substr(colon + 1), &pos);
        if (pos != tok.size() - colon - 1) fail("bad feature value in '" + tok + "'");
      } catch (const std::exception&) {
        throw std::runtime_error("libsvm: line " + std::to_string(lineno) +
                                 ": bad feature token '" + tok + "'");
      }
      if (idx < 1) fail("feature indices are 1-based");
      if (dim_hint > 0 && idx > dim_hint)
        fail("feature index " + std::to_string(idx) + " exceeds dimension " +
             std::to_string(dim_hint));
      maxidx = std::max(maxidx, idx);
      feats.emplace_back(idx, val);
    }
    rows.push_back(std::move(feats));
    labels.push_back(label);
  }
  const int d = dim_hint > 0 ? dim_hint : maxidx;
  if (rows.empty()) throw std::runtime_error("libsvm: no data rows");
  if (d == 0) throw std::runtime_error("libsvm: no features seen");
  Dataset out;
  out.X = Matrix(int(rows.size()), d);
  out.y = std::move(labels);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (const auto& [idx, val] : rows[r]) out.X(int(r), idx - 1) = val;
  return out;
}

Dataset load_libsvm(const std::string& path, int dim_hint) {
  std::ifstream f(path);
  if (!f) throw std::runtime_error("libsvm: cannot read '" + path + "'");
  return parse_libsvm(f, dim_hint);
}

Dataset synth_binary(int n, int d, std::uint64_t seed, double noise) {
  if (n < 1 || d < 1) throw std::runtime_error("synth: need n, d >= 1");
  Rng rng(seed);
  std::vector<double> q(d);
  const double lo = std::log(0.005), hi = std::log(0.5);
  for (double& v : q) v = std::exp(rng.uniform(lo, hi));
  std::vector<double> w(d);
  for (double& v : w) v = rng.normal();

  Dataset out;
  out.X = Matrix(n, d);
  out.y.resize(n);
  const double invsqd = 1.0 / std::sqrt(double(d));
  for (int j = 0; j < n; ++j) {
    double z = 0.0;
    for (int k = 0; k < d; ++k)
      if (rng.uniform() < q[k]) {
        out.X(j, k) = 1.0;
        z += w[k];
      }
    z *= invsqd;
    out.y[j] = (z + noise * rng.normal()) >= 0.0 ? 1.0 : -1.0;
  }
  return out;
}

RowPartition partition_rows(const Dataset& data, int m, int n_per_agent,
                            std::uint64_t seed) {
  if (m < 1 || n_per_agent < 1)
    throw std::runtime_error("partition: need m, n_per_agent >= 1");
  const long need = long(m) * n_per_agent;
  if (need > data.n())
    throw std::runtime_error("partition: dataset has " +
                             std::to_string(data.n()) + " rows, need " +
                             std::to_string(need));
  std::vector<int> order(data.n());
  std::iota(order.begin(), order.end(), 0);
  Rng rng(seed);
  for (int i = data.n() - 1; i > 0; --i)
    std::swap(order[i], order[int(rng.below(std::uint64_t(i) + 1))]);

  RowPartition part;
  part.rows_used = int(need);
  part.shards.reserve(m);
  const int d = data.dim();
  for (int i = 0; i < m; ++i) {
    Dataset shard;
    shard.X = Matrix(n_per_agent, d);
    shard.y.resize(n_per_agent);
    for (int r = 0; r < n_per_agent; ++r) {
      const int src = order[std::size_t(i) * n_per_agent + r];
      for (int k = 0; k < d; ++k) shard.X(r, k) = data.X(src, k);
      shard.y[r] = data.y[src];
    }
    part.shards.push_back(std::move(shard));
  }
  return part;
}

std::vector<double> sigma_uniform(int m, double value) {
  return std::vector<double>(m, value);
}

std::vector<double> sigma_mixed(int m, double neg, double last) {
  std::vector<double> s(m, neg);
  s[m - 1] = last;
  return s;
}

std::vector<double> sigma_mixed_matching(int m, double neg,
                                         double target_mean) {
  return sigma_mixed(m, neg, double(m) * target_mean - double(m - 1) * neg);
}

LogisticProblem::LogisticProblem(std::vector<Dataset> shards,
                                 std::vector<double> sigma)
    : shards_(std::move(shards)), sigma_(std::move(sigma)) {
  if (shards_.empty()) throw std::runtime_error("logistic: no agents");
  if (sigma_.size() != shards_.size())
    throw std::runtime_error("logistic: sigma size mismatch");
  d_ = shards_[0].dim();
  n_ = shards_[0].n();
  for (const auto& s : shards_) {
    if (s.dim() != d_) throw std::runtime_error("logistic: shard dim mismatch");
    if (s.n() != n_)
      throw std::runtime_error("logistic: shards must have equal sizes");
    if (int(s.y.size()) != s.n())
      throw std::runtime_error("logistic: label count mismatch");
  }

  const int m = int(shards_.size());
  Matrix gram_sum(d_, d_);
  double M = 0.0;
  for (int i = 0; i < m; ++i) {
    const Matrix Bi = gram(shards_[i].X);
    for (std::size_t t = 0; t < gram_sum.size(); ++t)
      gram_sum.flat()[t] += Bi.flat()[t];
    const double lmax = sym_eigenvalues(Bi).back();
    M = std::max(M, lmax / (4.0 * n_) + std::abs(sigma_[i]));
  }
  const double sigma_mean =
      std::accumulate(sigma_.begin(), sigma_.end(), 0.0) / double(m);
  for (double& v : gram_sum.flat()) v /= double(m) * double(n_);
  k_.mu = sigma_mean;
  if (!(k_.mu > 0.0))
    throw std::runtime_error("logistic: mean regularization must be positive");
  k_.L = sym_eigenvalues(gram_sum).back() / 4.0 + sigma_mean;
  k_.M = std::max(M, k_.L);
  const double numin = *std::min_element(sigma_.begin(), sigma_.end());
  if (numin > 0.0) k_.nu = numin;
  validate_constants(k_);
}

double LogisticProblem::local_value(int i, std::span<const double> x) const {
  assert(int(x.size()) == d_);
  const Dataset& sh = shards_[i];
  double s = 0.0;
  for (int j = 0; j < n_; ++j) {
    const double* aj = sh.X[j];
    double t = 0.0;
    for (int k = 0; k < d_; ++k) t += aj[k] * x[k];
    s += log1p_exp_neg(sh.y[j] * t);
  }
  double sq = 0.0;
  for (int k = 0; k < d_; ++k) sq += x[k] * x[k];
  return s / double(n_) + 0.5 * sigma_[i] * sq;
}

void LogisticProblem::local_grad(int i, std::span<const double> x,
                                 std::span<double> g) const {
  assert(int(x.size()) == d_ && int(g.size()) == d_);
  const Dataset& sh = shards_[i];
  for (int k = 0; k < d_; ++k) g[k] = sigma_[i] * x[k];
  const double inv_n = 1.0 / double(n_);
  for (int j = 0; j < n_; ++j) {
    const double* aj = sh.X[j];
    double t = 0.0;
    for (int k = 0; k < d_; ++k) t += aj[k] * x[k];
    const double coef = -sh.y[j] * sigmoid_neg(sh.y[j] * t) * inv_n;
    if (coef == 0.0) continue;
    for (int k = 0; k < d_; ++k) g[k] += coef * aj[k];
  }
}

}  // namespace mudag
