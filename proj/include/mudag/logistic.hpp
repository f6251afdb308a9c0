#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "mudag/problem.hpp"

namespace mudag {

// Dense binary-classification dataset: feature rows X (n x d), labels in
// {-1, +1}.
struct Dataset {
  Matrix X;
  std::vector<double> y;

  int n() const { return X.rows(); }
  int dim() const { return X.cols(); }
};

// LIBSVM text format: "label idx:val ..." with 1-based feature indices.
// Labels +1/-1 are kept, 0 maps to -1; anything else is an error. When
// dim_hint > 0 it fixes the dimension (indices beyond it are errors);
// otherwise the max index seen is used. Malformed lines are reported with
// their line number.
Dataset load_libsvm(const std::string& path, int dim_hint = -1);
Dataset parse_libsvm(std::istream& in, int dim_hint = -1);

// Seeded sparse binary synthetic set shaped like census-style data: column j
// activates with probability q_j, q_j log-uniform in [0.005, 0.5], labels
// from a planted linear separator with the given label-noise level. Rare
// columns leave per-shard Gram matrices near singular, which is what makes
// negative local regularization genuinely non-convex.
Dataset synth_binary(int n, int d, std::uint64_t seed, double noise = 0.3);

struct RowPartition {
  std::vector<Dataset> shards;  // m shards of exactly n_per_agent rows
  int rows_used = 0;            // m * n_per_agent; remainder rows dropped
};

// Seeded shuffle then contiguous shards. Throws if m * n_per_agent exceeds
// the dataset size.
RowPartition partition_rows(const Dataset& data, int m, int n_per_agent,
                            std::uint64_t seed);

std::vector<double> sigma_uniform(int m, double value);
// sigma_i = neg for i < m-1 and sigma_{m-1} = last.
std::vector<double> sigma_mixed(int m, double neg, double last);
// Last entry chosen so mean(sigma) == target_mean.
std::vector<double> sigma_mixed_matching(int m, double neg, double target_mean);

// f_i(x) = (1/n) sum_j log(1 + exp(-y_j <a_j, x>)) + (sigma_i/2) ||x||^2.
// Certified constants:
//   L  = lambda_max(sum_i A_i^T A_i / (m n)) / 4 + mean(sigma)
//   mu = mean(sigma)                  (data term is convex; must be > 0)
//   M  = max_i [lambda_max(A_i^T A_i) / (4 n) + |sigma_i|]
//   nu = min_i sigma_i when all sigma_i > 0
class LogisticProblem final : public Problem {
 public:
  LogisticProblem(std::vector<Dataset> shards, std::vector<double> sigma);

  int agents() const override { return int(shards_.size()); }
  int dim() const override { return d_; }
  double local_value(int i, std::span<const double> x) const override;
  void local_grad(int i, std::span<const double> x,
                  std::span<double> g) const override;
  const ProblemConstants& constants() const override { return k_; }

  const std::vector<double>& sigma() const { return sigma_; }

 private:
  int d_ = 0;
  int n_ = 0;  // rows per shard (uniform)
  std::vector<Dataset> shards_;
  std::vector<double> sigma_;
  ProblemConstants k_;
};

}  // namespace mudag
