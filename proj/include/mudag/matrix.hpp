#pragma once

#include <cstddef>
#include <vector>

namespace mudag {

// Dense row-major matrix. Agent blocks are m x d with row i owned by agent i.
class Matrix {
 public:
  Matrix() = default;
  Matrix(int rows, int cols)
      : rows_(rows), cols_(cols), a_(std::size_t(rows) * cols, 0.0) {}

  static Matrix identity(int n);

  int rows() const { return rows_; }
  int cols() const { return cols_; }
  std::size_t size() const { return a_.size(); }

  double* operator[](int i) { return a_.data() + std::size_t(i) * cols_; }
  const double* operator[](int i) const {
    return a_.data() + std::size_t(i) * cols_;
  }
  double& operator()(int i, int j) { return a_[std::size_t(i) * cols_ + j]; }
  double operator()(int i, int j) const {
    return a_[std::size_t(i) * cols_ + j];
  }

  std::vector<double>& flat() { return a_; }
  const std::vector<double>& flat() const { return a_; }

  bool same_shape(const Matrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_;
  }

 private:
  int rows_ = 0, cols_ = 0;
  std::vector<double> a_;
};

// Process-wide kernel execution mode. Parallel splits independent output rows
// across OpenMP threads; inner accumulation order is fixed, so results are
// bit-identical to serial regardless of thread count.
enum class ExecMode { serial, parallel };
ExecMode& exec_mode();

// out = W * x with W m x m and x m x d.
void apply_mixing(const Matrix& W, const Matrix& x, Matrix& out);

double frobenius_norm(const Matrix& x);
double frobenius_dist(const Matrix& a, const Matrix& b);
bool all_finite(const Matrix& x);

std::vector<double> row_mean(const Matrix& x);
Matrix replicate_row(const std::vector<double>& v, int m);

// Elementwise out = a + sa*u + sb*v (any operand may alias out).
void lincomb(const Matrix& a, double sa, const Matrix& u, double sb,
             const Matrix& v, Matrix& out);

double dot(const std::vector<double>& a, const std::vector<double>& b);
double norm2(const std::vector<double>& a);

// Solves A x = b for symmetric positive definite A (Cholesky, in-place copy).
// Throws std::runtime_error if A is not positive definite.
std::vector<double> spd_solve(const Matrix& A, const std::vector<double>& b);

}  // namespace mudag
