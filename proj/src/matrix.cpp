#include "mudag/matrix.hpp"

#include <cassert>
#include <cmath>
#include <stdexcept>

namespace mudag {

Matrix Matrix::identity(int n) {
  Matrix I(n, n);
  for (int i = 0; i < n; ++i) I(i, i) = 1.0;
  return I;
}

ExecMode& exec_mode() {
  static ExecMode mode = ExecMode::parallel;
  return mode;
}

void apply_mixing(const Matrix& W, const Matrix& x, Matrix& out) {
  const int m = W.rows();
  const int d = x.cols();
  assert(W.cols() == m && x.rows() == m);
  if (!out.same_shape(x)) out = Matrix(m, d);

  const bool parallel = exec_mode() == ExecMode::parallel;
#pragma omp parallel for schedule(static) if (parallel)
  for (int i = 0; i < m; ++i) {
    double* oi = out[i];
    for (int k = 0; k < d; ++k) oi[k] = 0.0;
    const double* wi = W[i];
    for (int j = 0; j < m; ++j) {
      const double w = wi[j];
      if (w == 0.0) continue;
      const double* xj = x[j];
      for (int k = 0; k < d; ++k) oi[k] += w * xj[k];
    }
  }
}

double frobenius_norm(const Matrix& x) {
  double s = 0.0;
  for (double v : x.flat()) s += v * v;
  return std::sqrt(s);
}

double frobenius_dist(const Matrix& a, const Matrix& b) {
  assert(a.same_shape(b));
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = a.flat()[i] - b.flat()[i];
    s += d * d;
  }
  return std::sqrt(s);
}

bool all_finite(const Matrix& x) {
  for (double v : x.flat())
    if (!std::isfinite(v)) return false;
  return true;
}

std::vector<double> row_mean(const Matrix& x) {
  std::vector<double> mean(x.cols(), 0.0);
  for (int i = 0; i < x.rows(); ++i) {
    const double* xi = x[i];
    for (int k = 0; k < x.cols(); ++k) mean[k] += xi[k];
  }
  const double inv = 1.0 / double(x.rows());
  for (double& v : mean) v *= inv;
  return mean;
}

Matrix replicate_row(const std::vector<double>& v, int m) {
  Matrix out(m, int(v.size()));
  for (int i = 0; i < m; ++i)
    for (int k = 0; k < int(v.size()); ++k) out(i, k) = v[k];
  return out;
}

void lincomb(const Matrix& a, double sa, const Matrix& u, double sb,
             const Matrix& v, Matrix& out) {
  assert(a.same_shape(u) && a.same_shape(v));
  if (!out.same_shape(a)) out = Matrix(a.rows(), a.cols());
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i)
    out.flat()[i] = a.flat()[i] + sa * u.flat()[i] + sb * v.flat()[i];
}

double dot(const std::vector<double>& a, const std::vector<double>& b) {
  assert(a.size() == b.size());
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

double norm2(const std::vector<double>& a) { return std::sqrt(dot(a, a)); }

std::vector<double> spd_solve(const Matrix& A, const std::vector<double>& b) {
  const int n = A.rows();
  assert(A.cols() == n && int(b.size()) == n);
  Matrix L(n, n);
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j <= i; ++j) {
      double s = A(i, j);
      for (int k = 0; k < j; ++k) s -= L(i, k) * L(j, k);
      if (i == j) {
        if (s <= 0.0)
          throw std::runtime_error("spd_solve: matrix is not positive definite");
        L(i, i) = std::sqrt(s);
      } else {
        L(i, j) = s / L(j, j);
      }
    }
  }
  std::vector<double> y(n), x(n);
  for (int i = 0; i < n; ++i) {
    double s = b[i];
    for (int k = 0; k < i; ++k) s -= L(i, k) * y[k];
    y[i] = s / L(i, i);
  }
  for (int i = n - 1; i >= 0; --i) {
    double s = y[i];
    for (int k = i + 1; k < n; ++k) s -= L(k, i) * x[k];
    x[i] = s / L(i, i);
  }
  return x;
}

}  // namespace mudag
