#include "mudag/eigen_sym.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mudag {

namespace {

// Householder reduction to tridiagonal form (diagonal d, subdiagonal e with
// e[i] between d[i] and d[i+1]). Destroys z.
void tridiagonalize(Matrix& z, std::vector<double>& d, std::vector<double>& e) {
  const int n = z.rows();
  for (int i = n - 1; i > 0; --i) {
    const int l = i - 1;
    double h = 0.0, scale = 0.0;
    if (l > 0) {
      for (int k = 0; k < i; ++k) scale += std::abs(z(i, k));
      if (scale == 0.0) {
        e[i] = z(i, l);
      } else {
        for (int k = 0; k < i; ++k) {
          z(i, k) /= scale;
          h += z(i, k) * z(i, k);
        }
        double f = z(i, l);
        double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        z(i, l) = f - g;
        f = 0.0;
        for (int j = 0; j < i; ++j) {
          g = 0.0;
          for (int k = 0; k < j + 1; ++k) g += z(j, k) * z(i, k);
          for (int k = j + 1; k < i; ++k) g += z(k, j) * z(i, k);
          e[j] = g / h;
          f += e[j] * z(i, j);
        }
        const double hh = f / (h + h);
        for (int j = 0; j < i; ++j) {
          f = z(i, j);
          g = e[j] - hh * f;
          e[j] = g;
          for (int k = 0; k < j + 1; ++k)
            z(j, k) -= f * e[k] + g * z(i, k);
        }
      }
    } else {
      e[i] = z(i, l);
    }
  }
  for (int i = 0; i < n; ++i) d[i] = z(i, i);
  // Shift the subdiagonal down so e[i] couples d[i] and d[i+1].
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;
}

// Implicit-shift QL on a symmetric tridiagonal matrix; eigenvalues land in d.
void tql(std::vector<double>& d, std::vector<double>& e) {
  const int n = int(d.size());
  const double eps = std::numeric_limits<double>::epsilon();
  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 50)
          throw std::runtime_error("sym_eigenvalues: QL failed to converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        int i;
        for (i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
        }
        if (r == 0.0 && i >= l) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

std::vector<double> sym_eigenvalues(const Matrix& A) {
  const int n = A.rows();
  assert(A.cols() == n && n >= 1);
  if (n == 1) return {A(0, 0)};
  Matrix z = A;
  std::vector<double> d(n, 0.0), e(n, 0.0);
  tridiagonalize(z, d, e);
  tql(d, e);
  std::sort(d.begin(), d.end());
  return d;
}

}  // namespace mudag
