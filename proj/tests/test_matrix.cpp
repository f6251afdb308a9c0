#include "doctest.h"

#include <cmath>
#include <cstring>
#include <stdexcept>
#include <vector>

#include "mudag/matrix.hpp"
#include "mudag/rng.hpp"

using namespace mudag;

namespace {

Matrix random_matrix(int r, int c, Rng& rng) {
  Matrix x(r, c);
  for (int i = 0; i < r; ++i)
    for (int j = 0; j < c; ++j) x(i, j) = rng.normal();
  return x;
}

// Restores the global execution mode on scope exit so test order never leaks.
struct ModeGuard {
  ExecMode saved = exec_mode();
  ~ModeGuard() { exec_mode() = saved; }
};

}  // namespace

TEST_CASE("matrix basics") {
  Matrix a(2, 3);
  CHECK(a.rows() == 2);
  CHECK(a.cols() == 3);
  CHECK(a.size() == 6);
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 3; ++j) CHECK(a(i, j) == 0.0);
  a(1, 2) = 4.5;
  CHECK(a[1][2] == 4.5);
  CHECK(a.flat()[5] == 4.5);

  Matrix id = Matrix::identity(3);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) CHECK(id(i, j) == (i == j ? 1.0 : 0.0));

  CHECK(a.same_shape(Matrix(2, 3)));
  CHECK(!a.same_shape(Matrix(3, 2)));
}

TEST_CASE("rng determinism and ranges") {
  Rng a(42), b(42), c(43);
  bool all_equal = true, any_diff = false;
  for (int i = 0; i < 1000; ++i) {
    std::uint64_t va = a.next(), vb = b.next(), vc = c.next();
    all_equal = all_equal && (va == vb);
    any_diff = any_diff || (va != vc);
  }
  CHECK(all_equal);
  CHECK(any_diff);

  Rng r(7);
  for (int i = 0; i < 1000; ++i) {
    double u = r.uniform();
    CHECK(u >= 0.0);
    CHECK(u < 1.0);
  }
  for (int i = 0; i < 1000; ++i) {
    double u = r.uniform(-2.0, 3.0);
    CHECK(u >= -2.0);
    CHECK(u < 3.0);
  }
  for (int i = 0; i < 1000; ++i) CHECK(r.below(10) < 10);

  // Box-Muller output should be finite and roughly centered.
  double sum = 0.0;
  for (int i = 0; i < 20000; ++i) {
    double z = r.normal();
    CHECK(std::isfinite(z));
    sum += z;
  }
  CHECK(std::abs(sum / 20000.0) < 0.05);
}

TEST_CASE("apply_mixing matches a straightforward triple loop") {
  Rng rng(11);
  for (int trial = 0; trial < 10; ++trial) {
    int m = 1 + int(rng.below(12));
    int d = 1 + int(rng.below(6));
    Matrix w = random_matrix(m, m, rng);
    Matrix x = random_matrix(m, d, rng);
    Matrix out(m, d), expect(m, d);
    for (int i = 0; i < m; ++i)
      for (int j = 0; j < m; ++j)
        for (int k = 0; k < d; ++k) expect(i, k) += w(i, j) * x(j, k);
    apply_mixing(w, x, out);
    for (int i = 0; i < m; ++i)
      for (int k = 0; k < d; ++k)
        CHECK(out(i, k) == doctest::Approx(expect(i, k)).epsilon(1e-13));
  }
}

TEST_CASE("serial and parallel kernels are bit-identical") {
  ModeGuard guard;
  Rng rng(99);
  for (int trial = 0; trial < 20; ++trial) {
    int m = 2 + int(rng.below(40));
    int d = 1 + int(rng.below(9));
    Matrix w = random_matrix(m, m, rng);
    Matrix x = random_matrix(m, d, rng);
    Matrix out_s(m, d), out_p(m, d);
    exec_mode() = ExecMode::serial;
    apply_mixing(w, x, out_s);
    exec_mode() = ExecMode::parallel;
    apply_mixing(w, x, out_p);
    CHECK(std::memcmp(out_s.flat().data(), out_p.flat().data(),
                      out_s.size() * sizeof(double)) == 0);
  }
}

TEST_CASE("lincomb computes a + sa*u + sb*v and tolerates aliasing") {
  Rng rng(5);
  Matrix a = random_matrix(4, 3, rng);
  Matrix u = random_matrix(4, 3, rng);
  Matrix v = random_matrix(4, 3, rng);
  Matrix out(4, 3);
  lincomb(a, 2.0, u, -0.5, v, out);
  for (int i = 0; i < 4; ++i)
    for (int j = 0; j < 3; ++j)
      CHECK(out(i, j) ==
            doctest::Approx(a(i, j) + 2.0 * u(i, j) - 0.5 * v(i, j))
                .epsilon(1e-15));

  // out aliases the first operand.
  Matrix b = a;
  lincomb(b, 2.0, u, -0.5, v, b);
  CHECK(frobenius_dist(b, out) == 0.0);

  // out aliases u.
  Matrix u2 = u;
  lincomb(a, 2.0, u2, -0.5, v, u2);
  CHECK(frobenius_dist(u2, out) == 0.0);
}

TEST_CASE("norms, means, replication, finiteness") {
  Matrix x(2, 2);
  x(0, 0) = 3.0;
  x(1, 1) = 4.0;
  CHECK(frobenius_norm(x) == doctest::Approx(5.0).epsilon(1e-15));

  Matrix y(2, 2);
  CHECK(frobenius_dist(x, y) == doctest::Approx(5.0).epsilon(1e-15));

  std::vector<double> mean = row_mean(x);
  CHECK(mean.size() == 2);
  CHECK(mean[0] == doctest::Approx(1.5));
  CHECK(mean[1] == doctest::Approx(2.0));

  Matrix rep = replicate_row(mean, 3);
  CHECK(rep.rows() == 3);
  CHECK(rep.cols() == 2);
  for (int i = 0; i < 3; ++i) {
    CHECK(rep(i, 0) == 1.5);
    CHECK(rep(i, 1) == 2.0);
  }

  CHECK(all_finite(x));
  x(0, 1) = std::nan("");
  CHECK(!all_finite(x));
  x(0, 1) = std::numeric_limits<double>::infinity();
  CHECK(!all_finite(x));

  std::vector<double> a{1.0, 2.0}, b{3.0, -1.0};
  CHECK(dot(a, b) == doctest::Approx(1.0));
  CHECK(norm2(b) == doctest::Approx(std::sqrt(10.0)));
}

TEST_CASE("spd_solve solves SPD systems and rejects indefinite ones") {
  Rng rng(21);
  for (int trial = 0; trial < 8; ++trial) {
    int n = 1 + int(rng.below(10));
    Matrix b = random_matrix(n, n, rng);
    Matrix a(n, n);
    // a = b^T b + I is SPD.
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double s = 0.0;
        for (int k = 0; k < n; ++k) s += b(k, i) * b(k, j);
        a(i, j) = s + (i == j ? 1.0 : 0.0);
      }
    std::vector<double> rhs(n);
    for (auto& v : rhs) v = rng.normal();
    std::vector<double> x = spd_solve(a, rhs);
    for (int i = 0; i < n; ++i) {
      double s = 0.0;
      for (int j = 0; j < n; ++j) s += a(i, j) * x[j];
      CHECK(s == doctest::Approx(rhs[i]).epsilon(1e-9));
    }
  }

  Matrix bad(2, 2);
  bad(0, 0) = 1.0;
  bad(1, 1) = -1.0;
  CHECK_THROWS_AS(spd_solve(bad, {1.0, 1.0}), std::runtime_error);
}
