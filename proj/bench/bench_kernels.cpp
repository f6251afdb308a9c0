// Benchmarks the two kernel execution paths and proves they agree bitwise.
// The parallel path splits independent output rows across OpenMP threads
// with a fixed inner accumulation order, so any bit difference from the
// serial path is a bug: the program exits with status 1 on mismatch.
//
// Usage: bench_kernels [--quick]    (--quick shrinks sizes for CI)

#include <chrono>
#include <cstdio>
#include <cstring>
#include <functional>
#include <string>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "mudag/graph.hpp"
#include "mudag/logistic.hpp"
#include "mudag/matrix.hpp"
#include "mudag/mixing.hpp"
#include "mudag/quadratic.hpp"
#include "mudag/rng.hpp"

using namespace mudag;
using clock_type = std::chrono::steady_clock;

namespace {

Matrix random_block(int m, int d, Rng& rng) {
  Matrix x(m, d);
  for (double& v : x.flat()) v = rng.normal();
  return x;
}

double time_ms(const std::function<void()>& f, int reps) {
  const auto t0 = clock_type::now();
  for (int i = 0; i < reps; ++i) f();
  const auto t1 = clock_type::now();
  return std::chrono::duration<double, std::milli>(t1 - t0).count() / reps;
}

// Runs the kernel once per mode, checks bitwise identity, then times both.
bool report(const char* name, const std::string& shape, int reps,
            const std::function<void(Matrix&)>& kernel, Matrix& out_serial,
            Matrix& out_parallel) {
  ExecMode saved = exec_mode();

  exec_mode() = ExecMode::serial;
  kernel(out_serial);
  exec_mode() = ExecMode::parallel;
  kernel(out_parallel);

  const bool identical =
      out_serial.same_shape(out_parallel) &&
      std::memcmp(out_serial.flat().data(), out_parallel.flat().data(),
                  out_serial.size() * sizeof(double)) == 0;

  exec_mode() = ExecMode::serial;
  const double ser = time_ms([&] { kernel(out_serial); }, reps);
  exec_mode() = ExecMode::parallel;
  const double par = time_ms([&] { kernel(out_parallel); }, reps);
  exec_mode() = saved;

  std::printf("%-24s %-22s serial %8.3f ms  parallel %8.3f ms  speedup "
              "%.2fx  %s\n",
              name, shape.c_str(), ser, par, par > 0.0 ? ser / par : 0.0,
              identical ? "bitwise identical" : "MISMATCH");
  return identical;
}

}  // namespace

int main(int argc, char** argv) {
  bool quick = false;
  for (int i = 1; i < argc; ++i) {
    if (std::strcmp(argv[i], "--quick") == 0) {
      quick = true;
    } else {
      std::fprintf(stderr, "usage: bench_kernels [--quick]\n");
      return 2;
    }
  }

#ifdef _OPENMP
  std::printf("OpenMP max threads: %d\n", omp_get_max_threads());
#else
  std::printf("OpenMP not enabled; both paths run serially\n");
#endif

  bool all_ok = true;

  {
    const int m = quick ? 200 : 600;
    const int d = quick ? 32 : 128;
    const int reps = quick ? 20 : 50;
    MixingMatrix w = build_mixing(erdos_renyi_connected(m, 0.3, 1).graph);
    Rng rng(2);
    Matrix x = random_block(m, d, rng);
    Matrix a(m, d), b(m, d);
    char shape[64];
    std::snprintf(shape, sizeof shape, "m=%d d=%d", m, d);
    all_ok &= report(
        "apply_mixing", shape, reps,
        [&](Matrix& out) { apply_mixing(w.W, x, out); }, a, b);
  }

  {
    const int m = quick ? 48 : 96;
    const int d = quick ? 32 : 64;
    const int reps = quick ? 50 : 200;
    QuadraticProblem p = random_quadratic(m, d, 1.0, 50.0, 0.3, 3);
    Rng rng(4);
    Matrix x = random_block(m, d, rng);
    Matrix a(m, d), b(m, d);
    char shape[64];
    std::snprintf(shape, sizeof shape, "m=%d d=%d", m, d);
    all_ok &= report(
        "aggregate_grad quad", shape, reps,
        [&](Matrix& out) { p.aggregate_grad(x, out); }, a, b);
  }

  {
    const int m = quick ? 32 : 64;
    const int per = quick ? 100 : 300;
    const int d = quick ? 40 : 80;
    const int reps = quick ? 20 : 60;
    Dataset data = synth_binary(m * per, d, 5);
    RowPartition part = partition_rows(data, m, per, 6);
    LogisticProblem p(std::move(part.shards), sigma_uniform(m, 1e-2));
    Rng rng(7);
    Matrix x = random_block(m, d, rng);
    Matrix a(m, d), b(m, d);
    char shape[64];
    std::snprintf(shape, sizeof shape, "m=%d n/agent=%d d=%d", m, per, d);
    all_ok &= report(
        "aggregate_grad logi", shape, reps,
        [&](Matrix& out) { p.aggregate_grad(x, out); }, a, b);
  }

  if (!all_ok) {
    std::fprintf(stderr, "bench_kernels: serial/parallel outputs differ\n");
    return 1;
  }
  return 0;
}
