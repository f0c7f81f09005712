// Timing comparison of the parallel kernels against their serial
// reference implementations, on synthetic frames of growing dimension.

#include <chrono>
#include <cstdio>
#include <random>

#include <omp.h>

#include "qkt/curvature.hpp"
#include "qkt/twistor.hpp"
#include "qkt/suites.hpp"

using namespace qkt;

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

MetricLieAlgebra random_algebra(int dim, std::uint64_t seed) {
  // random antisymmetric constants; Jacobi is irrelevant for raw kernel
  // timing, the kernels are pure multilinear algebra
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() { return double(rng() >> 11) * 0x1.0p-53 - 0.5; };
  MetricLieAlgebra l(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      for (int k = 0; k < dim; ++k) l.set_bracket(i, j, k, uniform());
  return l;
}

Tensor random_3form(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() { return double(rng() >> 11) * 0x1.0p-53 - 0.5; };
  Tensor t(3, dim);
  for (std::size_t i = 0; i < t.size(); ++i) t.data()[i] = uniform();
  return antisymmetrize3(t);
}

template <class F>
double time_best_of(int reps, F&& f) {
  double best = 1e300;
  for (int r = 0; r < reps; ++r) {
    const double t0 = now_ms();
    f();
    best = std::min(best, now_ms() - t0);
  }
  return best;
}

void bench_dim(int dim) {
  const MetricLieAlgebra l = random_algebra(dim, 1);
  const Connection lc = levi_civita(l);
  const Tensor t3 = random_3form(dim, 2);
  Connection conn = lc;
  conn.gamma += 0.5 * t3;

  std::printf("dim %d\n", dim);
  double serial, parallel;

  serial = time_best_of(3, [&] { (void)curvature_serial(l, conn); });
  parallel = time_best_of(3, [&] { (void)curvature(l, conn); });
  std::printf("  curvature          serial %8.2f ms   omp %8.2f ms   x%.2f\n",
              serial, parallel, serial / parallel);

  serial = time_best_of(3, [&] { (void)covariant_derivative_serial(conn, t3); });
  parallel = time_best_of(3, [&] { (void)covariant_derivative(conn, t3); });
  std::printf("  nabla (rank 3)     serial %8.2f ms   omp %8.2f ms   x%.2f\n",
              serial, parallel, serial / parallel);

  serial = time_best_of(3, [&] { (void)ce_derivative_serial(l, t3); });
  parallel = time_best_of(3, [&] { (void)ce_derivative(l, t3); });
  std::printf("  exterior d (rank3) serial %8.2f ms   omp %8.2f ms   x%.2f\n",
              serial, parallel, serial / parallel);

  serial = time_best_of(3, [&] { (void)dt_via_curvature_formula_serial(conn, t3); });
  parallel = time_best_of(3, [&] { (void)dt_via_curvature_formula(conn, t3); });
  std::printf("  dT assembly        serial %8.2f ms   omp %8.2f ms   x%.2f\n",
              serial, parallel, serial / parallel);
}

void bench_twistor() {
  const Model m = builtin("solv8");
  SuiteOptions opt;
  const PreparedModel p = prepare(m, opt);
  const TwistorContext ctx = make_twistor_context(p.model, p.tc, p.bundle, p.hkt);
  const auto grid = twistor_grid(60, 42);
  double serial = time_best_of(3, [&] {
    (void)gray_hervella_serial(ctx, 2, 1.0, grid);
  });
  double parallel = time_best_of(3, [&] { (void)gray_hervella(ctx, 2, 1.0, grid); });
  std::printf("twistor grid (%zu points, solv8)\n", grid.size());
  std::printf("  classification     serial %8.2f ms   omp %8.2f ms   x%.2f\n",
              serial, parallel, serial / parallel);
}

} // namespace

int main() {
  std::printf("threads: %d\n", omp_get_max_threads());
  for (int dim : {8, 16, 24}) bench_dim(dim);
  bench_twistor();
  return 0;
}
