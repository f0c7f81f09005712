#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <random>

#include "qkt/suites.hpp"

// The parallel kernels must agree bitwise with their serial references:
// every output entry is produced by one thread with the same per-entry
// arithmetic order, so the results are identical doubles.

using namespace qkt;

namespace {

Tensor seeded(int rank, int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() { return double(rng() >> 11) * 0x1.0p-53 - 0.5; };
  Tensor t(rank, dim);
  for (std::size_t i = 0; i < t.size(); ++i) t.data()[i] = uniform();
  return t;
}

MetricLieAlgebra random_algebra(int dim, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto uniform = [&rng]() { return double(rng() >> 11) * 0x1.0p-53 - 0.5; };
  MetricLieAlgebra l(dim);
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      for (int k = 0; k < dim; ++k) l.set_bracket(i, j, k, uniform());
  return l;
}

bool identical(const Tensor& a, const Tensor& b) {
  if (a.size() != b.size()) return false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a.data()[i] != b.data()[i]) return false;
  return true;
}

} // namespace

TEST_CASE("curvature kernel") {
  for (int dim : {8, 12}) {
    const MetricLieAlgebra l = random_algebra(dim, 17);
    Connection conn = levi_civita(l);
    conn.gamma += 0.5 * antisymmetrize3(seeded(3, dim, 18));
    CHECK(identical(curvature(l, conn), curvature_serial(l, conn)));
  }
}

TEST_CASE("covariant derivative kernel") {
  const MetricLieAlgebra l = random_algebra(8, 19);
  const Connection conn = levi_civita(l);
  for (int rank = 1; rank <= 4; ++rank)
    CHECK(identical(covariant_derivative(conn, seeded(rank, 8, 20 + std::uint64_t(rank))),
                    covariant_derivative_serial(conn, seeded(rank, 8, 20 + std::uint64_t(rank)))));
}

TEST_CASE("exterior derivative kernel") {
  const MetricLieAlgebra l = random_algebra(8, 25);
  for (int rank = 1; rank <= 3; ++rank) {
    const Tensor w = rank == 3 ? antisymmetrize3(seeded(3, 8, 26))
                               : seeded(rank, 8, 26 + std::uint64_t(rank));
    CHECK(identical(ce_derivative(l, w), ce_derivative_serial(l, w)));
  }
}

TEST_CASE("dT assembly kernel") {
  const Model m = builtin("solv8");
  const TypeProjector proj(8, m.triple.j);
  const TorsionConnection tc = qkt_find(m.algebra, m.triple, proj);
  CHECK(identical(dt_via_curvature_formula(tc.conn, tc.torsion),
                  dt_via_curvature_formula_serial(tc.conn, tc.torsion)));
}

TEST_CASE("twistor grid classification kernel") {
  const PreparedModel p = prepare(builtin("solv8"), SuiteOptions{});
  const TwistorContext ctx = make_twistor_context(p.model, p.tc, p.bundle, p.hkt);
  const auto grid = twistor_grid(12, 42);
  for (int which = 1; which <= 2; ++which) {
    const ClassReport a = gray_hervella(ctx, which, 1.0, grid);
    const ClassReport b = gray_hervella_serial(ctx, which, 1.0, grid);
    CHECK(a.kaehler == b.kaehler);
    CHECK(a.hermitian == b.hermitian);
    CHECK(a.g1 == b.g1);
    CHECK(a.semi_kaehler == b.semi_kaehler);
    CHECK(a.quasi_kaehler == b.quasi_kaehler);
    CHECK(a.nearly_kaehler == b.nearly_kaehler);
    CHECK(a.almost_kaehler == b.almost_kaehler);
    CHECK(a.trf_vs_t == b.trf_vs_t);
  }
}
