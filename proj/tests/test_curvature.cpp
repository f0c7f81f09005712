#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "qkt/suites.hpp"

using namespace qkt;

namespace {

PreparedModel prep(const char* name) {
  return prepare(builtin(name), SuiteOptions{});
}

void check_all(const CheckList& cs) {
  for (const Check& c : cs) {
    INFO(c.id, " abs_err=", c.abs_err, " tol=", c.tol);
    CHECK(c.pass);
  }
}

const Check& find(const CheckList& cs, const std::string& id) {
  for (const Check& c : cs)
    if (c.id == id) return c;
  REQUIRE(false);
  return cs.front();
}

} // namespace

TEST_CASE("curvature tensor") {
  SUBCASE("flat model") {
    const PreparedModel p = prep("flat8");
    CHECK(p.bundle.r.max_abs() == 0.0);
    CHECK(p.bundle.rg.max_abs() == 0.0);
  }
  SUBCASE("group block has round positive curvature") {
    const Model m = builtin("hopf8");
    const Tensor rg = curvature(m.algebra, levi_civita(m.algebra));
    // closed form for the bi-invariant block: sectional curvature
    // K(e1,e2) = |[e1,e2]|^2 / 4 = 1
    CHECK(rg(1, 2, 2, 1) == doctest::Approx(1.0));
    CHECK(rg(2, 3, 3, 2) == doctest::Approx(1.0));
    CHECK(rg(3, 1, 1, 3) == doctest::Approx(1.0));
  }
  SUBCASE("symmetries on all built-ins") {
    for (const auto& name : builtin_names())
      check_all(curvature_symmetry_checks(prep(name.c_str()).bundle, 1e-12));
  }
}

TEST_CASE("ricci forms and splitting") {
  SUBCASE("flat model: everything vanishes") {
    const PreparedModel p = prep("flat8");
    for (const Tensor& rho : p.bundle.rho) CHECK(rho.max_abs() == 0.0);
  }
  SUBCASE("hyper model: the connection is Ricci-form flat") {
    const PreparedModel p = prep("hopf8");
    for (const Tensor& rho : p.bundle.rho) CHECK(rho.max_abs() < 1e-10);
  }
  SUBCASE("twisted model: nonzero forms, commutator identity") {
    const PreparedModel p = prep("solv8");
    double m = 0.0;
    for (const Tensor& rho : p.bundle.rho) m = std::max(m, rho.max_abs());
    CHECK(m > 0.5);
    check_all(ricci_commutator_checks(p.bundle, p.model.triple, 1e-10));
  }
  SUBCASE("Levi-Civita curvature on the twisted model does not split") {
    const PreparedModel p = prep("solv8");
    CurvatureBundle fake = p.bundle;
    fake.r = fake.rg;
    for (int a = 0; a < 3; ++a)
      fake.rho[std::size_t(a)] = ricci_form(fake.rg, p.model.triple[a]);
    CHECK(curvature_split_residual(fake, p.model.triple) > 0.1);
  }
}

TEST_CASE("scalar invariants") {
  SUBCASE("flat model") {
    const CurvatureBundle& b = prep("flat8").bundle;
    CHECK(b.scal == 0.0);
    CHECK(b.scal_g == 0.0);
    CHECK(b.scal_q == 0.0);
    CHECK(b.scal_gq == 0.0);
  }
  SUBCASE("hyper model has vanishing quaternionic scalar curvature") {
    const CurvatureBundle& b = prep("hopf8").bundle;
    CHECK(std::abs(b.scal_q) < 1e-10);
    CHECK(b.scal_g == doctest::Approx(6.0));
    CHECK(b.scal_gq == doctest::Approx(2.0));
  }
  SUBCASE("twisted model: table structure and regression values") {
    const CurvatureBundle& b = prep("solv8").bundle;
    for (int a = 0; a < 3; ++a) {
      CHECK(b.scal_table[a][a] == doctest::Approx(b.scal_q).epsilon(1e-10));
      for (int c = 0; c < 3; ++c)
        if (a != c) CHECK(std::abs(b.scal_table[a][c]) < 1e-10);
    }
    // pinned by uniqueness of the torsion and cross-checked by the trace
    // relations below
    CHECK(b.scal_q == doctest::Approx(-8.0));
    CHECK(b.scal_gq == doctest::Approx(-8.0));
    CHECK(b.scal_g == doctest::Approx(-56.0));
    CHECK(b.scal == doctest::Approx(-146.0));
    CHECK(b.norm_torsion_sq == doctest::Approx(360.0));
    CHECK(b.norm_t_sq == doctest::Approx(100.0));
    CHECK(b.delta_t == doctest::Approx(70.0));
    // consistency of the frozen values through the scalar relations
    const double n = 2.0;
    CHECK(b.scal_g ==
          doctest::Approx((n + 2) / n * b.scal_q - 3 * b.delta_t +
                          2 * b.norm_t_sq - b.norm_torsion_sq / 12.0));
    CHECK(b.scal ==
          doctest::Approx((n + 2) / n * b.scal_q - 3 * b.delta_t +
                          2 * b.norm_t_sq - b.norm_torsion_sq / 3.0));
  }
}

TEST_CASE("two routes to dT agree") {
  for (const char* name : {"hopf8", "solv8"}) {
    const PreparedModel p = prep(name);
    const double scale = 1.0 + p.bundle.d_torsion_ce.max_abs();
    CHECK(max_abs_diff(p.bundle.d_torsion, p.bundle.d_torsion_ce) / scale <
          1e-10);
  }
}

TEST_CASE("identity suites pass on every built-in") {
  for (const auto& name : builtin_names()) {
    const PreparedModel p = prep(name.c_str());
    const QuaternionicTriple& q = p.model.triple;
    const CurvatureBundle& b = p.bundle;
    check_all(verify_prop_nov(b, q, 1e-9));
    check_all(verify_orp1(b, q, 1e-9));
    check_all(verify_eq22(b, q, 1e-9));
    check_all(verify_orp2_orp4(b, q, 1e-9));
    check_all(th11_pointwise(b, 1e-9));
    check_all(verify_ric1(b, q, 1e-9));
    check_all(instanton_and_star_ricci(b, q, 1e-9));
    check_all(lemma_trace_checks(b, q, 1e-10));
  }
}

TEST_CASE("pointwise scalar defects") {
  SUBCASE("hyper model: positive defect from the torsion 1-form") {
    const CurvatureBundle& b = prep("hopf8").bundle;
    const CheckList cs = th11_pointwise(b, 1e-9);
    const Check& first = find(cs, "curv.th11.first");
    CHECK(first.pass);
    CHECK(first.lhs > 0.0);
    // delta t = 0 on the unimodular model, so the defect is |t|^2 = 4 > 0
    const double defect = b.scal_g - b.scal_gq - (2.0 / b.n) * b.scal_q;
    CHECK(defect == doctest::Approx(4.0));
    CHECK(std::abs(b.delta_t) < 1e-12);
    CHECK(defect == doctest::Approx(b.norm_t_sq));
  }
  SUBCASE("flat model: torsion-free flags") {
    const CurvatureBundle& b = prep("flat8").bundle;
    for (const Check& c : th11_pointwise(b, 1e-9)) {
      CHECK(c.pass);
      CHECK(std::abs(c.lhs) < 1e-12);
    }
  }
}

TEST_CASE("instanton criteria") {
  // all three built-ins are of instanton type (dt = 0 on each); the three
  // criteria must agree everywhere
  for (const auto& name : builtin_names()) {
    const PreparedModel p = prep(name.c_str());
    CHECK(instanton_flag(p.bundle, p.model.triple, 1e-9));
    const CheckList cs = instanton_and_star_ricci(p.bundle, p.model.triple, 1e-9);
    CHECK(find(cs, "curv.instanton.consistent").pass);
    // star-Ricci symmetry on hyper models
    if (name != "solv8") CHECK(find(cs, "curv.instanton.star_sym").lhs < 1e-9);
  }
}

TEST_CASE("special homothety fit") {
  SUBCASE("degenerate on models with vanishing Ricci forms") {
    for (const char* name : {"flat8", "hopf8"}) {
      const PreparedModel p = prep(name);
      const HomothetyFit fit =
          special_homothety_check(p.bundle, p.model.triple, true);
      CHECK(fit.degenerate);
      CHECK_FALSE(fit.c_squared.has_value());
    }
  }
  SUBCASE("twisted model: best-fit constant is negative, no homothety") {
    const PreparedModel p = prep("solv8");
    const HomothetyFit fit =
        special_homothety_check(p.bundle, p.model.triple, true);
    CHECK_FALSE(fit.degenerate);
    CHECK(fit.constant == doctest::Approx(-2.0));
    CHECK(fit.residual > 1.0);
    CHECK_FALSE(fit.c_squared.has_value());
  }
}

TEST_CASE("hyper suite") {
  SUBCASE("hopf8") {
    const PreparedModel p = prep("hopf8");
    const CheckList cs =
        hkt_suite(p.model.algebra, p.model.triple, p.bundle, 1e-9);
    check_all(cs);
    CHECK(find(cs, "hkt.lee_is_t").abs_err < 1e-12);
    CHECK(find(cs, "hkt.pointwise.first").lhs == doctest::Approx(4.0));
    CHECK(find(cs, "hkt.pointwise.second").lhs == doctest::Approx(2.0));
  }
  SUBCASE("flat8 reports the torsion-free flags") {
    const PreparedModel p = prep("flat8");
    const CheckList cs =
        hkt_suite(p.model.algebra, p.model.triple, p.bundle, 1e-9);
    check_all(cs);
    CHECK(find(cs, "hkt.flat.scal_g").pass);
    CHECK(find(cs, "hkt.flat.scal_gq").pass);
    CHECK(find(cs, "hkt.balanced.coclosed").pass);
  }
}

TEST_CASE("lemma traces against a brute-force contraction") {
  const PreparedModel p = prep("solv8");
  const Tensor& t3 = p.bundle.torsion;
  const QuaternionicTriple& q = p.model.triple;
  const double nsq = norm_sq_3form(t3);
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 3; ++c) {
      double tr = 0.0;  // independent full contraction
      for (int i = 0; i < 8; ++i)
        for (int j = 0; j < 8; ++j)
          for (int p_ = 0; p_ < 8; ++p_)
            for (int r = 0; r < 8; ++r)
              for (int m = 0; m < 8; ++m)
                tr += t3(i, j, m) * q[a](p_, i) * q[c](r, j) * t3(p_, r, m);
      if (a == c)
        CHECK(tr == doctest::Approx(nsq / 3.0));
      else
        CHECK(std::abs(tr) < 1e-10 * (1.0 + nsq));
    }
}
