#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <fstream>

#include "qkt/suites.hpp"

using namespace qkt;

namespace {

std::string model_dir() {
#ifdef QKT_MODEL_DIR
  return QKT_MODEL_DIR;
#else
  return "models";
#endif
}

} // namespace

TEST_CASE("built-in catalog") {
  CHECK(validate(builtin("flat8")).cls == ModelClass::HyperKaehler);
  CHECK(validate(builtin("hopf8")).cls == ModelClass::Hkt);
  CHECK(validate(builtin("solv8")).cls == ModelClass::QktInstanton);
  CHECK_THROWS_AS(builtin("nope"), ParseError);
}

TEST_CASE("save then load is the identity on the built-ins") {
  for (const auto& name : builtin_names()) {
    const Model m = builtin(name);
    const Model back = model_from_json_text(model_to_json_text(m));
    CHECK(max_abs_diff(back.algebra.c, m.algebra.c) == 0.0);
    for (int a = 0; a < 3; ++a)
      CHECK((back.triple[a] - m.triple[a]).cwiseAbs().maxCoeff() == 0.0);
    CHECK(back.name == m.name);
  }
}

TEST_CASE("parse errors name the offending data") {
  CHECK_THROWS_WITH_AS(model_from_json_text("{\"dim\": 6}"),
                       doctest::Contains("multiple of 4"), ParseError);
  CHECK_THROWS_WITH_AS(model_from_json_text("{\"dim\": 8}"),
                       doctest::Contains("brackets"), ParseError);
  CHECK_THROWS_AS(model_from_json_text("not json at all"), ParseError);

  // conflicting (i,j) and (j,i) rows
  const char* doc = R"({
    "dim": 8,
    "brackets": [[1, 2, 3, 2.0], [2, 1, 3, 2.0]],
    "J1": [], "J2": []
  })";
  CHECK_THROWS_WITH_AS(model_from_json_text(doc), doctest::Contains("(1,2)"),
                       ParseError);
}

TEST_CASE("jacobi and triple violations are rejected") {
  Model m = builtin("hopf8");
  m.algebra.set_bracket(1, 3, 1, 0.5);  // [e1,e3] gains an e1 part: breaks Jacobi
  CHECK_THROWS_AS(model_from_json_text(model_to_json_text(m)), JacobiViolation);

  Model m2 = builtin("flat8");
  m2.triple.j[1] = m2.triple[0];  // J2 = J1 violates anticommutation
  CHECK_THROWS_AS(model_from_json_text(model_to_json_text(m2)), TripleViolation);
}

TEST_CASE("a non-identity metric is orthonormalized consistently") {
  // express hopf8 in a rescaled frame f_i = s_i e_i; supplying the metric
  // G = diag(s_i^2) must recover an equivalent orthonormal model
  const Model base = builtin("hopf8");
  const double s0 = 2.0, s_rest = 0.5;
  std::string doc = "{\n  \"dim\": 8,\n  \"brackets\": [";
  // brackets in the scaled frame: [f_i,f_j] = s_i s_j [e_i,e_j]
  //                            = (s_i s_j / s_k) c(i,j,k) f_k
  bool first = true;
  for (int i = 0; i < 8; ++i)
    for (int j = i + 1; j < 8; ++j)
      for (int k = 0; k < 8; ++k) {
        const double c = base.algebra.c(i, j, k);
        if (c == 0.0) continue;
        auto s = [&](int idx) { return idx == 0 ? s0 : s_rest; };
        const double v = s(i) * s(j) / s(k) * c;
        doc += (first ? "" : ", ");
        doc += "[" + std::to_string(i) + "," + std::to_string(j) + "," +
               std::to_string(k) + "," + std::to_string(v) + "]";
        first = false;
      }
  doc += "],\n  \"J1\": [";
  // J in the scaled frame: J^f = S^-1 J S with S = diag(s_i)
  auto dump = [&](const EndoMatrix& j) {
    std::string out = "";
    for (int r = 0; r < 8; ++r) {
      out += (r ? ",[" : "[");
      for (int c = 0; c < 8; ++c) {
        auto s = [&](int idx) { return idx == 0 ? s0 : s_rest; };
        out += (c ? "," : "") + std::to_string(j(r, c) * s(c) / s(r));
      }
      out += "]";
    }
    return out;
  };
  doc += dump(base.triple[0]) + "],\n  \"J2\": [" + dump(base.triple[1]);
  doc += "],\n  \"metric\": [";
  for (int r = 0; r < 8; ++r) {
    doc += (r ? ",[" : "[");
    for (int c = 0; c < 8; ++c) {
      const double v = (r == c) ? (r == 0 ? s0 * s0 : s_rest * s_rest) : 0.0;
      doc += (c ? "," : "") + std::to_string(v);
    }
    doc += "]";
  }
  doc += "]\n}";

  const Model loaded = model_from_json_text(doc);
  CHECK(jacobi_check(loaded.algebra) < 1e-12);
  CHECK(verify_triple(loaded.triple).max_res() < 1e-12);
  // the orthonormalized model is isometric to hopf8: same torsion norm
  const TorsionConnection tc = hkt_detect(loaded.algebra, loaded.triple);
  CHECK(norm_sq_3form(tc.torsion) == doctest::Approx(24.0));
}

TEST_CASE("the shipped nilpotent config is validated as balanced") {
  const Model m = load_model(model_dir() + "/dotti_fino8.json");
  const ValidationReport rep = validate(m);
  CHECK(rep.cls == ModelClass::HktBalanced);
  CHECK(rep.torsion_norm_sq > 1.0);
  CHECK(rep.t_norm_sq < 1e-18);

  // balanced consequences: coclosed torsion, invariant symmetric Ricci
  const PreparedModel p = prepare(m, SuiteOptions{});
  const CheckList cs = hkt_suite(p.model.algebra, p.model.triple, p.bundle, 1e-9);
  for (const Check& c : cs) {
    INFO(c.id);
    CHECK(c.pass);
  }
}

TEST_CASE("classification text") {
  CHECK(validate(builtin("flat8")).describe() == "hyperkaehler");
  CHECK(validate(builtin("solv8")).describe() == "QKT, non-HKT, instanton type");
}
