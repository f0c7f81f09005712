#include "qkt/models.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

#include "qkt/curvature.hpp"

namespace qkt {

namespace {

// left multiplication by i, j, k on (1, i, j, k)
EndoMatrix quat_block(char which) {
  EndoMatrix m = EndoMatrix::Zero(4, 4);
  switch (which) {
    case 'i':
      m(1, 0) = 1; m(0, 1) = -1; m(3, 2) = 1; m(2, 3) = -1;
      break;
    case 'j':
      m(2, 0) = 1; m(3, 1) = -1; m(0, 2) = -1; m(1, 3) = 1;
      break;
    case 'k':
      m(3, 0) = 1; m(2, 1) = 1; m(1, 2) = -1; m(0, 3) = -1;
      break;
  }
  return m;
}

EndoMatrix two_blocks(char which) {
  EndoMatrix m = EndoMatrix::Zero(8, 8);
  m.block(0, 0, 4, 4) = quat_block(which);
  m.block(4, 4, 4, 4) = quat_block(which);
  return m;
}

QuaternionicTriple standard_triple8() {
  return QuaternionicTriple{{two_blocks('i'), two_blocks('j'), two_blocks('k')}};
}

void check_model(const Model& m) {
  const double jres = jacobi_check(m.algebra);
  if (jres > 1e-12) throw JacobiViolation(jres);
  const TripleReport tr = verify_triple(m.triple);
  if (tr.square_res > 1e-12) throw TripleViolation("J_a^2 = -id", tr.square_res);
  if (tr.product_res > 1e-12) throw TripleViolation("J1 J2 = J3", tr.product_res);
  if (tr.anticommute_res > 1e-12)
    throw TripleViolation("J1 J2 = -J2 J1", tr.anticommute_res);
  if (tr.orthogonality_res > 1e-12)
    throw TripleViolation("J_a orthogonal", tr.orthogonality_res);
}

} // namespace

std::vector<std::string> builtin_names() { return {"flat8", "hopf8", "solv8"}; }

Model builtin(const std::string& name) {
  Model m;
  m.name = name;
  m.triple = standard_triple8();
  m.algebra = MetricLieAlgebra(8);
  if (name == "flat8") {
    // abelian torus model
  } else if (name == "hopf8") {
    m.algebra.set_bracket(1, 2, 3, 2.0);
    m.algebra.set_bracket(2, 3, 1, 2.0);
    m.algebra.set_bracket(3, 1, 2, 2.0);
  } else if (name == "solv8") {
    for (int i = 1; i < 8; ++i) m.algebra.set_bracket(0, i, i, 1.0);
  } else {
    throw ParseError("unknown built-in model '" + name + "'");
  }
  check_model(m);
  return m;
}

Model model_from_json_text(const std::string& text) {
  nlohmann::json doc;
  try {
    doc = nlohmann::json::parse(text);
  } catch (const std::exception& e) {
    throw ParseError(std::string("invalid model document: ") + e.what());
  }
  if (!doc.contains("dim")) throw ParseError("missing field 'dim'");
  const int d = doc["dim"].get<int>();
  if (d <= 0 || d % 4 != 0) throw ParseError("dim must be a positive multiple of 4");

  Model m;
  m.name = doc.value("name", std::string("user"));
  m.algebra = MetricLieAlgebra(d);
  if (!doc.contains("brackets")) throw ParseError("missing field 'brackets'");
  for (const auto& row : doc["brackets"]) {
    if (!row.is_array() || row.size() != 4)
      throw ParseError("bracket rows must be [i, j, k, value]");
    const int i = row[0].get<int>(), j = row[1].get<int>(), k = row[2].get<int>();
    const double v = row[3].get<double>();
    if (i < 0 || i >= d || j < 0 || j >= d || k < 0 || k >= d)
      throw ParseError("bracket index out of range");
    if (i == j && v != 0.0)
      throw ParseError("non-antisymmetric bracket at (" + std::to_string(i) +
                       "," + std::to_string(j) + ")");
    m.algebra.c(i, j, k) += v;
  }
  // enforce antisymmetry from the sparse rows: a row gives both orders
  for (int i = 0; i < d; ++i)
    for (int j = i + 1; j < d; ++j)
      for (int k = 0; k < d; ++k) {
        const double a = m.algebra.c(i, j, k), b = m.algebra.c(j, i, k);
        if (a != 0.0 && b != 0.0 && std::abs(a + b) > 1e-12)
          throw ParseError("non-antisymmetric bracket at (" + std::to_string(i) +
                           "," + std::to_string(j) + ")");
        const double v = (a != 0.0) ? a : -b;
        m.algebra.c(i, j, k) = v;
        m.algebra.c(j, i, k) = -v;
      }

  auto read_matrix = [&](const char* key) {
    if (!doc.contains(key)) throw ParseError(std::string("missing field '") + key + "'");
    const auto& rows = doc[key];
    if (!rows.is_array() || int(rows.size()) != d)
      throw ParseError(std::string("field '") + key + "' must be a " +
                       std::to_string(d) + "x" + std::to_string(d) + " matrix");
    EndoMatrix out(d, d);
    for (int r = 0; r < d; ++r) {
      if (!rows[std::size_t(r)].is_array() || int(rows[std::size_t(r)].size()) != d)
        throw ParseError(std::string("field '") + key + "' must be square");
      for (int c = 0; c < d; ++c) out(r, c) = rows[std::size_t(r)][std::size_t(c)].get<double>();
    }
    return out;
  };

  EndoMatrix j1 = read_matrix("J1");
  EndoMatrix j2 = read_matrix("J2");

  if (doc.contains("metric")) {
    const EndoMatrix g = read_matrix("metric");
    if ((g - g.transpose()).cwiseAbs().maxCoeff() > 1e-12)
      throw ParseError("metric must be symmetric");
    Eigen::LLT<EndoMatrix> llt(g);
    if (llt.info() != Eigen::Success)
      throw ParseError("metric must be positive definite");
    // new frame f_a = sum_i S(i,a) e_i with S^t G S = id
    const EndoMatrix s = EndoMatrix(llt.matrixL()).transpose().inverse();
    const EndoMatrix sinv = s.inverse();
    Tensor c2(3, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c) {
          double acc = 0.0;
          for (int i = 0; i < d; ++i)
            for (int j = 0; j < d; ++j) {
              if (s(i, a) == 0.0 || s(j, b) == 0.0) continue;
              for (int k = 0; k < d; ++k)
                acc += s(i, a) * s(j, b) * m.algebra.c(i, j, k) * sinv(c, k);
            }
          c2(a, b, c) = acc;
        }
    m.algebra.c = c2;
    j1 = sinv * j1 * s;
    j2 = sinv * j2 * s;
  }

  m.triple = QuaternionicTriple{{j1, j2, j1 * j2}};
  check_model(m);
  return m;
}

Model load_model(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open model file '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json_text(ss.str());
}

std::string model_to_json_text(const Model& m) {
  nlohmann::json doc;
  doc["name"] = m.name;
  doc["dim"] = m.algebra.dim;
  nlohmann::json rows = nlohmann::json::array();
  for (int i = 0; i < m.algebra.dim; ++i)
    for (int j = i + 1; j < m.algebra.dim; ++j)
      for (int k = 0; k < m.algebra.dim; ++k)
        if (m.algebra.c(i, j, k) != 0.0)
          rows.push_back({i, j, k, m.algebra.c(i, j, k)});
  doc["brackets"] = rows;
  auto dump_matrix = [&](const EndoMatrix& j) {
    nlohmann::json out = nlohmann::json::array();
    for (int r = 0; r < j.rows(); ++r) {
      nlohmann::json row = nlohmann::json::array();
      for (int c = 0; c < j.cols(); ++c) row.push_back(j(r, c));
      out.push_back(row);
    }
    return out;
  };
  doc["J1"] = dump_matrix(m.triple[0]);
  doc["J2"] = dump_matrix(m.triple[1]);
  return doc.dump(2);
}

void save_model(const Model& m, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write model file '" + path + "'");
  out << model_to_json_text(m) << "\n";
}

std::string ValidationReport::describe() const {
  switch (cls) {
    case ModelClass::HyperKaehler: return "hyperkaehler";
    case ModelClass::HktBalanced: return "HKT, balanced";
    case ModelClass::Hkt: return "HKT, non-balanced";
    case ModelClass::QktInstanton: return "QKT, non-HKT, instanton type";
    case ModelClass::Qkt: return "QKT, non-HKT";
    case ModelClass::None: return "no compatible torsion connection";
  }
  return "unknown";
}

ValidationReport validate(const Model& m) {
  ValidationReport rep;
  rep.jacobi_residual = jacobi_check(m.algebra);
  rep.triple = verify_triple(m.triple);
  try {
    const TorsionConnection tc = hkt_detect(m.algebra, m.triple);
    rep.torsion_norm_sq = norm_sq_3form(tc.torsion);
    const Vec t = torsion_one_form(tc.torsion, m.triple);
    rep.t_norm_sq = t.squaredNorm();
    if (rep.torsion_norm_sq < 1e-18)
      rep.cls = ModelClass::HyperKaehler;
    else if (rep.t_norm_sq < 1e-18)
      rep.cls = ModelClass::HktBalanced;
    else
      rep.cls = ModelClass::Hkt;
    return rep;
  } catch (const NotHktError&) {
  } catch (const InfeasibleError&) {
  }
  try {
    const TypeProjector proj(m.algebra.dim, m.triple.j);
    const TorsionConnection tc = qkt_find(m.algebra, m.triple, proj);
    rep.torsion_norm_sq = norm_sq_3form(tc.torsion);
    const Vec t = torsion_one_form(tc.torsion, m.triple);
    rep.t_norm_sq = t.squaredNorm();
    const CurvatureBundle b = curvature_bundle(m.algebra, m.triple, tc);
    rep.cls = instanton_flag(b, m.triple, 1e-9) ? ModelClass::QktInstanton
                                                : ModelClass::Qkt;
  } catch (const InfeasibleError&) {
    rep.cls = ModelClass::None;
  }
  return rep;
}

} // namespace qkt
