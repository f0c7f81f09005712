#ifndef QKT_MODELS_HPP
#define QKT_MODELS_HPP

#include <string>

#include "qkt/torsion.hpp"

namespace qkt {

struct Model {
  std::string name;
  MetricLieAlgebra algebra;
  QuaternionicTriple triple;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct JacobiViolation : std::runtime_error {
  JacobiViolation(double r)
      : std::runtime_error("bracket constants violate the Jacobi identity, residual " +
                           std::to_string(r)),
        residual(r) {}
  double residual;
};
struct TripleViolation : std::runtime_error {
  TripleViolation(const std::string& which, double r)
      : std::runtime_error("quaternionic triple constraint failed: " + which +
                           ", residual " + std::to_string(r)),
        residual(r) {}
  double residual;
};

// built-in catalog: flat8, hopf8, solv8
Model builtin(const std::string& name);
std::vector<std::string> builtin_names();

// Load a model file (JSON document with fields dim, brackets, J1, J2 and
// an optional SPD metric). A non-identity metric is orthonormalized and
// the brackets and structures are rewritten in the new frame.
Model load_model(const std::string& path);
Model model_from_json_text(const std::string& text);

// serialization (round-trips through load)
std::string model_to_json_text(const Model& m);
void save_model(const Model& m, const std::string& path);

enum class ModelClass {
  HyperKaehler,       // HKT with T = 0
  HktBalanced,        // HKT, T != 0, t = 0
  Hkt,                // HKT, T != 0, t != 0
  QktInstanton,       // QKT only, instanton type
  Qkt,                // QKT only
  None,               // no compatible torsion connection
};

struct ValidationReport {
  double jacobi_residual = 0.0;
  TripleReport triple;
  ModelClass cls = ModelClass::None;
  double torsion_norm_sq = 0.0;
  double t_norm_sq = 0.0;
  std::string describe() const;
};

ValidationReport validate(const Model& m);

} // namespace qkt

#endif
