#ifndef QKT_SUITES_HPP
#define QKT_SUITES_HPP

#include <optional>

#include "qkt/models.hpp"
#include "qkt/report.hpp"
#include "qkt/twistor.hpp"

namespace qkt {

struct SuiteOptions {
  double tol = 1e-9;          // identity tolerance
  double structural_tol = 1e-12;
  double c = 1.0;             // twistor metric parameter
  std::uint64_t seed = 42;    // grid / property sampling seed
  int grid_extra = 20;
  // optional re-gauging: the admissible basis is rotated and the twistor
  // grid is pulled back so the same twistor points are evaluated
  std::optional<std::array<std::array<double, 3>, 3>> gauge;
};

// Everything the suites share for one model: the torsion connection of
// the structure (the common one when the model is hyper) and the
// curvature data derived from it.
struct PreparedModel {
  Model model;
  TorsionConnection tc;
  bool hkt = false;
  CurvatureBundle bundle;
};

PreparedModel prepare(const Model& m, const SuiteOptions& opt);

Report run_structure_suite(const PreparedModel& p, const SuiteOptions& opt);
Report run_curvature_suite(const PreparedModel& p, const SuiteOptions& opt);
Report run_hkt_suite(const PreparedModel& p, const SuiteOptions& opt);
Report run_twistor_suite(const PreparedModel& p, const SuiteOptions& opt);

// suite = structure | curvature | hkt | twistor | all
Report run_suite(const Model& m, const std::string& suite,
                 const SuiteOptions& opt);

std::vector<std::string> suite_names();

} // namespace qkt

#endif
