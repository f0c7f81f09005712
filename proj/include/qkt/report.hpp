#ifndef QKT_REPORT_HPP
#define QKT_REPORT_HPP

#include <string>
#include <vector>

#include "qkt/curvature.hpp"

namespace qkt {

// Machine-readable verification report. Serialization is deterministic:
// checks are sorted by id and numbers carry 17 significant digits, so two
// runs with the same flags produce identical documents up to wall time.
struct Report {
  std::string model;
  std::string suite;
  double tolerance = 0.0;
  CheckList checks;
  bool overall_pass = false;
  double wall_time_ms = 0.0;

  void finalize();  // sorts checks, computes overall_pass
  std::string to_json(bool include_wall_time = true) const;
};

std::string format_double(double v);

} // namespace qkt

#endif
