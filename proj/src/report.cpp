#include "qkt/report.hpp"

#include <algorithm>
#include <cstdio>
#include <sstream>

namespace qkt {

std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string escape(const std::string& s) {
  std::string out;
  out.reserve(s.size() + 2);
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      default: out += c;
    }
  }
  return out;
}

} // namespace

void Report::finalize() {
  std::stable_sort(checks.begin(), checks.end(),
                   [](const Check& a, const Check& b) { return a.id < b.id; });
  overall_pass = true;
  for (const Check& c : checks) overall_pass = overall_pass && c.pass;
}

std::string Report::to_json(bool include_wall_time) const {
  std::ostringstream os;
  os << "{\n";
  os << "  \"model\": \"" << escape(model) << "\",\n";
  os << "  \"suite\": \"" << escape(suite) << "\",\n";
  os << "  \"tolerance\": " << format_double(tolerance) << ",\n";
  os << "  \"checks\": [\n";
  for (std::size_t i = 0; i < checks.size(); ++i) {
    const Check& c = checks[i];
    os << "    {\"id\": \"" << escape(c.id) << "\", \"description\": \""
       << escape(c.description) << "\", \"paper_ref\": \"" << escape(c.ref)
       << "\", \"lhs\": " << format_double(c.lhs)
       << ", \"rhs\": " << format_double(c.rhs)
       << ", \"abs_err\": " << format_double(c.abs_err)
       << ", \"tol\": " << format_double(c.tol)
       << ", \"pass\": " << (c.pass ? "true" : "false") << "}"
       << (i + 1 < checks.size() ? "," : "") << "\n";
  }
  os << "  ],\n";
  os << "  \"overall_pass\": " << (overall_pass ? "true" : "false");
  if (include_wall_time)
    os << ",\n  \"wall_time_ms\": " << format_double(wall_time_ms);
  os << "\n}\n";
  return os.str();
}

} // namespace qkt
