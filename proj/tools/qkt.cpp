// Batch verification runner: checks the structure, curvature, hyper and
// twistor identity suites on built-in or user-supplied models and emits
// machine-readable reports.

#include <fstream>
#include <iostream>

#include <CLI11.hpp>

#include "qkt/suites.hpp"

namespace {

qkt::Model resolve_model(const std::string& spec) {
  for (const std::string& n : qkt::builtin_names())
    if (n == spec) return qkt::builtin(n);
  return qkt::load_model(spec);
}

void print_report(const qkt::Report& rep) {
  for (const qkt::Check& c : rep.checks) {
    std::cout << (c.pass ? "  pass  " : "  FAIL  ") << c.id
              << "  abs_err=" << qkt::format_double(c.abs_err)
              << "  tol=" << qkt::format_double(c.tol) << "\n";
  }
  std::cout << (rep.overall_pass ? "OVERALL PASS" : "OVERALL FAIL") << "  ("
            << rep.checks.size() << " checks, model " << rep.model
            << ", suite " << rep.suite << ")\n";
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"verification workbench for torsion connections on "
               "quaternionic frame models"};
  app.require_subcommand(1);

  auto* list = app.add_subcommand("list", "built-in models and their classes");

  std::string model_spec, suite = "all", out_path;
  double tol = 1e-9, c = 1.0;
  std::uint64_t seed = 42;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--model", model_spec, "built-in name or model file path")
      ->required();
  verify->add_option("--suite", suite,
                     "structure | curvature | hkt | twistor | all");
  verify->add_option("--tol", tol, "identity tolerance");
  verify->add_option("--c", c, "twistor metric parameter");
  verify->add_option("--seed", seed, "sampling seed");
  verify->add_option("--out", out_path, "write the JSON report here");

  std::string cls_model;
  double cls_c = 1.0;
  std::uint64_t cls_seed = 42;
  auto* classify = app.add_subcommand("classify",
                                      "almost hermitian classes of the twistor "
                                      "family over the point grid");
  classify->add_option("--model", cls_model, "built-in name or model file path")
      ->required();
  classify->add_option("--c", cls_c, "twistor metric parameter");
  classify->add_option("--seed", cls_seed, "sampling seed");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*list) {
      for (const std::string& n : qkt::builtin_names()) {
        const qkt::Model m = qkt::builtin(n);
        const qkt::ValidationReport v = qkt::validate(m);
        std::cout << n << "  dim=" << m.algebra.dim << "  " << v.describe()
                  << "\n";
      }
      return 0;
    }
    if (*verify) {
      bool known = suite == "all";
      for (const std::string& s : qkt::suite_names()) known = known || s == suite;
      if (!known) {
        std::cerr << "unknown suite '" << suite << "'\n";
        return 2;
      }
      const qkt::Model m = resolve_model(model_spec);
      qkt::SuiteOptions opt;
      opt.tol = tol;
      opt.c = c;
      opt.seed = seed;
      const qkt::Report rep = qkt::run_suite(m, suite, opt);
      print_report(rep);
      if (!out_path.empty()) {
        std::ofstream f(out_path);
        f << rep.to_json();
      }
      return rep.overall_pass ? 0 : 1;
    }
    if (*classify) {
      const qkt::Model m = resolve_model(cls_model);
      qkt::SuiteOptions opt;
      opt.c = cls_c;
      opt.seed = cls_seed;
      const qkt::PreparedModel p = qkt::prepare(m, opt);
      const qkt::TwistorContext ctx =
          qkt::make_twistor_context(p.model, p.tc, p.bundle, p.hkt);
      const auto grid = qkt::twistor_grid(opt.grid_extra, opt.seed);
      std::cout << "model " << m.name << "  c=" << cls_c << "  grid "
                << grid.size() << " points\n";
      for (int which = 1; which <= 2; ++which) {
        const qkt::ClassReport r = qkt::gray_hervella(ctx, which, cls_c, grid);
        const double s = 1e-8 * (1.0 + r.trf_max + r.kaehler);
        auto row = [&](const char* name, double v) {
          std::cout << "  I" << which << "  " << name << "  residual "
                    << qkt::format_double(v) << (v < s ? "  [in class]" : "")
                    << "\n";
        };
        row("kaehler       ", r.kaehler);
        row("hermitian     ", r.hermitian);
        row("G1            ", r.g1);
        row("semi-kaehler  ", r.semi_kaehler);
        row("quasi-kaehler ", r.quasi_kaehler);
        row("nearly-kaehler", r.nearly_kaehler);
        row("almost-kaehler", r.almost_kaehler);
      }
      return 0;
    }
  } catch (const qkt::ParseError& e) {
    std::cerr << "model error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
