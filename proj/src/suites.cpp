#include "qkt/suites.hpp"

#include <chrono>
#include <cmath>
#include <random>

namespace qkt {

namespace {

double now_ms() {
  return std::chrono::duration<double, std::milli>(
             std::chrono::steady_clock::now().time_since_epoch())
      .count();
}

std::array<double, 3> apply_rot_t(const std::array<std::array<double, 3>, 3>& r,
                                  const std::array<double, 3>& a) {
  // transpose action: pulls a grid point back through the re-gauging
  std::array<double, 3> out{};
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      out[std::size_t(i)] += r[std::size_t(j)][std::size_t(i)] * a[std::size_t(j)];
  return out;
}

std::vector<std::array<double, 3>> suite_grid(const SuiteOptions& opt) {
  auto grid = twistor_grid(opt.grid_extra, opt.seed);
  if (opt.gauge) {
    for (auto& a : grid) a = apply_rot_t(*opt.gauge, a);
  }
  return grid;
}

} // namespace

PreparedModel prepare(const Model& m, const SuiteOptions& opt) {
  PreparedModel p;
  p.model = m;
  if (opt.gauge) p.model.triple = rotate_triple(m.triple, *opt.gauge);
  try {
    p.tc = hkt_detect(p.model.algebra, p.model.triple);
    p.hkt = true;
  } catch (const NotHktError&) {
    const TypeProjector proj(p.model.algebra.dim, p.model.triple.j);
    p.tc = qkt_find(p.model.algebra, p.model.triple, proj);
    p.hkt = false;
  }
  p.bundle = curvature_bundle(p.model.algebra, p.model.triple, p.tc);
  return p;
}

Report run_structure_suite(const PreparedModel& p, const SuiteOptions& opt) {
  const double t0 = now_ms();
  Report rep;
  rep.model = p.model.name;
  rep.suite = "structure";
  rep.tolerance = opt.tol;
  const MetricLieAlgebra& l = p.model.algebra;
  const QuaternionicTriple& q = p.model.triple;
  const double stol = opt.structural_tol;

  rep.checks.push_back(make_check("structure.jacobi",
                                  "bracket constants satisfy the Jacobi identity",
                                  "metric Lie algebra axioms", jacobi_check(l),
                                  0.0, stol));
  const TripleReport tr = verify_triple(q);
  rep.checks.push_back(make_check("structure.triple.square", "J_a^2 = -id",
                                  "quaternionic identities", tr.square_res, 0.0,
                                  stol));
  rep.checks.push_back(make_check("structure.triple.product", "J1 J2 = J3",
                                  "quaternionic identities", tr.product_res, 0.0,
                                  stol));
  rep.checks.push_back(make_check("structure.triple.anticommute",
                                  "J1 J2 = -J2 J1", "quaternionic identities",
                                  tr.anticommute_res, 0.0, stol));
  rep.checks.push_back(make_check("structure.triple.orthogonal",
                                  "each J_a is orthogonal",
                                  "compatible metric", tr.orthogonality_res, 0.0,
                                  stol));

  const Connection lc = levi_civita(l);
  rep.checks.push_back(make_check("structure.lc.torsion_free",
                                  "the Koszul connection is torsion-free",
                                  "Levi-Civita connection",
                                  torsion_free_residual(l, lc), 0.0, stol));
  rep.checks.push_back(make_check("structure.lc.metric",
                                  "the Koszul connection is metric",
                                  "Levi-Civita connection", metric_residual(lc),
                                  0.0, stol));

  // d^2 = 0 on seeded forms
  std::mt19937_64 rng(opt.seed);
  auto uniform = [&rng]() { return double(rng() >> 11) * 0x1.0p-53 - 0.5; };
  Tensor w1(1, l.dim);
  for (std::size_t i = 0; i < w1.size(); ++i) w1.data()[i] = uniform();
  Tensor w2(2, l.dim);
  for (int i = 0; i < l.dim; ++i)
    for (int j = i + 1; j < l.dim; ++j) {
      const double v = uniform();
      w2(i, j) = v;
      w2(j, i) = -v;
    }
  const double d2 = std::max(ce_derivative(l, ce_derivative(l, w1)).max_abs(),
                             ce_derivative(l, ce_derivative(l, w2)).max_abs());
  rep.checks.push_back(make_check("structure.d_squared",
                                  "the exterior derivative squares to zero",
                                  "Jacobi identity consequence", d2, 0.0, stol));

  // per-structure skew-torsion connections
  double bres = 0.0, bnull = 0.0;
  for (int a = 0; a < 3; ++a) {
    const TorsionConnection tc = bismut(l, q[a]);
    bres = std::max(bres, tc.solve_residual);
    bnull = std::max(bnull, double(tc.null_space_dim));
  }
  rep.checks.push_back(make_check("structure.bismut.residual",
                                  "each (g, J_a) admits its skew-torsion connection",
                                  "unique connection with skew torsion", bres,
                                  0.0, opt.tol));
  rep.checks.push_back(make_check("structure.bismut.unique",
                                  "each per-structure solve is unique",
                                  "unique connection with skew torsion", bnull,
                                  0.0, 0.5));

  rep.checks.push_back(make_check(
      "structure.hkt_or_qkt",
      std::string("a compatible torsion connection exists (") +
          (p.hkt ? "hyper: common skew torsion" : "quaternionic: sp(1)-twisted") +
          ")",
      "existence of the torsion connection", p.tc.solve_residual, 0.0, opt.tol));

  if (p.hkt) {
    // consistency of the two routes to the same connection
    const TypeProjector proj(l.dim, q.j);
    const TorsionConnection joint = qkt_find(l, q, proj);
    rep.checks.push_back(make_check("structure.hkt_qkt_agree",
                                    "the joint solve reproduces the common torsion",
                                    "uniqueness of the structure",
                                    max_abs_diff(joint.torsion, p.tc.torsion),
                                    0.0, opt.tol));
    rep.checks.push_back(make_check("structure.hkt.omega_zero",
                                    "sp(1) forms vanish for the common connection",
                                    "hyper case of the structure equations",
                                    std::max({joint.omega[0].cwiseAbs().maxCoeff(),
                                              joint.omega[1].cwiseAbs().maxCoeff(),
                                              joint.omega[2].cwiseAbs().maxCoeff()}),
                                    0.0, opt.tol));
  }

  rep.checks.push_back(make_check("structure.qkt.t_unique",
                                  "the torsion part of the solution space is trivial",
                                  "uniqueness of the torsion",
                                  p.tc.torsion_null_component, 0.0, opt.tol));

  const TypeCheck tc_type = torsion_type_check(p.tc.torsion, q);
  rep.checks.push_back(make_check(
      "structure.qkt.type",
      "the torsion is of type (1,2)+(2,1) for each structure",
      "torsion type condition",
      std::max({tc_type.residual[0], tc_type.residual[1], tc_type.residual[2]}) /
          (1.0 + p.tc.torsion.max_abs()),
      0.0, stol * 1e2));

  const std::array<Vec, 3> omega = connection_one_forms(p.tc, q, opt.tol);
  rep.checks.push_back(make_check("structure.qkt.eq1",
                                  "the structure equations hold for the solution",
                                  "quaternionic connection equations",
                                  eq1_residual(p.tc.conn, q, omega), 0.0,
                                  opt.tol));
  double extraction = 0.0;
  for (int a = 0; a < 3; ++a)
    extraction = std::max(extraction,
                          (omega[std::size_t(a)] - p.tc.omega[std::size_t(a)])
                              .cwiseAbs()
                              .maxCoeff());
  rep.checks.push_back(make_check("structure.qkt.omega_extraction",
                                  "trace extraction reproduces the solved sp(1) forms",
                                  "sp(1) connection 1-forms", extraction, 0.0,
                                  opt.tol));

  const Vec t = torsion_one_form(p.tc.torsion, q, opt.tol);
  std::array<Vec, 3> per;
  for (int a = 0; a < 3; ++a)
    per[std::size_t(a)] = torsion_one_form_single(p.tc.torsion, q[a]);
  double spread = 0.0;
  for (int a = 1; a < 3; ++a)
    spread = std::max(spread, (per[std::size_t(a)] - per[0]).cwiseAbs().maxCoeff());
  rep.checks.push_back(make_check("structure.t.alpha_independent",
                                  "the torsion 1-form is structure-independent",
                                  "torsion 1-form", spread /
                                      (1.0 + t.cwiseAbs().maxCoeff()),
                                  0.0, opt.tol));

  rep.wall_time_ms = now_ms() - t0;
  rep.finalize();
  return rep;
}

Report run_curvature_suite(const PreparedModel& p, const SuiteOptions& opt) {
  const double t0 = now_ms();
  Report rep;
  rep.model = p.model.name;
  rep.suite = "curvature";
  rep.tolerance = opt.tol;
  const QuaternionicTriple& q = p.model.triple;
  const CurvatureBundle& b = p.bundle;

  auto add = [&rep](CheckList cs) {
    for (auto& c : cs) rep.checks.push_back(std::move(c));
  };
  add(curvature_symmetry_checks(b, opt.structural_tol));
  add(ricci_commutator_checks(b, q, opt.tol));
  add(dt_agreement_checks(b, opt.tol));
  add(lemma_trace_checks(b, q, opt.tol));
  add(verify_prop_nov(b, q, opt.tol));
  add(verify_orp1(b, q, opt.tol));
  add(verify_eq22(b, q, opt.tol));
  add(verify_orp2_orp4(b, q, opt.tol));
  add(th11_pointwise(b, opt.tol));
  add(verify_ric1(b, q, opt.tol));
  add(instanton_and_star_ricci(b, q, opt.tol));

  const bool inst = instanton_flag(b, q, opt.tol);
  const HomothetyFit fit = special_homothety_check(b, q, inst);
  std::string desc = fit.degenerate
                         ? "homothety fit degenerate (vanishing Ricci forms)"
                         : (fit.c_squared ? "homothety constant c^2 = " +
                                                format_double(*fit.c_squared)
                                          : "no positive homothety constant");
  rep.checks.push_back(make_check("curv.homothety", desc,
                                  "special homothety criterion", fit.constant,
                                  fit.constant, 0.0));

  rep.wall_time_ms = now_ms() - t0;
  rep.finalize();
  return rep;
}

Report run_hkt_suite(const PreparedModel& p, const SuiteOptions& opt) {
  const double t0 = now_ms();
  Report rep;
  rep.model = p.model.name;
  rep.suite = "hkt";
  rep.tolerance = opt.tol;
  if (!p.hkt) {
    rep.checks.push_back(make_check("hkt.precondition",
                                    "model carries a common skew-torsion connection",
                                    "hyper structures", 1.0, 0.0, 0.0));
  } else {
    rep.checks = hkt_suite(p.model.algebra, p.model.triple, p.bundle, opt.tol);
  }
  rep.wall_time_ms = now_ms() - t0;
  rep.finalize();
  return rep;
}

Report run_twistor_suite(const PreparedModel& p, const SuiteOptions& opt) {
  const double t0 = now_ms();
  Report rep;
  rep.model = p.model.name;
  rep.suite = "twistor";
  rep.tolerance = opt.tol;
  const auto grid = suite_grid(opt);
  const TwistorContext ctx =
      make_twistor_context(p.model, p.tc, p.bundle, p.hkt);

  auto add = [&rep](CheckList cs) {
    for (auto& c : cs) rep.checks.push_back(std::move(c));
  };
  add(twistor_structure_checks(ctx, opt.c, grid, opt.tol));
  add(verify_th2(ctx, p.bundle, p.model.triple, opt.c, grid, opt.tol));
  if (p.hkt) add(twistor_ricci(ctx, opt.c, opt.tol));

  // class residual record for both structures
  for (int which = 1; which <= 2; ++which) {
    const ClassReport cr = gray_hervella(ctx, which, opt.c, grid);
    const std::string pfx = "tw.class.i" + std::to_string(which) + ".";
    auto info = [&](const std::string& name, double v) {
      rep.checks.push_back(make_check(pfx + name,
                                      "class residual over the point grid",
                                      "sixteen classes of almost hermitian structures",
                                      v, v, 0.0));
    };
    info("kaehler", cr.kaehler);
    info("hermitian", cr.hermitian);
    info("g1", cr.g1);
    info("semi_kaehler", cr.semi_kaehler);
    info("quasi_kaehler", cr.quasi_kaehler);
    info("nearly_kaehler", cr.nearly_kaehler);
    info("almost_kaehler", cr.almost_kaehler);
  }

  rep.wall_time_ms = now_ms() - t0;
  rep.finalize();
  return rep;
}

std::vector<std::string> suite_names() {
  return {"structure", "curvature", "hkt", "twistor", "all"};
}

Report run_suite(const Model& m, const std::string& suite,
                 const SuiteOptions& opt) {
  const double t0 = now_ms();
  const PreparedModel p = prepare(m, opt);
  if (suite == "structure") return run_structure_suite(p, opt);
  if (suite == "curvature") return run_curvature_suite(p, opt);
  if (suite == "hkt") return run_hkt_suite(p, opt);
  if (suite == "twistor") return run_twistor_suite(p, opt);
  if (suite != "all") throw std::invalid_argument("unknown suite '" + suite + "'");

  Report all;
  all.model = m.name;
  all.suite = "all";
  all.tolerance = opt.tol;
  for (const Report& r :
       {run_structure_suite(p, opt), run_curvature_suite(p, opt),
        run_twistor_suite(p, opt)}) {
    for (const Check& c : r.checks) all.checks.push_back(c);
  }
  if (p.hkt) {
    const Report r = run_hkt_suite(p, opt);
    for (const Check& c : r.checks) all.checks.push_back(c);
  } else {
    all.checks.push_back(make_check("hkt.skipped",
                                    "hyper checks skipped: no common skew torsion",
                                    "hyper structures", 0.0, 0.0, 1.0));
  }
  all.wall_time_ms = now_ms() - t0;
  all.finalize();
  return all;
}

} // namespace qkt
