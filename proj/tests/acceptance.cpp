// Acceptance suite: runs every top-level criterion at its stated tolerance
// and prints one pass/fail line per criterion. Exit code equals the number
// of failed criteria.

#include <cmath>
#include <cstdio>
#include <random>
#include <vector>

#include "qkt/suites.hpp"

using namespace qkt;

namespace {

int failures = 0;

void line(int n, bool pass, const char* what, double worst) {
  std::printf("criterion %2d: %s  %s  (worst residual %.3e)\n", n,
              pass ? "PASS" : "FAIL", what, worst);
  if (!pass) ++failures;
}

struct Ctx {
  Model model;
  PreparedModel prep;
  TwistorContext tw;
};

Ctx make_ctx(const std::string& name) {
  Ctx c{builtin(name), {}, {}};
  c.prep = prepare(c.model, SuiteOptions{});
  c.tw = make_twistor_context(c.prep.model, c.prep.tc, c.prep.bundle, c.prep.hkt);
  return c;
}

double checklist_worst(const CheckList& cs, bool& pass) {
  double worst = 0.0;
  for (const Check& c : cs) {
    pass = pass && c.pass;
    worst = std::max(worst, c.abs_err);
  }
  return worst;
}

// independent contraction for the torsion trace lemma
double lemma_contraction(const Tensor& t3, const EndoMatrix& ja,
                         const EndoMatrix& jb) {
  const int d = t3.dim();
  double s = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) {
      for (int p = 0; p < d; ++p) {
        if (ja(p, i) == 0.0) continue;
        for (int r = 0; r < d; ++r) {
          if (jb(r, j) == 0.0) continue;
          double inner = 0.0;
          for (int m = 0; m < d; ++m) inner += t3(i, j, m) * t3(p, r, m);
          s += ja(p, i) * jb(r, j) * inner;
        }
      }
    }
  return s;
}

std::array<std::array<double, 3>, 3> random_rotation(std::mt19937_64& rng) {
  auto uniform = [&rng]() { return double(rng() >> 11) * 0x1.0p-53 * 2.0 - 1.0; };
  double q[4];
  double n2;
  do {
    for (double& x : q) x = uniform();
    n2 = q[0] * q[0] + q[1] * q[1] + q[2] * q[2] + q[3] * q[3];
  } while (n2 < 1e-4 || n2 > 1.0);
  const double n = std::sqrt(n2);
  for (double& x : q) x /= n;
  const double w = q[0], x = q[1], y = q[2], z = q[3];
  return {{{1 - 2 * (y * y + z * z), 2 * (x * y - w * z), 2 * (x * z + w * y)},
           {2 * (x * y + w * z), 1 - 2 * (x * x + z * z), 2 * (y * z - w * x)},
           {2 * (x * z - w * y), 2 * (y * z + w * x), 1 - 2 * (x * x + y * y)}}};
}

} // namespace

int main() {
  Ctx flat = make_ctx("flat8");
  Ctx hopf = make_ctx("hopf8");
  Ctx solv = make_ctx("solv8");
  const double c_par = 1.0;

  // 1. structure residuals
  {
    bool pass = true;
    double worst = 0.0;
    for (Ctx* m : {&flat, &hopf, &solv}) {
      const double j = jacobi_check(m->model.algebra);
      const double t = verify_triple(m->model.triple).max_res();
      worst = std::max({worst, j, t});
      pass = pass && j < 1e-12 && t < 1e-12;
    }
    line(1, pass, "bracket and triple axioms on the built-ins", worst);
  }

  // 2. connection solves
  {
    bool pass = true;
    double worst = 0.0;
    pass = pass && flat.prep.hkt && flat.prep.tc.torsion.max_abs() < 1e-12;
    // three independent per-structure solves on hopf8
    std::array<Tensor, 3> per;
    for (int a = 0; a < 3; ++a)
      per[std::size_t(a)] = bismut(hopf.model.algebra, hopf.model.triple[a]).torsion;
    const double agree = std::max(max_abs_diff(per[0], per[1]),
                                  max_abs_diff(per[0], per[2]));
    worst = std::max(worst, agree);
    pass = pass && hopf.prep.hkt && agree < 1e-12 &&
           norm_sq_3form(hopf.prep.tc.torsion) > 1.0;
    bool solv_rejected = false;
    try {
      hkt_detect(solv.model.algebra, solv.model.triple);
    } catch (const NotHktError&) {
      solv_rejected = true;
    }
    pass = pass && solv_rejected;
    for (Ctx* m : {&flat, &hopf, &solv}) {
      const TypeProjector proj(8, m->model.triple.j);
      const TorsionConnection tc = qkt_find(m->model.algebra, m->model.triple, proj);
      const auto omega = connection_one_forms(tc, m->model.triple, 1e-9);
      const double eq1 = eq1_residual(tc.conn, m->model.triple, omega);
      const TypeCheck ty = torsion_type_check(tc.torsion, m->model.triple);
      const double tyres =
          std::max({ty.residual[0], ty.residual[1], ty.residual[2]});
      worst = std::max({worst, eq1, tyres, tc.torsion_null_component});
      pass = pass && eq1 < 1e-10 && tyres < 1e-12 &&
             tc.torsion_null_component < 1e-12;
    }
    line(2, pass, "torsion connection solves and uniqueness", worst);
  }

  // 3. trace lemma on 200 projected 3-forms
  {
    const TypeProjector proj(8, flat.model.triple.j);
    std::mt19937_64 rng(42);
    auto uniform = [&rng]() { return double(rng() >> 11) * 0x1.0p-53 - 0.5; };
    bool pass = true;
    double worst = 0.0;
    for (int trial = 0; trial < 200; ++trial) {
      Tensor raw(3, 8);
      for (std::size_t i = 0; i < raw.size(); ++i) raw.data()[i] = uniform();
      const Tensor t3 = proj.apply(antisymmetrize3(raw));
      const double nsq = norm_sq_3form(t3);
      const double scale = 1.0 + nsq;
      for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b) {
          const double tr =
              lemma_contraction(t3, flat.model.triple[a], flat.model.triple[b]);
          const double res =
              (a == b) ? std::abs(tr - nsq / 3.0) / scale : std::abs(tr) / scale;
          worst = std::max(worst, res);
          pass = pass && res < 1e-10;
        }
    }
    line(3, pass, "torsion trace lemma on 200 projected 3-forms", worst);
  }

  // 4. two routes to dT
  {
    bool pass = true;
    double worst = 0.0;
    for (Ctx* m : {&hopf, &solv}) {
      const double res = max_abs_diff(m->prep.bundle.d_torsion,
                                      m->prep.bundle.d_torsion_ce) /
                         (1.0 + m->prep.bundle.d_torsion_ce.max_abs());
      worst = std::max(worst, res);
      pass = pass && res < 1e-10;
    }
    line(4, pass, "connection formula for dT equals the exterior derivative", worst);
  }

  // 5. curvature identities on the twisted model
  {
    bool pass = true;
    const QuaternionicTriple& q = solv.model.triple;
    const CurvatureBundle& b = solv.prep.bundle;
    CheckList all;
    for (CheckList cs :
         {verify_prop_nov(b, q, 1e-9), verify_orp1(b, q, 1e-9),
          verify_eq22(b, q, 1e-9), verify_orp2_orp4(b, q, 1e-9),
          verify_ric1(b, q, 1e-9), th11_pointwise(b, 1e-9)})
      for (const Check& c : cs) all.push_back(c);
    const double worst = checklist_worst(all, pass);
    line(5, pass, "curvature identity suite on solv8", worst);
  }

  // 6. instanton-type equivalences
  {
    bool pass = true;
    double worst = 0.0;
    for (Ctx* m : {&flat, &hopf, &solv}) {
      const CheckList cs =
          instanton_and_star_ricci(m->prep.bundle, m->model.triple, 1e-9);
      for (const Check& c : cs) {
        if (c.id == "curv.instanton.consistent") pass = pass && c.pass;
        if (c.id == "curv.instanton.star_sym" && m->prep.hkt) {
          worst = std::max(worst, c.lhs);
          pass = pass && c.lhs < 1e-9;
        }
      }
    }
    line(6, pass, "instanton criteria agree; star-Ricci symmetric on hyper models",
         worst);
  }

  // 7. hyper suite
  {
    bool pass = true;
    double worst = 0.0;
    const CheckList hs =
        hkt_suite(hopf.model.algebra, hopf.model.triple, hopf.prep.bundle, 1e-9);
    for (const Check& c : hs) {
      if (c.id == "hkt.lee_is_t") {
        pass = pass && c.abs_err < 1e-12;
        worst = std::max(worst, c.abs_err);
      } else if (c.id == "hkt.dlee_type" || c.id == "hkt.bal") {
        pass = pass && c.abs_err < 1e-9;
        worst = std::max(worst, c.abs_err);
      } else if (c.id == "hkt.rho_zero") {
        pass = pass && c.abs_err < 1e-10;
        worst = std::max(worst, c.abs_err);
      } else {
        pass = pass && c.pass;
      }
    }
    const CheckList fs =
        hkt_suite(flat.model.algebra, flat.model.triple, flat.prep.bundle, 1e-9);
    bool saw_flat = false;
    for (const Check& c : fs) {
      if (c.id == "hkt.flat.scal_g" || c.id == "hkt.flat.scal_gq") {
        saw_flat = true;
        pass = pass && c.pass;
      }
    }
    pass = pass && saw_flat &&
           validate(flat.model).cls == ModelClass::HyperKaehler;
    line(7, pass, "hyper suite on hopf8; flat model classified hyper", worst);
  }

  // 8. twistor suite
  {
    bool pass = true;
    double worst = 0.0;
    const auto grid = twistor_grid(20, 42);

    // (i) witness identity and nonvanishing on every model
    for (Ctx* m : {&flat, &hopf, &solv}) {
      const CheckList cs =
          verify_th2(m->tw, m->prep.bundle, m->model.triple, c_par, grid, 1e-12);
      for (const Check& c : cs)
        if (c.id == "th2.witness_identity" || c.id == "th2.witness_nonzero") {
          pass = pass && c.pass;
          worst = std::max(worst, c.abs_err);
        }
    }

    // (ii) flat model classes
    {
      const ClassReport r1 = gray_hervella(flat.tw, 1, c_par, grid);
      const ClassReport r2 = gray_hervella(flat.tw, 2, c_par, grid);
      pass = pass && r1.hermitian < 1e-8 && r1.semi_kaehler < 1e-8 &&
             r1.kaehler > 0.5 && r2.semi_kaehler < 1e-8 && r2.hermitian > 0.5;
    }

    // (iii) hopf8 fails semi-Kaehler and tr F reproduces t
    {
      const ClassReport r1 = gray_hervella(hopf.tw, 1, c_par, grid);
      const ClassReport r2 = gray_hervella(hopf.tw, 2, c_par, grid);
      pass = pass && r1.semi_kaehler > 0.5 && r2.semi_kaehler > 0.5;
      const double tres = std::max(r1.trf_vs_t, r2.trf_vs_t);
      worst = std::max(worst, tres);
      pass = pass && tres < 1e-9;
    }

    // (iv) fiber curvature block against the brute-force commutator oracle
    {
      const TwistorPoint pt = make_point(flat.model.triple, {0, 1, 0});
      const TwistorVector i0 = TwistorVector::vertical(1, 0, 8);
      const TwistorVector k0 = TwistorVector::vertical(0, 1, 8);
      const EndoMatrix comm = pt.i0() * pt.k0() - pt.k0() * pt.i0();
      const double oracle = -c_par * c_par * endo_inner(comm, comm);
      const double got = k_tensor(flat.tw, pt, c_par, i0, k0, i0, k0);
      const double res = std::max(std::abs(got - oracle),
                                  std::abs(got + 32.0 * c_par * c_par));
      worst = std::max(worst, res);
      pass = pass && res < 1e-12;
    }

    // (v) twistor Ricci blocks on the hyper models
    for (Ctx* m : {&flat, &hopf}) {
      for (const Check& c : twistor_ricci(m->tw, c_par, 1e-9)) {
        if (c.id == "tw.ricci.vertical" || c.id == "tw.ricci.mixed") {
          pass = pass && c.pass;
          worst = std::max(worst, c.abs_err);
        }
      }
    }
    line(8, pass, "twistor suite", worst);
  }

  // 9. gauge invariance of every suite verdict
  {
    bool pass = true;
    double worst = 0.0;
    std::mt19937_64 rng(42);
    for (Ctx* m : {&flat, &hopf, &solv}) {
      SuiteOptions base_opt;
      const Report base = run_suite(m->model, "all", base_opt);
      for (int trial = 0; trial < 10; ++trial) {
        SuiteOptions opt;
        opt.gauge = random_rotation(rng);
        const Report re = run_suite(m->model, "all", opt);
        if (re.checks.size() != base.checks.size()) {
          pass = false;
          continue;
        }
        for (std::size_t i = 0; i < base.checks.size(); ++i) {
          const Check& a = base.checks[i];
          const Check& b = re.checks[i];
          const double drift = std::abs(a.abs_err - b.abs_err);
          worst = std::max(worst, drift);
          pass = pass && a.id == b.id && a.pass == b.pass && drift < 1e-10;
        }
      }
    }
    line(9, pass, "verdicts invariant under re-gauging (10 trials per model)",
         worst);
  }

  // 10. determinism of the reports
  {
    bool pass = true;
    for (Ctx* m : {&flat, &hopf, &solv}) {
      const Report a = run_suite(m->model, "all", SuiteOptions{});
      const Report b = run_suite(m->model, "all", SuiteOptions{});
      pass = pass && a.to_json(false) == b.to_json(false);
    }
    line(10, pass, "byte-identical reports for identical flags", 0.0);
  }

  if (failures == 0) std::printf("acceptance: all criteria PASS\n");
  else std::printf("acceptance: %d criteria FAILED\n", failures);
  return failures;
}
