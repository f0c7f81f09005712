#include "qkt/curvature.hpp"

#include <cmath>

namespace qkt {

Check make_check(std::string id, std::string description, std::string ref,
                 double lhs, double rhs, double tol) {
  Check c;
  c.id = std::move(id);
  c.description = std::move(description);
  c.ref = std::move(ref);
  c.lhs = lhs;
  c.rhs = rhs;
  c.abs_err = std::abs(lhs - rhs);
  c.tol = tol;
  c.pass = c.abs_err <= tol;
  return c;
}

Tensor curvature_serial(const MetricLieAlgebra& l, const Connection& conn) {
  const int d = l.dim;
  const Tensor& g = conn.gamma;
  Tensor r(4, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int t = 0; t < d; ++t) {
          double s = 0.0;
          for (int m = 0; m < d; ++m)
            s += g(j, k, m) * g(i, m, t) - g(i, k, m) * g(j, m, t) -
                 l.c(i, j, m) * g(m, k, t);
          r(i, j, k, t) = s;
        }
  return r;
}

Tensor curvature(const MetricLieAlgebra& l, const Connection& conn) {
  const int d = l.dim;
  const Tensor& g = conn.gamma;
  Tensor r(4, d);
#pragma omp parallel for collapse(2) schedule(static)
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int t = 0; t < d; ++t) {
          double s = 0.0;
          for (int m = 0; m < d; ++m)
            s += g(j, k, m) * g(i, m, t) - g(i, k, m) * g(j, m, t) -
                 l.c(i, j, m) * g(m, k, t);
          r(i, j, k, t) = s;
        }
  return r;
}

Tensor ricci_form(const Tensor& r, const EndoMatrix& j) {
  const int d = r.dim();
  Tensor rho(2, d);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) {
      double s = 0.0;
      for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) s += r(x, y, i, k) * j(k, i);
      rho(x, y) = 0.5 * s;
    }
  return rho;
}

Tensor ricci_tensor(const Tensor& r) {
  const int d = r.dim();
  Tensor ric(2, d);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) {
      double s = 0.0;
      for (int i = 0; i < d; ++i) s += r(i, x, y, i);
      ric(x, y) = s;
    }
  return ric;
}

namespace {

// q(x,y,z,u) = g(T(x,y), T(z,u))
Tensor torsion_square(const Tensor& t3) {
  const int d = t3.dim();
  Tensor q(4, d);
#pragma omp parallel for collapse(2) schedule(static)
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z)
        for (int u = 0; u < d; ++u) {
          double s = 0.0;
          for (int m = 0; m < d; ++m) s += t3(x, y, m) * t3(z, u, m);
          q(x, y, z, u) = s;
        }
  return q;
}

Tensor torsion_square_serial(const Tensor& t3) {
  const int d = t3.dim();
  Tensor q(4, d);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z)
        for (int u = 0; u < d; ++u) {
          double s = 0.0;
          for (int m = 0; m < d; ++m) s += t3(x, y, m) * t3(z, u, m);
          q(x, y, z, u) = s;
        }
  return q;
}

Tensor assemble_dt(const Tensor& nt, const Tensor& q, bool parallel) {
  const int d = nt.dim();
  Tensor out(4, d);
  auto entry = [&](int x, int y, int z, int u) {
    const double cyc_nt = nt(x, y, z, u) + nt(y, z, x, u) + nt(z, x, y, u);
    const double cyc_q = q(x, y, z, u) + q(y, z, x, u) + q(z, x, y, u);
    return cyc_nt - nt(u, x, y, z) + 2.0 * cyc_q;
  };
  if (parallel) {
#pragma omp parallel for collapse(2) schedule(static)
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y)
        for (int z = 0; z < d; ++z)
          for (int u = 0; u < d; ++u) out(x, y, z, u) = entry(x, y, z, u);
  } else {
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y)
        for (int z = 0; z < d; ++z)
          for (int u = 0; u < d; ++u) out(x, y, z, u) = entry(x, y, z, u);
  }
  return out;
}

// A(X, JY)
Tensor contract_2nd(const Tensor& a, const EndoMatrix& j) {
  const int d = a.dim();
  Tensor out(2, d);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) {
      double s = 0.0;
      for (int p = 0; p < d; ++p) s += a(x, p) * j(p, y);
      out(x, y) = s;
    }
  return out;
}

// A(JX, Y)
Tensor contract_1st(const Tensor& a, const EndoMatrix& j) {
  const int d = a.dim();
  Tensor out(2, d);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) {
      double s = 0.0;
      for (int p = 0; p < d; ++p) s += j(p, x) * a(p, y);
      out(x, y) = s;
    }
  return out;
}

// A(JaX, JbY)
Tensor contract_both(const Tensor& a, const EndoMatrix& ja, const EndoMatrix& jb) {
  return contract_1st(contract_2nd(a, jb), ja);
}

// (x,y) -> sum_i dT(x, Jy, e_i, J e_i)
Tensor dt_trace(const Tensor& d4, const EndoMatrix& j) {
  const int d = d4.dim();
  Tensor out(2, d);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) {
      double s = 0.0;
      for (int p = 0; p < d; ++p) {
        if (j(p, y) == 0.0) continue;
        double inner = 0.0;
        for (int i = 0; i < d; ++i)
          for (int k = 0; k < d; ++k) inner += d4(x, p, i, k) * j(k, i);
        s += j(p, y) * inner;
      }
      out(x, y) = s;
    }
  return out;
}

// sum_{i,j} dT(e_j, Ja e_j, e_i, Jb e_i)
double dt_double_trace(const Tensor& d4, const EndoMatrix& ja,
                       const EndoMatrix& jb) {
  const int d = d4.dim();
  double s = 0.0;
  for (int j = 0; j < d; ++j)
    for (int p = 0; p < d; ++p) {
      if (ja(p, j) == 0.0) continue;
      for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) s += ja(p, j) * d4(j, p, i, k) * jb(k, i);
    }
  return s;
}

double lem1_trace(const Tensor& t3, const EndoMatrix& ja, const EndoMatrix& jb) {
  // sum_{i,j} g(T(e_i,e_j), T(Ja e_i, Jb e_j))
  const int d = t3.dim();
  double s = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int p = 0; p < d; ++p) {
        if (ja(p, i) == 0.0) continue;
        for (int q = 0; q < d; ++q) {
          if (jb(q, j) == 0.0) continue;
          double inner = 0.0;
          for (int m = 0; m < d; ++m) inner += t3(i, j, m) * t3(p, q, m);
          s += ja(p, i) * jb(q, j) * inner;
        }
      }
  return s;
}

Tensor vec_to_tensor(const Vec& v) {
  Tensor t(1, int(v.size()));
  for (int i = 0; i < int(v.size()); ++i) t.data()[i] = v[i];
  return t;
}

double trace2(const Tensor& a) {
  double s = 0.0;
  for (int i = 0; i < a.dim(); ++i) s += a(i, i);
  return s;
}

double j_trace(const Tensor& a, const EndoMatrix& j) {
  // -sum_i a(e_i, J e_i)
  const int d = a.dim();
  double s = 0.0;
  for (int i = 0; i < d; ++i)
    for (int k = 0; k < d; ++k) s += a(i, k) * j(k, i);
  return -s;
}

} // namespace

Tensor dt_via_curvature_formula(const Connection& conn, const Tensor& t3) {
  return assemble_dt(covariant_derivative(conn, t3), torsion_square(t3), true);
}

Tensor dt_via_curvature_formula_serial(const Connection& conn, const Tensor& t3) {
  return assemble_dt(covariant_derivative_serial(conn, t3),
                     torsion_square_serial(t3), false);
}

CurvatureBundle curvature_bundle(const MetricLieAlgebra& l,
                                 const QuaternionicTriple& q,
                                 const TorsionConnection& tc) {
  CurvatureBundle b;
  b.dim = l.dim;
  b.n = l.dim / 4;
  const Connection lc = levi_civita(l);
  b.r = curvature(l, tc.conn);
  b.rg = curvature(l, lc);
  for (int a = 0; a < 3; ++a) {
    b.rho[std::size_t(a)] = ricci_form(b.r, q[a]);
    b.rho_g[std::size_t(a)] = ricci_form(b.rg, q[a]);
  }
  b.ric = ricci_tensor(b.r);
  b.ric_g = ricci_tensor(b.rg);
  b.scal = trace2(b.ric);
  b.scal_g = trace2(b.ric_g);
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 3; ++c) {
      b.scal_table[a][c] = j_trace(b.rho[std::size_t(a)], q[c]);
      b.scal_table_g[a][c] = j_trace(b.rho_g[std::size_t(a)], q[c]);
    }
  b.scal_q = b.scal_table[0][0];
  b.scal_gq = b.scal_table_g[0][0];
  for (int a = 0; a < 3; ++a) b.scal_alpha[std::size_t(a)] = j_trace(b.ric, q[a]);
  b.torsion = tc.torsion;
  b.norm_torsion_sq = norm_sq_3form(b.torsion);
  b.t = torsion_one_form(b.torsion, q, 1e-6);
  b.dt = ce_derivative(l, vec_to_tensor(b.t));
  b.delta_t = codifferential_scalar(lc, b.t);
  b.norm_t_sq = b.t.squaredNorm();
  b.nabla_t3 = covariant_derivative(tc.conn, b.torsion);
  b.nabla_t1 = covariant_derivative(tc.conn, vec_to_tensor(b.t));
  b.d_torsion = assemble_dt(b.nabla_t3, torsion_square(b.torsion), true);
  b.d_torsion_ce = ce_derivative(l, b.torsion);
  b.delta_torsion = codifferential(lc, b.torsion);
  return b;
}

double type11_residual(const Tensor& two_form, const EndoMatrix& j) {
  return max_abs_diff(two_form, contract_both(two_form, j, j));
}

CheckList curvature_symmetry_checks(const CurvatureBundle& b, double tol) {
  const int d = b.dim;
  double r12 = 0.0, r34 = 0.0, rg34 = 0.0, pair = 0.0, bianchi = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int t = 0; t < d; ++t) {
          r12 = std::max(r12, std::abs(b.r(i, j, k, t) + b.r(j, i, k, t)));
          r34 = std::max(r34, std::abs(b.r(i, j, k, t) + b.r(i, j, t, k)));
          rg34 = std::max(rg34, std::abs(b.rg(i, j, k, t) + b.rg(i, j, t, k)));
          pair = std::max(pair, std::abs(b.rg(i, j, k, t) - b.rg(k, t, i, j)));
          bianchi = std::max(bianchi,
                             std::abs(b.rg(i, j, k, t) + b.rg(j, k, i, t) +
                                      b.rg(k, i, j, t)));
        }
  CheckList out;
  out.push_back(make_check("curv.antisym12", "R antisymmetric in the first pair",
                           "curvature of a connection", r12, 0.0, tol));
  out.push_back(make_check("curv.antisym34",
                           "R antisymmetric in the last pair (metric connection)",
                           "metric connection curvature", r34, 0.0, tol));
  out.push_back(make_check("curv.g.antisym34",
                           "R^g antisymmetric in the last pair",
                           "Levi-Civita curvature", rg34, 0.0, tol));
  out.push_back(make_check("curv.g.pair", "R^g pair symmetry",
                           "Levi-Civita curvature", pair, 0.0, tol));
  out.push_back(make_check("curv.g.bianchi1", "R^g first Bianchi identity",
                           "Levi-Civita curvature", bianchi, 0.0, tol));
  return out;
}

CheckList ricci_commutator_checks(const CurvatureBundle& b,
                                  const QuaternionicTriple& q, double tol) {
  const int d = b.dim;
  static const int cyc[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  double worst = 0.0;
  for (const auto& c : cyc) {
    const int al = c[0], be = c[1], ga = c[2];
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y) {
        EndoMatrix m(d, d);
        for (int k = 0; k < d; ++k)
          for (int t = 0; t < d; ++t) m(t, k) = b.r(x, y, k, t);
        const EndoMatrix lhs = double(b.n) * (m * q[al] - q[al] * m);
        const EndoMatrix rhs = b.rho[std::size_t(ga)](x, y) * q[be] -
                               b.rho[std::size_t(be)](x, y) * q[ga];
        worst = std::max(worst, (lhs - rhs).cwiseAbs().maxCoeff());
      }
  }
  CheckList out;
  out.push_back(make_check("curv.ricci_commutator",
                           "n [R(X,Y), J_a] = rho_c J_b - rho_b J_c",
                           "Ricci form commutator identity", worst, 0.0, tol));
  out.push_back(make_check("curv.split",
                           "[R'(X,Y), J_a] = 0 for the sp(n) part",
                           "curvature splitting", curvature_split_residual(b, q),
                           0.0, tol));
  return out;
}

double curvature_split_residual(const CurvatureBundle& b,
                                const QuaternionicTriple& q) {
  const int d = b.dim;
  double worst = 0.0;
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) {
      EndoMatrix m(d, d);
      for (int k = 0; k < d; ++k)
        for (int t = 0; t < d; ++t) m(t, k) = b.r(x, y, k, t);
      EndoMatrix sp1 = EndoMatrix::Zero(d, d);
      for (int a = 0; a < 3; ++a)
        sp1 += b.rho[std::size_t(a)](x, y) * q[a];
      const EndoMatrix rp = m - sp1 / (2.0 * b.n);
      for (int a = 0; a < 3; ++a)
        worst = std::max(worst, (rp * q[a] - q[a] * rp).cwiseAbs().maxCoeff());
    }
  return worst;
}

CheckList verify_prop_nov(const CurvatureBundle& b, const QuaternionicTriple& q,
                          double tol) {
  const int d = b.dim;
  CheckList out;
  double nov1 = 0.0;
  for (int a = 0; a < 3; ++a) {
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y) {
        double lhs = 0.0;
        for (int p = 0; p < d; ++p) {
          if (q[a](p, y) == 0.0) continue;
          double inner = 0.0;
          for (int i = 0; i < d; ++i)
            for (int k = 0; k < d; ++k)
              inner += b.nabla_t3(x, p, i, k) * q[a](k, i);
          lhs += q[a](p, y) * inner;
        }
        nov1 = std::max(nov1, std::abs(lhs - 2.0 * b.nabla_t1(x, y)));
      }
  }
  out.push_back(make_check("curv.nov1",
                           "trace of nabla T reproduces 2 nabla t",
                           "torsion 1-form derivative identity", nov1, 0.0, tol));

  const double rhs_diag =
      -8.0 * b.delta_t + 8.0 * b.norm_t_sq - (4.0 / 3.0) * b.norm_torsion_sq;
  double diag = 0.0, off = 0.0;
  for (int a = 0; a < 3; ++a)
    diag = std::max(diag, std::abs(dt_double_trace(b.d_torsion, q[a], q[a]) -
                                   rhs_diag));
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 3; ++c)
      if (a != c)
        off = std::max(off, std::abs(dt_double_trace(b.d_torsion, q[a], q[c])));
  const double scale = 1.0 + std::abs(rhs_diag);
  out.push_back(make_check("curv.new1.diag",
                           "double trace of dT = -8 dt* + 8|t|^2 - 4/3 |T|^2",
                           "dT trace identity (diagonal)", diag / scale, 0.0, tol));
  out.push_back(make_check("curv.new1.offdiag",
                           "mixed double traces of dT vanish",
                           "dT trace identity (off-diagonal)", off / scale, 0.0,
                           tol));
  return out;
}

CheckList verify_orp1(const CurvatureBundle& b, const QuaternionicTriple& q,
                      double tol) {
  CheckList out;
  if (b.n <= 1) {
    out.push_back(make_check("curv.orp1.dim", "needs dim >= 8", "scalar trace equalities",
                             1.0, 0.0, 0.0));
    return out;
  }
  double diag = 0.0, off = 0.0;
  for (int a = 0; a < 3; ++a) {
    diag = std::max(diag, std::abs(b.scal_table[a][a] - b.scal_q));
    for (int c = 0; c < 3; ++c)
      if (a != c) off = std::max(off, std::abs(b.scal_table[a][c]));
  }
  const double scale = 1.0 + std::abs(b.scal_q);
  out.push_back(make_check("curv.orp1.diag",
                           "the three diagonal Ricci-form traces coincide",
                           "quaternionic scalar curvature", diag / scale, 0.0, tol));
  out.push_back(make_check("curv.orp1.offdiag", "mixed Ricci-form traces vanish",
                           "scalar trace equalities", off / scale, 0.0, tol));
  double lee = 0.0;
  for (int a = 0; a < 3; ++a) {
    const double rhs = 0.5 * two_form_inner(b.dt, kaehler_form(q[a]));
    lee = std::max(lee, std::abs(b.scal_alpha[std::size_t(a)] - rhs));
  }
  out.push_back(make_check("curv.orp1.scal_alpha",
                           "Scal_a equals half the pairing of dt with the Kaehler form",
                           "Scal_a = 1/2 (dt, Phi_a)", lee, 0.0, tol));
  return out;
}

CheckList verify_eq22(const CurvatureBundle& b, const QuaternionicTriple& q,
                      double tol) {
  const int d = b.dim;
  const double n = b.n;
  CheckList out;
  if (b.n <= 1) return out;
  static const int cyc[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  double worst = 0.0, scale = 1.0;
  for (const auto& c : cyc) {
    const int al = c[0], be = c[1], ga = c[2];
    const Tensor lhs = contract_2nd(b.rho[std::size_t(al)], q[al]);
    const Tensor ta = dt_trace(b.d_torsion, q[al]);
    const Tensor tb = dt_trace(b.d_torsion, q[be]);
    const Tensor tg = dt_trace(b.d_torsion, q[ga]);
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y) {
        const double rhs = -n * (n - 1) / (n + 2) * b.ric(x, y) +
                           n * (n - 1) / (n + 2) * b.nabla_t1(x, y) +
                           n / (4 * (n + 2)) *
                               ((n + 1) * ta(x, y) - tb(x, y) - tg(x, y));
        worst = std::max(worst, std::abs((n - 1) * lhs(x, y) - rhs));
        scale = std::max(scale, 1.0 + std::abs(rhs));
      }
  }
  out.push_back(make_check("curv.eq22",
                           "Ricci form expressed through Ric, nabla t and dT traces",
                           "Ricci form trace formula", worst / scale, 0.0, tol));
  return out;
}

CheckList verify_orp2_orp4(const CurvatureBundle& b, const QuaternionicTriple& q,
                           double tol) {
  const int d = b.dim;
  const double n = b.n;
  CheckList out;
  if (b.n <= 1) return out;

  // curvature comparison, entrywise
  Tensor qsq = torsion_square(b.torsion);
  double e15 = 0.0, scale15 = 1.0;
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y)
      for (int z = 0; z < d; ++z)
        for (int u = 0; u < d; ++u) {
          const double rhs = b.r(x, y, z, u) - 0.5 * b.nabla_t3(x, y, z, u) +
                             0.5 * b.nabla_t3(y, x, z, u) -
                             0.5 * qsq(x, y, z, u) - 0.25 * qsq(y, z, x, u) -
                             0.25 * qsq(z, x, y, u);
          e15 = std::max(e15, std::abs(b.rg(x, y, z, u) - rhs));
          scale15 = std::max(scale15, 1.0 + std::abs(rhs));
        }
  out.push_back(make_check("curv.eq15",
                           "Levi-Civita curvature from the torsion connection",
                           "curvature comparison formula", e15 / scale15, 0.0, tol));

  // Ricci-form comparison, entrywise
  double ern2 = 0.0, scale_rn2 = 1.0;
  for (int a = 0; a < 3; ++a) {
    const EndoMatrix& j = q[a];
    const Tensor lhs = contract_2nd(b.rho_g[std::size_t(a)], j);
    const Tensor rho_j = contract_2nd(b.rho[std::size_t(a)], j);
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y) {
        double term2 = 0.0;  // (nabla_{J y} t)(J x)
        for (int p = 0; p < d; ++p) {
          if (j(p, y) == 0.0) continue;
          for (int qq = 0; qq < d; ++qq)
            term2 += j(p, y) * j(qq, x) * b.nabla_t1(p, qq);
        }
        double term3 = 0.0;  // t(J T(X, J Y))
        for (int qq = 0; qq < d; ++qq) {
          if (j(qq, y) == 0.0) continue;
          for (int m = 0; m < d; ++m) {
            const double tv = b.torsion(x, qq, m);
            if (tv == 0.0) continue;
            for (int p = 0; p < d; ++p) term3 += j(qq, y) * tv * j(p, m) * b.t[p];
          }
        }
        double term4 = 0.0;  // sum_i g(T(X,e_i), T(JY, J e_i))
        for (int i = 0; i < d; ++i)
          for (int m = 0; m < d; ++m) {
            const double tv = b.torsion(x, i, m);
            if (tv == 0.0) continue;
            for (int p = 0; p < d; ++p) {
              if (j(p, y) == 0.0) continue;
              for (int rr = 0; rr < d; ++rr)
                term4 += tv * j(p, y) * j(rr, i) * b.torsion(p, rr, m);
            }
          }
        const double rhs = rho_j(x, y) - 0.5 * b.nabla_t1(x, y) - 0.5 * term2 +
                           0.5 * term3 + 0.25 * term4;
        ern2 = std::max(ern2, std::abs(lhs(x, y) - rhs));
        scale_rn2 = std::max(scale_rn2, 1.0 + std::abs(rhs));
      }
  }
  out.push_back(make_check("curv.rn2",
                           "Riemannian Ricci forms from the torsion connection",
                           "Ricci form comparison formula", ern2 / scale_rn2, 0.0,
                           tol));

  double gdiag = 0.0;
  for (int a = 0; a < 3; ++a)
    gdiag = std::max(gdiag, std::abs(b.scal_table_g[a][a] - b.scal_gq));
  out.push_back(make_check("curv.orp2.star_equal",
                           "the three Riemannian Ricci-form traces coincide",
                           "quaternionic *-scalar curvature",
                           gdiag / (1.0 + std::abs(b.scal_gq)), 0.0, tol));

  const double common = b.scal_q - b.delta_t + b.norm_t_sq -
                        b.norm_torsion_sq / 12.0;
  out.push_back(make_check("curv.orp2.value",
                           "Scal^g_Q = Scal_Q - dt* + |t|^2 - |T|^2/12",
                           "*-scalar curvature relation",
                           b.scal_gq / (1.0 + std::abs(common)),
                           common / (1.0 + std::abs(common)), tol));

  static const int cyc[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  double mixed = 0.0;
  for (const auto& c : cyc) {
    const int al = c[0], be = c[1], ga = c[2];
    const double lee = 0.5 * two_form_inner(b.dt, kaehler_form(q[ga]));
    mixed = std::max(mixed, std::abs(b.scal_table_g[al][be] -
                                     b.scal_alpha[std::size_t(ga)]));
    mixed = std::max(mixed, std::abs(b.scal_table_g[al][be] - lee));
  }
  out.push_back(make_check("curv.orp2.mixed",
                           "mixed Riemannian traces reproduce Scal_c",
                           "mixed *-trace identity", mixed, 0.0, tol));

  const double s1 = (n + 2) / n * b.scal_q - 3.0 * b.delta_t +
                    2.0 * b.norm_t_sq - b.norm_torsion_sq / 12.0;
  const double s3 = (n + 2) / n * b.scal_q - 3.0 * b.delta_t +
                    2.0 * b.norm_t_sq - b.norm_torsion_sq / 3.0;
  out.push_back(make_check("curv.orp4.scal_g",
                           "Scal^g from Scal_Q, dt*, |t|^2, |T|^2",
                           "scalar curvature relation",
                           b.scal_g / (1.0 + std::abs(s1)), s1 / (1.0 + std::abs(s1)),
                           tol));
  out.push_back(make_check("curv.orp4.scal",
                           "Scal from Scal_Q, dt*, |t|^2, |T|^2",
                           "scalar curvature relation",
                           b.scal / (1.0 + std::abs(s3)), s3 / (1.0 + std::abs(s3)),
                           tol));
  const double r5 = b.scal + 0.25 * b.norm_torsion_sq;
  out.push_back(make_check("curv.r5.scal",
                           "Scal^g = Scal + 1/4 |T|^2",
                           "scalar curvature comparison",
                           b.scal_g / (1.0 + std::abs(r5)), r5 / (1.0 + std::abs(r5)),
                           tol));

  // Ricci comparison Ric^g = Ric + 1/2 deltaT + 1/4 sum g(T(X,e_i),T(Y,e_i))
  double er5 = 0.0, scale_r5 = 1.0;
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) {
      double s2 = 0.0;
      for (int i = 0; i < d; ++i)
        for (int m = 0; m < d; ++m) s2 += b.torsion(x, i, m) * b.torsion(y, i, m);
      const double rhs = b.ric(x, y) + 0.5 * b.delta_torsion(x, y) + 0.25 * s2;
      er5 = std::max(er5, std::abs(b.ric_g(x, y) - rhs));
      scale_r5 = std::max(scale_r5, 1.0 + std::abs(rhs));
    }
  out.push_back(make_check("curv.r5.ric",
                           "Ric^g = Ric + 1/2 deltaT + 1/4 torsion square trace",
                           "Ricci comparison formula", er5 / scale_r5, 0.0, tol));
  return out;
}

CheckList th11_pointwise(const CurvatureBundle& b, double tol) {
  CheckList out;
  if (b.n <= 1) return out;
  const double n = b.n;
  const double p1 = b.scal_g - b.scal_gq - 2.0 / n * b.scal_q;
  const double p2 = b.scal_g - 2.0 * b.scal_gq - (2.0 - n) / n * b.scal_q;
  const double q1 = -2.0 * b.delta_t + b.norm_t_sq;
  const double q2 = -b.delta_t + b.norm_torsion_sq / 12.0;
  const double s1 = 1.0 + std::abs(q1), s2 = 1.0 + std::abs(q2);
  const bool balanced = b.norm_t_sq < 1e-18;
  const bool qk = b.norm_torsion_sq < 1e-18;
  out.push_back(make_check(
      "curv.th11.first",
      std::string("Scal^g - Scal^g_Q - (2/n) Scal_Q = -2 dt* + |t|^2") +
          (balanced ? " [balanced]" : ""),
      "scalar curvature defect (balanced case)", p1 / s1, q1 / s1, tol));
  out.push_back(make_check(
      "curv.th11.second",
      std::string("Scal^g - 2 Scal^g_Q - ((2-n)/n) Scal_Q = -dt* + |T|^2/12") +
          (qk ? " [torsion-free]" : ""),
      "scalar curvature defect (torsion-free case)", p2 / s2, q2 / s2, tol));
  // The first identity is sometimes quoted with coefficient 2 on |t|^2;
  // that variant exceeds the computed defect by exactly |t|^2.
  out.push_back(make_check("curv.th11.coeff_offset",
                           "the 2|t|^2 variant exceeds the defect by |t|^2",
                           "scalar curvature defect (coefficient check)",
                           ((-2.0 * b.delta_t + 2.0 * b.norm_t_sq) - p1) / s1,
                           b.norm_t_sq / s1, tol));
  return out;
}

CheckList verify_ric1(const CurvatureBundle& b, const QuaternionicTriple& q,
                      double tol) {
  const int d = b.dim;
  CheckList out;
  static const int cyc[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  double worst = 0.0, scale = 1.0;
  for (const auto& c : cyc) {
    const int al = c[0], be = c[1], ga = c[2];
    const Tensor lhs1 = contract_both(b.rho[std::size_t(al)], q[be], q[be]);
    const Tensor rhs1 = contract_1st(b.rho[std::size_t(ga)], q[be]);
    const Tensor rhs2 = contract_2nd(b.rho[std::size_t(ga)], q[be]);
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y) {
        const double v = lhs1(x, y) - b.rho[std::size_t(al)](x, y) -
                         rhs1(x, y) - rhs2(x, y);
        worst = std::max(worst, std::abs(v));
        scale = std::max(scale, 1.0 + std::abs(b.rho[std::size_t(al)](x, y)));
      }
  }
  out.push_back(make_check("curv.ric1",
                           "the (2,0)+(0,2) parts of rho_a and rho_b agree",
                           "Ricci form type identity", worst / scale, 0.0, tol));
  return out;
}

CheckList instanton_and_star_ricci(const CurvatureBundle& b,
                                   const QuaternionicTriple& q, double tol) {
  const int d = b.dim;
  const double n = b.n;
  CheckList out;
  double star_sym = 0.0, rho11 = 0.0, dt11 = 0.0;
  double sup_res = 0.0, ps1_res = 0.0, psg_res = 0.0;
  double scale = 1.0;
  for (int a = 0; a < 3; ++a) {
    const EndoMatrix& j = q[a];
    const Tensor star = contract_2nd(b.rho_g[std::size_t(a)], j);
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y)
        star_sym = std::max(star_sym, std::abs(star(x, y) - star(y, x)));
    rho11 = std::max(rho11, type11_residual(b.rho[std::size_t(a)], j));
    dt11 = std::max(dt11, type11_residual(b.dt, j));

    const Tensor pg1 = contract_2nd(b.rho_g[std::size_t(a)], j);
    const Tensor pg2 = contract_1st(b.rho_g[std::size_t(a)], j);
    const Tensor p1 = contract_2nd(b.rho[std::size_t(a)], j);
    const Tensor p2 = contract_1st(b.rho[std::size_t(a)], j);
    const Tensor dtj = contract_both(b.dt, j, j);
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y) {
        const double ddt = b.dt(x, y) - dtj(x, y);
        sup_res = std::max(sup_res,
                           std::abs((pg1(x, y) + pg2(x, y)) -
                                    (p1(x, y) + p2(x, y)) + 0.5 * ddt));
        ps1_res = std::max(ps1_res,
                           std::abs((p1(x, y) + p2(x, y)) + n / 2.0 * ddt));
        psg_res = std::max(psg_res, std::abs((pg1(x, y) + pg2(x, y)) +
                                             (n + 1) / 2.0 * ddt));
        scale = std::max(scale, 1.0 + std::abs(p1(x, y)) + std::abs(pg1(x, y)));
      }
  }
  out.push_back(make_check("curv.sup",
                           "(2,0)+(0,2) parts of rho^g, rho and dt are linked",
                           "star-Ricci skew part identity", sup_res / scale, 0.0,
                           tol));
  out.push_back(make_check("curv.sup.rho_dt",
                           "skew part of rho equals -(n/2) of the dt defect",
                           "Ricci skew part from dt", ps1_res / scale, 0.0, tol));
  out.push_back(make_check("curv.sup.rho_g_dt",
                           "skew part of rho^g equals -((n+1)/2) of the dt defect",
                           "Riemannian Ricci skew part from dt", psg_res / scale,
                           0.0, tol));

  const double flag_scale =
      1.0 + std::max({star_sym, rho11, dt11});
  const bool f1 = rho11 < tol * flag_scale;
  const bool f2 = star_sym < tol * flag_scale;
  const bool f3 = dt11 < tol * flag_scale;
  out.push_back(make_check("curv.instanton.consistent",
                           std::string("instanton criteria agree (type flag ") +
                               (f1 ? "true" : "false") + ")",
                           "instanton type equivalences",
                           (f1 == f2 && f2 == f3) ? 0.0 : 1.0, 0.0, 0.5));
  out.push_back(make_check("curv.instanton.rho_type",
                           "rho_a (1,1)-type residual (instanton criterion)",
                           "Ricci form type", rho11 / flag_scale,
                           f1 ? 0.0 : rho11 / flag_scale, tol));
  out.push_back(make_check("curv.instanton.star_sym",
                           "*-Ricci symmetry residual (instanton criterion)",
                           "star-Ricci symmetry", star_sym / flag_scale,
                           f2 ? 0.0 : star_sym / flag_scale, tol));
  out.push_back(make_check("curv.instanton.dt_type",
                           "dt (1,1)-type residual (instanton criterion)",
                           "torsion 1-form differential type", dt11 / flag_scale,
                           f3 ? 0.0 : dt11 / flag_scale, tol));
  return out;
}

bool instanton_flag(const CurvatureBundle& b, const QuaternionicTriple& q,
                    double tol) {
  double rho11 = 0.0;
  for (int a = 0; a < 3; ++a)
    rho11 = std::max(rho11, type11_residual(b.rho[std::size_t(a)], q[a]));
  return rho11 < tol * (1.0 + rho11);
}

CheckList dt_agreement_checks(const CurvatureBundle& b, double tol) {
  CheckList out;
  const double scale = 1.0 + b.d_torsion_ce.max_abs();
  out.push_back(make_check("curv.dt_two_routes",
                           "dT from the connection formula equals the exterior derivative",
                           "dT cross-check", max_abs_diff(b.d_torsion, b.d_torsion_ce) / scale,
                           0.0, tol));
  return out;
}

CheckList lemma_trace_checks(const CurvatureBundle& b,
                             const QuaternionicTriple& q, double tol) {
  CheckList out;
  const double nsq = b.norm_torsion_sq;
  const double scale = 1.0 + nsq;
  double off = 0.0, diag = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int c = 0; c < 3; ++c) {
      const double tr = lem1_trace(b.torsion, q[a], q[c]);
      if (a == c)
        diag = std::max(diag, std::abs(tr - nsq / 3.0));
      else
        off = std::max(off, std::abs(tr));
    }
  out.push_back(make_check("curv.lem1.diag",
                           "equal-structure torsion trace equals |T|^2/3",
                           "skew torsion trace lemma", diag / scale, 0.0, tol));
  out.push_back(make_check("curv.lem1.offdiag",
                           "mixed-structure torsion traces vanish",
                           "skew torsion trace lemma", off / scale, 0.0, tol));
  return out;
}

HomothetyFit special_homothety_check(const CurvatureBundle& b,
                                     const QuaternionicTriple& q,
                                     bool instanton_type, double rel_tol) {
  const int d = b.dim;
  static const int cyc[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  HomothetyFit fit;
  double rho_max = 0.0;
  for (int a = 0; a < 3; ++a)
    rho_max = std::max(rho_max, b.rho[std::size_t(a)].max_abs());
  fit.degenerate = rho_max < 1e-10;

  std::array<Tensor, 3> lhs;
  double tr = 0.0;
  for (int row = 0; row < 3; ++row) {
    const int al = cyc[row][0], be = cyc[row][1], ga = cyc[row][2];
    Tensor m = contract_1st(b.rho[std::size_t(al)], q[al]);
    m += contract_both(b.rho[std::size_t(al)], q[ga], q[be]);
    for (int i = 0; i < d; ++i) tr += m(i, i);
    lhs[std::size_t(row)] = m;
  }
  fit.constant = tr / double(3 * d);
  double res = 0.0, scale = 1.0;
  for (const auto& m : lhs)
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y) {
        res = std::max(res, std::abs(m(x, y) - (x == y ? fit.constant : 0.0)));
        scale = std::max(scale, 1.0 + std::abs(m(x, y)));
      }
  fit.residual = res;
  if (!fit.degenerate && fit.constant > 0.0 && res / scale < rel_tol &&
      instanton_type)
    fit.c_squared = 1.0 / fit.constant;
  return fit;
}

Vec lee_form(const MetricLieAlgebra& l, const Connection& lc,
             const EndoMatrix& j) {
  const int d = l.dim;
  const Tensor phi = kaehler_form(j);
  const Tensor dphi = codifferential(lc, phi);  // 1-form
  Vec theta = Vec::Zero(d);
  for (int x = 0; x < d; ++x) {
    double s = 0.0;
    for (int p = 0; p < d; ++p) s += j(p, x) * dphi.data()[p];
    theta[x] = -s;
  }
  return theta;
}

CheckList hkt_suite(const MetricLieAlgebra& l, const QuaternionicTriple& q,
                    const CurvatureBundle& b, double tol) {
  const int d = b.dim;
  CheckList out;
  const Connection lc = levi_civita(l);

  double theta_spread = 0.0, theta_vs_t = 0.0;
  for (int a = 0; a < 3; ++a) {
    const Vec theta = lee_form(l, lc, q[a]);
    theta_vs_t = std::max(theta_vs_t, (theta - b.t).cwiseAbs().maxCoeff());
  }
  {
    const Vec th0 = lee_form(l, lc, q[0]);
    for (int a = 1; a < 3; ++a)
      theta_spread = std::max(
          theta_spread, (lee_form(l, lc, q[a]) - th0).cwiseAbs().maxCoeff());
  }
  out.push_back(make_check("hkt.lee_equal", "the three Lee forms coincide",
                           "Lee form of the structure", theta_spread, 0.0, tol));
  out.push_back(make_check("hkt.lee_is_t", "the Lee form equals the torsion 1-form",
                           "Lee form identity", theta_vs_t, 0.0, tol));

  double dtheta11 = 0.0;
  for (int a = 0; a < 3; ++a)
    dtheta11 = std::max(dtheta11, type11_residual(b.dt, q[a]));
  out.push_back(make_check("hkt.dlee_type",
                           "d(theta) is (1,1) with respect to each structure",
                           "Lee form differential type", dtheta11, 0.0, tol));

  double rho_max = 0.0;
  for (int a = 0; a < 3; ++a)
    rho_max = std::max(rho_max, b.rho[std::size_t(a)].max_abs());
  out.push_back(make_check("hkt.rho_zero", "all Ricci forms of the connection vanish",
                           "Ricci flatness of the torsion connection", rho_max,
                           0.0, tol));
  out.push_back(make_check("hkt.scal_q_zero", "quaternionic scalar curvature vanishes",
                           "Scal_Q on hyper structures",
                           std::abs(b.scal_q) / (1.0 + std::abs(b.scal_q)), 0.0,
                           tol));

  double bal = 0.0, bal_scale = 1.0;
  for (int a = 0; a < 3; ++a) {
    const Tensor ta = dt_trace(b.d_torsion, q[a]);
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y) {
        const double rhs = b.nabla_t1(x, y) + 0.25 * ta(x, y);
        bal = std::max(bal, std::abs(b.ric(x, y) - rhs));
        bal_scale = std::max(bal_scale, 1.0 + std::abs(rhs));
      }
  }
  out.push_back(make_check("hkt.bal",
                           "Ric = nabla theta + 1/4 dT trace",
                           "Ricci tensor via the Lee form", bal / bal_scale, 0.0,
                           tol));

  const bool balanced = std::sqrt(b.norm_t_sq) < 1e-9;
  if (balanced) {
    double ric_sym = 0.0, ric_inv = 0.0;
    for (int x = 0; x < d; ++x)
      for (int y = 0; y < d; ++y)
        ric_sym = std::max(ric_sym, std::abs(b.ric(x, y) - b.ric(y, x)));
    for (int a = 0; a < 3; ++a)
      ric_inv = std::max(ric_inv, type11_residual(b.ric, q[a]));
    out.push_back(make_check("hkt.balanced.ric_sym",
                             "balanced: Ricci tensor is symmetric",
                             "balanced structures", ric_sym, 0.0, tol));
    out.push_back(make_check("hkt.balanced.ric_invariant",
                             "balanced: Ricci tensor is J-invariant",
                             "balanced structures", ric_inv, 0.0, tol));
    out.push_back(make_check("hkt.balanced.coclosed",
                             "balanced: the torsion 3-form is coclosed",
                             "coclosed torsion", b.delta_torsion.max_abs(), 0.0,
                             tol));
  }

  const bool flat = b.norm_torsion_sq < 1e-18 && b.rg.max_abs() < 1e-12;
  if (flat) {
    out.push_back(make_check("hkt.flat.scal_g", "flat case: Scal^g = 0",
                             "hyper structures with flat metric",
                             std::abs(b.scal_g), 0.0, tol));
    out.push_back(make_check("hkt.flat.scal_gq", "flat case: Scal^g_Q = 0",
                             "hyper structures with flat metric",
                             std::abs(b.scal_gq), 0.0, tol));
  }

  const double v1 = b.scal_g - b.scal_gq;
  const double v2 = b.scal_g - 2.0 * b.scal_gq;
  out.push_back(make_check("hkt.pointwise.first",
                           std::string("pointwise Scal^g - Scal^g_Q (sign ") +
                               (v1 > 0 ? "+" : (v1 < 0 ? "-" : "0")) + ")",
                           "scalar curvature sign report", v1, v1, 0.0));
  out.push_back(make_check("hkt.pointwise.second",
                           std::string("pointwise Scal^g - 2 Scal^g_Q (sign ") +
                               (v2 > 0 ? "+" : (v2 < 0 ? "-" : "0")) + ")",
                           "scalar curvature sign report", v2, v2, 0.0));
  return out;
}

} // namespace qkt
