#include "qkt/torsion.hpp"

#include <cmath>

namespace qkt {

Tensor nabla_j(const Connection& conn, const EndoMatrix& j) {
  const int d = conn.dim();
  Tensor out(3, d);
  for (int i = 0; i < d; ++i)
    for (int a = 0; a < d; ++a)
      for (int k = 0; k < d; ++k) {
        double s = 0.0;
        for (int m = 0; m < d; ++m)
          s += j(m, a) * conn.gamma(i, m, k) - conn.gamma(i, a, m) * j(k, m);
        out(i, a, k) = s;
      }
  return out;
}

namespace {

struct SvdSolve {
  Eigen::VectorXd x;
  double residual;
  int null_dim;
  Eigen::MatrixXd null_basis;
};

SvdSolve lsq_min_norm(const Eigen::MatrixXd& a, const Eigen::VectorXd& b) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(a, Eigen::ComputeThinU | Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double thresh = double(std::max(a.rows(), a.cols())) *
                        (sv.size() ? sv[0] : 1.0) *
                        std::numeric_limits<double>::epsilon();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > thresh) ++rank;
  // min-norm least squares from the truncated SVD
  Eigen::VectorXd ut_b = svd.matrixU().transpose() * b;
  Eigen::VectorXd y = Eigen::VectorXd::Zero(a.cols());
  for (Eigen::Index i = 0; i < rank; ++i) y[i] = ut_b[i] / sv[i];
  SvdSolve out;
  out.x = svd.matrixV() * y;
  out.residual = (a * out.x - b).cwiseAbs().maxCoeff();
  out.null_dim = int(a.cols() - rank);
  out.null_basis = svd.matrixV().rightCols(a.cols() - rank);
  return out;
}

// columns of the map (T over triple coords) -> (nabla J applied with T/2)
Eigen::MatrixXd torsion_to_nabla_j(const MetricLieAlgebra& l,
                                   const EndoMatrix& j) {
  const int d = l.dim;
  const auto trips = TypeProjector::triples(d);
  const Eigen::Index nt = Eigen::Index(trips.size());
  Eigen::MatrixXd a(Eigen::Index(d) * d * d, nt);
  Connection half{Tensor(3, d)};
  for (Eigen::Index col = 0; col < nt; ++col) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(nt);
    e[col] = 1.0;
    half.gamma = 0.5 * TypeProjector::from_coords(e, d);
    const Tensor nj = nabla_j(half, j);
    for (std::size_t f = 0; f < nj.size(); ++f) a(Eigen::Index(f), col) = nj.data()[f];
  }
  return a;
}

TorsionConnection make_connection(const MetricLieAlgebra& l, const Tensor& t3) {
  TorsionConnection tc;
  tc.torsion = t3;
  tc.conn = levi_civita(l);
  tc.conn.gamma += 0.5 * t3;
  for (auto& w : tc.omega) w = Vec::Zero(l.dim);
  return tc;
}

} // namespace

TorsionConnection bismut(const MetricLieAlgebra& l, const EndoMatrix& j,
                         double feas_tol) {
  const int d = l.dim;
  const EndoMatrix jtj = j.transpose() * j;
  if ((jtj - EndoMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-9 ||
      (j * j + EndoMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("bismut: J is not an orthogonal almost complex structure");

  const Connection lc = levi_civita(l);
  const Tensor njg = nabla_j(lc, j);
  Eigen::VectorXd b(Eigen::Index(njg.size()));
  for (std::size_t f = 0; f < njg.size(); ++f) b[Eigen::Index(f)] = -njg.data()[f];

  const Eigen::MatrixXd a = torsion_to_nabla_j(l, j);
  const SvdSolve sol = lsq_min_norm(a, b);
  if (sol.residual > feas_tol)
    throw InfeasibleError("bismut: no skew-torsion connection preserves (g, J)",
                          sol.residual);

  TorsionConnection tc = make_connection(l, TypeProjector::from_coords(sol.x, d));
  tc.solve_residual = sol.residual;
  tc.null_space_dim = sol.null_dim;
  tc.torsion_null_component =
      sol.null_dim ? sol.null_basis.cwiseAbs().maxCoeff() : 0.0;
  return tc;
}

TorsionConnection hkt_detect(const MetricLieAlgebra& l,
                             const QuaternionicTriple& q, double agree_tol) {
  std::array<TorsionConnection, 3> per;
  for (int a = 0; a < 3; ++a) per[std::size_t(a)] = bismut(l, q[a]);
  double disc = 0.0;
  for (int a = 0; a < 3; ++a)
    for (int b = a + 1; b < 3; ++b)
      disc = std::max(disc, max_abs_diff(per[std::size_t(a)].torsion,
                                         per[std::size_t(b)].torsion));
  if (disc > agree_tol) throw NotHktError(disc);
  TorsionConnection tc = per[0];
  tc.solve_residual =
      std::max({per[0].solve_residual, per[1].solve_residual, per[2].solve_residual, disc});
  return tc;
}

TorsionConnection qkt_find(const MetricLieAlgebra& l,
                           const QuaternionicTriple& q,
                           const TypeProjector& proj, double feas_tol) {
  const int d = l.dim;
  const auto trips = TypeProjector::triples(d);
  const Eigen::Index nt = Eigen::Index(trips.size());
  const Eigen::Index n_unknown = nt + 3 * d;
  const Eigen::Index block = Eigen::Index(d) * d * d;

  Eigen::MatrixXd a = Eigen::MatrixXd::Zero(3 * block + 3 * nt, n_unknown);
  Eigen::VectorXd b = Eigen::VectorXd::Zero(a.rows());

  const Connection lc = levi_civita(l);
  static const int cyc[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  for (int row = 0; row < 3; ++row) {
    const int al = cyc[row][0], be = cyc[row][1], ga = cyc[row][2];
    a.block(row * block, 0, block, nt) = torsion_to_nabla_j(l, q[al]);
    // omega terms: nabla J_a + w_b (x) J_g - w_g (x) J_b = -nabla^g J_a
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          const Eigen::Index r =
              row * block + (Eigen::Index(i) * d + j) * d + k;
          a(r, nt + be * d + i) += q[ga](k, j);
          a(r, nt + ga * d + i) -= q[be](k, j);
        }
    const Tensor njg = nabla_j(lc, q[al]);
    for (std::size_t f = 0; f < njg.size(); ++f)
      b[row * block + Eigen::Index(f)] = -njg.data()[f];
  }
  a.block(3 * block, 0, 3 * nt, nt) = proj.constraint_rows();

  const SvdSolve sol = lsq_min_norm(a, b);
  if (sol.residual > feas_tol)
    throw InfeasibleError("qkt_find: model admits no QKT structure", sol.residual);

  const double t_null =
      sol.null_dim ? sol.null_basis.topRows(nt).cwiseAbs().maxCoeff() : 0.0;
  if (t_null > 1e-9) throw NonUniqueTorsionError(t_null);

  TorsionConnection tc =
      make_connection(l, TypeProjector::from_coords(sol.x.head(nt), d));
  for (int w = 0; w < 3; ++w) tc.omega[std::size_t(w)] = sol.x.segment(nt + w * d, d);
  tc.solve_residual = sol.residual;
  tc.null_space_dim = sol.null_dim;
  tc.torsion_null_component = t_null;
  return tc;
}

Vec torsion_one_form_single(const Tensor& t3, const EndoMatrix& j) {
  const int d = t3.dim();
  Vec t = Vec::Zero(d);
  for (int x = 0; x < d; ++x) {
    double s = 0.0;
    for (int p = 0; p < d; ++p) {
      if (j(p, x) == 0.0) continue;
      for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) s += j(p, x) * t3(p, i, k) * j(k, i);
    }
    t[x] = 0.5 * s;
  }
  return t;
}

Vec torsion_one_form(const Tensor& t3, const QuaternionicTriple& q, double tol) {
  std::array<Vec, 3> cand;
  for (int a = 0; a < 3; ++a) cand[std::size_t(a)] = torsion_one_form_single(t3, q[a]);
  double spread = 0.0;
  for (int a = 1; a < 3; ++a)
    spread = std::max(spread,
                      (cand[std::size_t(a)] - cand[0]).cwiseAbs().maxCoeff());
  const double scale = 1.0 + cand[0].cwiseAbs().maxCoeff();
  if (spread > tol * scale) throw AlphaDependentError(spread);
  return cand[0];
}

double eq1_residual(const Connection& conn, const QuaternionicTriple& q,
                    const std::array<Vec, 3>& omega) {
  const int d = conn.dim();
  static const int cyc[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  double worst = 0.0;
  for (const auto& c : cyc) {
    const int al = c[0], be = c[1], ga = c[2];
    const Tensor nj = nabla_j(conn, q[al]);
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        for (int k = 0; k < d; ++k) {
          const double expect = -omega[std::size_t(be)][i] * q[ga](k, j) +
                                omega[std::size_t(ga)][i] * q[be](k, j);
          worst = std::max(worst, std::abs(nj(i, j, k) - expect));
        }
  }
  return worst;
}

std::array<Vec, 3> connection_one_forms(const TorsionConnection& tc,
                                        const QuaternionicTriple& q,
                                        double tol) {
  const int d = q.dim();
  const int n4 = d;  // 4n
  std::array<Vec, 3> omega;
  static const int cyc[3][3] = {{0, 1, 2}, {1, 2, 0}, {2, 0, 1}};
  for (const auto& c : cyc) {
    const int al = c[0], be = c[1], ga = c[2];
    const Tensor nj = nabla_j(tc.conn, q[al]);
    Vec w = Vec::Zero(d);
    for (int x = 0; x < d; ++x) {
      double s = 0.0;
      for (int i = 0; i < d; ++i)
        for (int k = 0; k < d; ++k) s += nj(x, i, k) * q[be](k, i);
      w[x] = s / double(n4);
    }
    omega[std::size_t(ga)] = w;
  }
  const double res = eq1_residual(tc.conn, q, omega);
  if (res > tol) throw NotQuaternionicError(res);
  return omega;
}

TypeCheck torsion_type_check(const Tensor& t3, const QuaternionicTriple& q,
                             double tol) {
  TypeCheck out{};
  const double scale = 1.0 + t3.max_abs();
  bool ok = true;
  for (int a = 0; a < 3; ++a) {
    out.residual[std::size_t(a)] = type_residual(t3, q[a]);
    ok = ok && out.residual[std::size_t(a)] < tol * scale;
  }
  out.pass = ok;
  return out;
}

} // namespace qkt
