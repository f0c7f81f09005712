#include "qkt/quaternionic.hpp"

#include <cmath>
#include <stdexcept>

namespace qkt {

double TripleReport::max_res() const {
  return std::max(std::max(square_res, product_res),
                  std::max(anticommute_res, orthogonality_res));
}

TripleReport verify_triple(const QuaternionicTriple& q) {
  const int d = q.dim();
  const EndoMatrix id = EndoMatrix::Identity(d, d);
  TripleReport r;
  for (int a = 0; a < 3; ++a) {
    r.square_res =
        std::max(r.square_res, (q[a] * q[a] + id).cwiseAbs().maxCoeff());
    r.orthogonality_res = std::max(
        r.orthogonality_res, (q[a].transpose() * q[a] - id).cwiseAbs().maxCoeff());
  }
  r.product_res = (q[0] * q[1] - q[2]).cwiseAbs().maxCoeff();
  r.anticommute_res = (q[0] * q[1] + q[1] * q[0]).cwiseAbs().maxCoeff();
  return r;
}

Tensor kaehler_form(const EndoMatrix& j) {
  const int d = int(j.rows());
  const EndoMatrix jtj = j.transpose() * j;
  if ((jtj - EndoMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("kaehler_form: J is not orthogonal");
  Tensor phi(2, d);
  for (int x = 0; x < d; ++x)
    for (int y = 0; y < d; ++y) phi(x, y) = j(x, y);  // g(e_x, J e_y)
  return phi;
}

QuaternionicTriple rotate_triple(const QuaternionicTriple& q,
                                 const std::array<std::array<double, 3>, 3>& r) {
  QuaternionicTriple out;
  for (int a = 0; a < 3; ++a) {
    EndoMatrix m = EndoMatrix::Zero(q.dim(), q.dim());
    for (int b = 0; b < 3; ++b)
      m += r[std::size_t(b)][std::size_t(a)] * q[b];
    out.j[std::size_t(a)] = m;
  }
  return out;
}

std::array<std::array<double, 3>, 3> rotation_to(const std::array<double, 3>& a) {
  const double norm = std::sqrt(a[0] * a[0] + a[1] * a[1] + a[2] * a[2]);
  if (std::abs(norm - 1.0) > 1e-9)
    throw std::invalid_argument("rotation_to: |a| != 1");
  // rotate b = (0,1,0) onto a; v = b x a, cos = <b,a>
  const double v0 = a[2], v1 = 0.0, v2 = -a[0];
  const double c = a[1];
  const double vn2 = v0 * v0 + v2 * v2;
  std::array<std::array<double, 3>, 3> r{};
  if (vn2 < 1e-28) {
    // a = +-(0,1,0); antipode handled by a fixed flip in SO(3)
    if (c > 0.0) {
      for (int i = 0; i < 3; ++i) r[std::size_t(i)][std::size_t(i)] = 1.0;
    } else {
      r[0][0] = 1.0;
      r[1][1] = -1.0;
      r[2][2] = -1.0;
    }
    return r;
  }
  // R = I + K + K^2/(1+c) with K = [v]_x
  const double k[3][3] = {{0, -v2, v1}, {v2, 0, -v0}, {-v1, v0, 0}};
  double k2[3][3];
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      k2[i][j] = 0.0;
      for (int m = 0; m < 3; ++m) k2[i][j] += k[i][m] * k[m][j];
    }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j)
      r[std::size_t(i)][std::size_t(j)] =
          (i == j ? 1.0 : 0.0) + k[i][j] + k2[i][j] / (1.0 + c);
  return r;
}

QuaternionicTriple sp1_rotate(const QuaternionicTriple& q,
                              const std::array<double, 3>& a) {
  return rotate_triple(q, rotation_to(a));
}

} // namespace qkt
