#include "qkt/tensor.hpp"

#include <cmath>
#include <stdexcept>

namespace qkt {

Tensor::Tensor(int rank, int dim) : rank_(rank), dim_(dim) {
  assert(rank >= 0 && rank <= 5);
  assert(dim >= 1);
  std::size_t n = 1;
  for (int r = 0; r < rank; ++r) n *= std::size_t(dim);
  v_.assign(n, 0.0);
}

Tensor& Tensor::operator+=(const Tensor& o) {
  assert(rank_ == o.rank_ && dim_ == o.dim_);
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] += o.v_[i];
  return *this;
}

Tensor& Tensor::operator-=(const Tensor& o) {
  assert(rank_ == o.rank_ && dim_ == o.dim_);
  for (std::size_t i = 0; i < v_.size(); ++i) v_[i] -= o.v_[i];
  return *this;
}

Tensor& Tensor::operator*=(double s) {
  for (double& x : v_) x *= s;
  return *this;
}

double Tensor::max_abs() const {
  double m = 0.0;
  for (double x : v_) m = std::max(m, std::abs(x));
  return m;
}

double max_abs_diff(const Tensor& a, const Tensor& b) {
  assert(a.rank() == b.rank() && a.dim() == b.dim());
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i)
    m = std::max(m, std::abs(a.data()[i] - b.data()[i]));
  return m;
}

double endo_inner(const EndoMatrix& a, const EndoMatrix& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols() || a.rows() != a.cols())
    throw std::invalid_argument("endo_inner: dimension mismatch");
  return (a.array() * b.array()).sum();  // trace(A B^t)
}

double two_form_inner(const Tensor& a, const Tensor& b) {
  if (a.rank() != 2 || b.rank() != 2 || a.dim() != b.dim())
    throw std::invalid_argument("two_form_inner: need rank-2 tensors of equal dim");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a.data()[i] * b.data()[i];
  return s;
}

double norm_sq_3form(const Tensor& t) {
  assert(t.rank() == 3);
  double s = 0.0;
  for (std::size_t i = 0; i < t.size(); ++i) s += t.data()[i] * t.data()[i];
  return s;
}

Tensor j_pullback_3form(const Tensor& t, const EndoMatrix& j,
                        const std::array<bool, 3>& slots) {
  assert(t.rank() == 3);
  const int d = t.dim();
  if (j.rows() != d || j.cols() != d)
    throw std::invalid_argument("j_pullback_3form: dimension mismatch");
  const EndoMatrix j2 = j * j;
  if ((j2 + EndoMatrix::Identity(d, d)).cwiseAbs().maxCoeff() > 1e-9)
    throw std::invalid_argument("j_pullback_3form: J^2 != -id");

  Tensor out = t;
  for (int slot = 0; slot < 3; ++slot) {
    if (!slots[std::size_t(slot)]) continue;
    Tensor next(3, d);
    for (int a = 0; a < d; ++a)
      for (int b = 0; b < d; ++b)
        for (int c = 0; c < d; ++c) {
          double s = 0.0;
          for (int m = 0; m < d; ++m) {
            // apply J to the argument in `slot`
            int ia = a, ib = b, ic = c;
            int& target = slot == 0 ? ia : (slot == 1 ? ib : ic);
            int arg = target;
            target = m;
            s += j(m, arg) * out(ia, ib, ic);
          }
          next(a, b, c) = s;
        }
    out = next;
  }
  return out;
}

Tensor s_j(const Tensor& t, const EndoMatrix& j) {
  Tensor r = j_pullback_3form(t, j, {true, true, false});
  r += j_pullback_3form(t, j, {true, false, true});
  r += j_pullback_3form(t, j, {false, true, true});
  return r;
}

double type_residual(const Tensor& t, const EndoMatrix& j) {
  return max_abs_diff(s_j(t, j), t);
}

std::vector<std::array<int, 3>> TypeProjector::triples(int dim) {
  std::vector<std::array<int, 3>> out;
  for (int i = 0; i < dim; ++i)
    for (int j = i + 1; j < dim; ++j)
      for (int k = j + 1; k < dim; ++k) out.push_back({i, j, k});
  return out;
}

Eigen::VectorXd TypeProjector::to_coords(const Tensor& t) {
  auto tr = triples(t.dim());
  Eigen::VectorXd v(tr.size());
  for (std::size_t n = 0; n < tr.size(); ++n)
    v[Eigen::Index(n)] = t(tr[n][0], tr[n][1], tr[n][2]);
  return v;
}

Tensor TypeProjector::from_coords(const Eigen::VectorXd& v, int dim) {
  auto tr = triples(dim);
  assert(v.size() == Eigen::Index(tr.size()));
  Tensor t(3, dim);
  for (std::size_t n = 0; n < tr.size(); ++n) {
    const int i = tr[n][0], j = tr[n][1], k = tr[n][2];
    const double x = v[Eigen::Index(n)];
    t(i, j, k) = x;
    t(j, k, i) = x;
    t(k, i, j) = x;
    t(j, i, k) = -x;
    t(i, k, j) = -x;
    t(k, j, i) = -x;
  }
  return t;
}

TypeProjector::TypeProjector(int dim, const std::array<EndoMatrix, 3>& js)
    : dim_(dim) {
  const auto tr = triples(dim);
  const Eigen::Index nt = Eigen::Index(tr.size());
  rows_.resize(3 * nt, nt);
  for (Eigen::Index col = 0; col < nt; ++col) {
    Eigen::VectorXd e = Eigen::VectorXd::Zero(nt);
    e[col] = 1.0;
    const Tensor basis = from_coords(e, dim);
    for (int a = 0; a < 3; ++a) {
      const Tensor st = s_j(basis, js[std::size_t(a)]);
      rows_.block(a * nt, col, nt, 1) = to_coords(st);
    }
  }
  for (int a = 0; a < 3; ++a)
    rows_.block(a * nt, 0, nt, nt) -= Eigen::MatrixXd::Identity(nt, nt);

  // null space of the constraint matrix = the type subspace
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(rows_, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  const double tol =
      double(std::max(rows_.rows(), rows_.cols())) *
      (sv.size() ? sv[0] : 1.0) * std::numeric_limits<double>::epsilon();
  Eigen::Index rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i)
    if (sv[i] > tol) ++rank;
  basis_ = svd.matrixV().rightCols(nt - rank);
}

Tensor TypeProjector::apply(const Tensor& t) const {
  assert(t.rank() == 3 && t.dim() == dim_);
  const Eigen::VectorXd v = to_coords(t);
  return from_coords(basis_ * (basis_.transpose() * v), dim_);
}

Tensor antisymmetrize3(const Tensor& t) {
  assert(t.rank() == 3);
  const int d = t.dim();
  Tensor out(3, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        out(i, j, k) = (t(i, j, k) + t(j, k, i) + t(k, i, j) -
                        t(j, i, k) - t(i, k, j) - t(k, j, i)) / 6.0;
  return out;
}

} // namespace qkt
