#ifndef QKT_TENSOR_HPP
#define QKT_TENSOR_HPP

#include <array>
#include <cassert>
#include <cstddef>
#include <vector>

#include <Eigen/Dense>

namespace qkt {

using EndoMatrix = Eigen::MatrixXd;
using Vec = Eigen::VectorXd;

// Dense real tensor over an orthonormal frame. Rank is a runtime value
// (0..5 is what the geometry needs), entries stored row-major.
class Tensor {
public:
  Tensor() = default;
  Tensor(int rank, int dim);

  int rank() const { return rank_; }
  int dim() const { return dim_; }
  std::size_t size() const { return v_.size(); }

  double* data() { return v_.data(); }
  const double* data() const { return v_.data(); }

  template <class... Is>
  double& operator()(Is... is) {
    static_assert((std::is_convertible_v<Is, int> && ...));
    assert(int(sizeof...(Is)) == rank_);
    return v_[flat(std::array<int, sizeof...(Is)>{int(is)...})];
  }
  template <class... Is>
  double operator()(Is... is) const {
    assert(int(sizeof...(Is)) == rank_);
    return v_[flat(std::array<int, sizeof...(Is)>{int(is)...})];
  }

  Tensor& operator+=(const Tensor& o);
  Tensor& operator-=(const Tensor& o);
  Tensor& operator*=(double s);
  friend Tensor operator+(Tensor a, const Tensor& b) { return a += b; }
  friend Tensor operator-(Tensor a, const Tensor& b) { return a -= b; }
  friend Tensor operator*(double s, Tensor a) { return a *= s; }

  double max_abs() const;

private:
  template <std::size_t N>
  std::size_t flat(const std::array<int, N>& idx) const {
    std::size_t f = 0;
    for (int i : idx) {
      assert(i >= 0 && i < dim_);
      f = f * dim_ + std::size_t(i);
    }
    return f;
  }

  int rank_ = 0;
  int dim_ = 0;
  std::vector<double> v_{0.0};
};

double max_abs_diff(const Tensor& a, const Tensor& b);

// trace(A B^t); the inner product on endomorphisms.
double endo_inner(const EndoMatrix& a, const EndoMatrix& b);

// Inner product of 2-forms: the full ordered sum over both indices.
// The normalization is pinned by (Phi,Phi) = dim for an orthogonal
// complex structure together with the scalar-curvature trace identity
// Scal_alpha = 1/2 (dt, Phi_alpha); see tests.
double two_form_inner(const Tensor& a, const Tensor& b);

// ||T||^2 as the full ordered-index sum over all three slots.
double norm_sq_3form(const Tensor& t);

// T with J applied to the argument slots selected by `slots`,
// e.g. {true,true,false} -> T(JX, JY, Z).
Tensor j_pullback_3form(const Tensor& t, const EndoMatrix& j,
                        const std::array<bool, 3>& slots);

// S_J(T)(X,Y,Z) = T(JX,JY,Z) + T(JX,Y,JZ) + T(X,JY,JZ).
Tensor s_j(const Tensor& t, const EndoMatrix& j);

// residual of the (1,2)+(2,1) type condition T = S_J(T)
double type_residual(const Tensor& t, const EndoMatrix& j);

// Orthogonal projector onto the subspace of antisymmetric 3-forms with
// T = S_J(T) for all three structures of a quaternionic triple. The
// subspace basis is computed once (SVD of the stacked constraints) and
// reused for repeated projections.
class TypeProjector {
public:
  TypeProjector(int dim, const std::array<EndoMatrix, 3>& js);

  Tensor apply(const Tensor& t) const;
  int subspace_dim() const { return int(basis_.cols()); }

  // coordinates of antisymmetric 3-forms over ordered triples i<j<k
  static Eigen::VectorXd to_coords(const Tensor& t);
  static Tensor from_coords(const Eigen::VectorXd& v, int dim);
  static std::vector<std::array<int, 3>> triples(int dim);

  // rows of the homogeneous constraint system (S_J - id) T = 0, one
  // block per J, over the triple coordinates (used by the QKT solver)
  const Eigen::MatrixXd& constraint_rows() const { return rows_; }

private:
  int dim_;
  Eigen::MatrixXd rows_;
  Eigen::MatrixXd basis_;
};

Tensor antisymmetrize3(const Tensor& t);

} // namespace qkt

#endif
