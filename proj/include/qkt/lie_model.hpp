#ifndef QKT_LIE_MODEL_HPP
#define QKT_LIE_MODEL_HPP

#include "qkt/tensor.hpp"

namespace qkt {

// A metric Lie algebra on an orthonormal frame: [e_i,e_j] = sum_k c(i,j,k) e_k,
// metric = identity. All invariant geometry reduces to algebra on the frame.
struct MetricLieAlgebra {
  int dim = 0;
  Tensor c;  // rank 3, antisymmetric in the first two slots

  MetricLieAlgebra() = default;
  MetricLieAlgebra(int d) : dim(d), c(3, d) {}

  void set_bracket(int i, int j, int k, double v) {
    c(i, j, k) = v;
    c(j, i, k) = -v;
  }
};

// Gamma(i,j,k) = g(nabla_{e_i} e_j, e_k)
struct Connection {
  Tensor gamma;
  int dim() const { return gamma.dim(); }
};

// max residual of sum_cyc [[e_i,e_j],e_k] over all triples
double jacobi_check(const MetricLieAlgebra& l);

// Koszul formula on an orthonormal left-invariant frame:
// Gamma(i,j,k) = 1/2 (c(i,j,k) - c(j,k,i) + c(k,i,j)).
Connection levi_civita(const MetricLieAlgebra& l);

// residuals of the defining properties of the Levi-Civita connection
double torsion_free_residual(const MetricLieAlgebra& l, const Connection& g);
double metric_residual(const Connection& g);

// Exterior derivative of an invariant antisymmetric p-form,
// d w (X_0..X_p) = sum_{i<j} (-1)^{i+j} w([X_i,X_j], ..., no X_i, X_j).
Tensor ce_derivative(const MetricLieAlgebra& l, const Tensor& w);
Tensor ce_derivative_serial(const MetricLieAlgebra& l, const Tensor& w);

// Covariant derivative of an invariant tensor: the frame-derivative term
// vanishes, so (nabla S)(i, j1..jr) = -sum_s sum_m Gamma(i,j_s,m) S(..m..).
Tensor covariant_derivative(const Connection& conn, const Tensor& s);
Tensor covariant_derivative_serial(const Connection& conn, const Tensor& s);

// delta S = -sum_i (nabla^g_{e_i} S)(e_i, ...)
Tensor codifferential(const Connection& levi_civita_conn, const Tensor& s);

double codifferential_scalar(const Connection& levi_civita_conn, const Vec& one_form);

} // namespace qkt

#endif
