#ifndef QKT_TORSION_HPP
#define QKT_TORSION_HPP

#include <stdexcept>

#include "qkt/lie_model.hpp"
#include "qkt/quaternionic.hpp"

namespace qkt {

// Metric connection Gamma = Gamma^g + T/2 with totally skew torsion T.
// omega are the sp(1) connection 1-forms when the connection preserves
// the quaternionic bundle (zero for the per-J and HKT cases).
struct TorsionConnection {
  Connection conn;
  Tensor torsion;
  std::array<Vec, 3> omega;
  double solve_residual = 0.0;
  int null_space_dim = 0;            // of the full unknown vector
  double torsion_null_component = 0.0;  // max |T-part| over the null space
};

struct InfeasibleError : std::runtime_error {
  explicit InfeasibleError(const std::string& what, double res)
      : std::runtime_error(what), residual(res) {}
  double residual;
};

struct NotHktError : std::runtime_error {
  explicit NotHktError(double d)
      : std::runtime_error("torsions of the three Bismut connections differ"),
        discrepancy(d) {}
  double discrepancy;
};

struct NonUniqueTorsionError : std::runtime_error {
  explicit NonUniqueTorsionError(double c)
      : std::runtime_error("torsion solution space has positive dimension"),
        null_component(c) {}
  double null_component;
};

struct AlphaDependentError : std::runtime_error {
  explicit AlphaDependentError(double d)
      : std::runtime_error("torsion 1-form depends on the almost complex structure"),
        spread(d) {}
  double spread;
};

struct NotQuaternionicError : std::runtime_error {
  explicit NotQuaternionicError(double r)
      : std::runtime_error("connection does not preserve the quaternionic bundle"),
        residual(r) {}
  double residual;
};

// (nabla J)(i,j,k) = g((nabla_{e_i} J) e_j, e_k)
Tensor nabla_j(const Connection& conn, const EndoMatrix& j);

// Unique metric connection with totally skew torsion preserving (g, J):
// solve (nabla^g + T/2) J = 0 for antisymmetric T by rank-revealing
// least squares. Throws InfeasibleError when no solution exists (the
// structure is not integrable in the required sense).
TorsionConnection bismut(const MetricLieAlgebra& l, const EndoMatrix& j,
                         double feas_tol = 1e-9);

// Runs bismut for each J_a; succeeds iff the three torsions coincide.
TorsionConnection hkt_detect(const MetricLieAlgebra& l,
                             const QuaternionicTriple& q,
                             double agree_tol = 1e-9);

// Joint solve for (T, omega_1, omega_2, omega_3) with T constrained to
// the (1,2)+(2,1) type subspace and nabla J_a = -w_b Jc + w_c Jb.
// Returns the minimum-norm solution; throws NonUniqueTorsionError if the
// T-part of the solution is not unique.
TorsionConnection qkt_find(const MetricLieAlgebra& l,
                           const QuaternionicTriple& q,
                           const TypeProjector& proj,
                           double feas_tol = 1e-9);

// t(X) = 1/2 sum_i T(J_a X, e_i, J_a e_i); asserted independent of a.
Vec torsion_one_form(const Tensor& t3, const QuaternionicTriple& q,
                     double tol = 1e-9);
// the same contraction for a single structure, without the consistency check
Vec torsion_one_form_single(const Tensor& t3, const EndoMatrix& j);

// w_c(X) = 1/(4n) sum_i g((nabla_X J_a) e_i, J_b e_i), cyclic (a,b,c);
// throws NotQuaternionicError if the reconstruction residual exceeds tol.
std::array<Vec, 3> connection_one_forms(const TorsionConnection& tc,
                                        const QuaternionicTriple& q,
                                        double tol = 1e-9);

// max residual of the quaternionic-connection condition over cyclic (a,b,c)
double eq1_residual(const Connection& conn, const QuaternionicTriple& q,
                    const std::array<Vec, 3>& omega);

struct TypeCheck {
  std::array<double, 3> residual;
  bool pass;
};
TypeCheck torsion_type_check(const Tensor& t3, const QuaternionicTriple& q,
                             double tol = 1e-9);

} // namespace qkt

#endif
