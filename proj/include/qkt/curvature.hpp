#ifndef QKT_CURVATURE_HPP
#define QKT_CURVATURE_HPP

#include <optional>
#include <string>
#include <vector>

#include "qkt/torsion.hpp"

namespace qkt {

// One verified identity: lhs/rhs are representative values (for residual
// checks lhs is the residual and rhs is 0), ref names the identity.
struct Check {
  std::string id;
  std::string description;
  std::string ref;
  double lhs = 0.0;
  double rhs = 0.0;
  double abs_err = 0.0;
  double tol = 0.0;
  bool pass = false;
};

Check make_check(std::string id, std::string description, std::string ref,
                 double lhs, double rhs, double tol);

using CheckList = std::vector<Check>;

// R(i,j,k,l) for a left-invariant connection:
// sum_m (G(j,k,m) G(i,m,l) - G(i,k,m) G(j,m,l)) - sum_m c(i,j,m) G(m,k,l)
Tensor curvature(const MetricLieAlgebra& l, const Connection& conn);
Tensor curvature_serial(const MetricLieAlgebra& l, const Connection& conn);

// rho_a(X,Y) = 1/2 sum_i R(X,Y,e_i,J_a e_i)
Tensor ricci_form(const Tensor& r, const EndoMatrix& j);

// Ric(X,Y) = sum_i R(e_i,X,Y,e_i)
Tensor ricci_tensor(const Tensor& r);

// dT from the covariant derivative and the quadratic torsion terms,
// evaluated exactly as the closed formula states (the cyclic quadratic
// sum enters twice, i.e. with total coefficient 2).
Tensor dt_via_curvature_formula(const Connection& conn, const Tensor& t3);
Tensor dt_via_curvature_formula_serial(const Connection& conn, const Tensor& t3);

// Everything the identity suite consumes, computed once per model.
struct CurvatureBundle {
  int dim = 0;
  int n = 0;  // dim / 4
  Tensor r;       // curvature of the torsion connection
  Tensor rg;      // curvature of the Levi-Civita connection
  std::array<Tensor, 3> rho;
  std::array<Tensor, 3> rho_g;
  Tensor ric;
  Tensor ric_g;
  double scal = 0.0;
  double scal_g = 0.0;
  double scal_table[3][3] = {};    // Scal_{a,b} = -sum_i rho_a(e_i, J_b e_i)
  double scal_table_g[3][3] = {};
  double scal_q = 0.0;             // Scal_{a,a}, asserted a-independent
  double scal_gq = 0.0;            // Scal^g_{a,a}
  std::array<double, 3> scal_alpha{};  // -sum_i Ric(e_i, J_a e_i)
  Vec t;
  Tensor dt;       // exterior derivative of t
  double delta_t = 0.0;
  double norm_t_sq = 0.0;
  Tensor torsion;  // T
  Tensor d_torsion;       // dT via the curvature formula
  Tensor d_torsion_ce;    // dT via the exterior derivative
  Tensor delta_torsion;   // codifferential of T (2-form)
  double norm_torsion_sq = 0.0;
  Tensor nabla_t3;  // nabla T (torsion connection)
  Tensor nabla_t1;  // nabla t (torsion connection)
};

CurvatureBundle curvature_bundle(const MetricLieAlgebra& l,
                                 const QuaternionicTriple& q,
                                 const TorsionConnection& tc);

// structural residuals of the curvature tensors
CheckList curvature_symmetry_checks(const CurvatureBundle& b, double tol);

// n [R(X,Y), J_a] = rho_c(X,Y) J_b - rho_b(X,Y) J_c, and the splitting
// R = R' + 1/(2n) sum rho_a J_a with [R'(X,Y), J_a] = 0.
CheckList ricci_commutator_checks(const CurvatureBundle& b,
                                  const QuaternionicTriple& q, double tol);
double curvature_split_residual(const CurvatureBundle& b,
                                const QuaternionicTriple& q);

CheckList verify_prop_nov(const CurvatureBundle& b, const QuaternionicTriple& q,
                          double tol);
CheckList verify_orp1(const CurvatureBundle& b, const QuaternionicTriple& q,
                      double tol);
CheckList verify_eq22(const CurvatureBundle& b, const QuaternionicTriple& q,
                      double tol);
CheckList verify_orp2_orp4(const CurvatureBundle& b, const QuaternionicTriple& q,
                           double tol);
CheckList th11_pointwise(const CurvatureBundle& b, double tol);
CheckList verify_ric1(const CurvatureBundle& b, const QuaternionicTriple& q,
                      double tol);
CheckList instanton_and_star_ricci(const CurvatureBundle& b,
                                   const QuaternionicTriple& q, double tol);
CheckList dt_agreement_checks(const CurvatureBundle& b, double tol);
CheckList lemma_trace_checks(const CurvatureBundle& b,
                             const QuaternionicTriple& q, double tol);

struct HomothetyFit {
  double constant = 0.0;   // best-fit 1/c^2
  double residual = 0.0;
  std::optional<double> c_squared;  // set iff constant > 0, fit accepted
  bool degenerate = false;          // all Ricci forms vanish
};
HomothetyFit special_homothety_check(const CurvatureBundle& b,
                                     const QuaternionicTriple& q,
                                     bool instanton_type, double rel_tol = 1e-8);

// instanton flag from the three equivalent criteria (consistency enforced
// by instanton_and_star_ricci)
bool instanton_flag(const CurvatureBundle& b, const QuaternionicTriple& q,
                    double tol);

// Lee form of (g, J): theta = -delta Phi o J
Vec lee_form(const MetricLieAlgebra& l, const Connection& lc, const EndoMatrix& j);

CheckList hkt_suite(const MetricLieAlgebra& l, const QuaternionicTriple& q,
                    const CurvatureBundle& b, double tol);

// residual of the (1,1)-type condition for a 2-form: max |b(X,Y) - b(JX,JY)|
double type11_residual(const Tensor& two_form, const EndoMatrix& j);

} // namespace qkt

#endif
