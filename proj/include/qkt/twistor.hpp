#ifndef QKT_TWISTOR_HPP
#define QKT_TWISTOR_HPP

#include "qkt/curvature.hpp"
#include "qkt/models.hpp"

namespace qkt {

// A point of the twistor sphere with its adapted admissible basis:
// adapted.j[1] = a1 J1 + a2 J2 + a3 J3 is the complex structure at the
// point, adapted.j[0] and adapted.j[2] span the vertical directions.
struct TwistorPoint {
  std::array<double, 3> a{};
  QuaternionicTriple adapted;

  const EndoMatrix& i0() const { return adapted[0]; }
  const EndoMatrix& j0() const { return adapted[1]; }
  const EndoMatrix& k0() const { return adapted[2]; }
};

// Tangent vector of the twistor space at a point: vertical coefficients
// over (I0, K0) plus a horizontal frame vector.
struct TwistorVector {
  Eigen::Vector2d vert = Eigen::Vector2d::Zero();
  Vec horiz;

  static TwistorVector vertical(double a, double b, int dim);
  static TwistorVector horizontal(const Vec& xi);
};

// Frame data the fiberwise evaluations consume: the curvature and torsion
// of the QKT connection together with their covariant derivatives.
struct TwistorContext {
  MetricLieAlgebra algebra;
  QuaternionicTriple q;
  Tensor r;        // curvature of the torsion connection
  Tensor torsion;
  Tensor nabla_r;  // rank 5
  Tensor nabla_torsion;
  Vec t;           // torsion 1-form
  Tensor ric_g;
  double scal_g = 0.0;
  double scal_gq = 0.0;
  bool hkt = false;
  int dim = 0;
  int n = 0;
};

TwistorContext make_twistor_context(const Model& m, const TorsionConnection& tc,
                                    const CurvatureBundle& b, bool hkt);

TwistorPoint make_point(const QuaternionicTriple& q,
                        const std::array<double, 3>& a);

// the almost complex structures: vertical A -> J0 A (I1) or -J0 A (I2),
// horizontal xi -> J0 xi
TwistorVector i_action(int which, const TwistorPoint& pt, const TwistorVector& v);

// the metric family: c^2 (A,B) on vertical, <xi,eta> on horizontal
double h_c(const TwistorPoint& pt, double c, const TwistorVector& v,
           const TwistorVector& w);

// F_i(X,Y,Z) = h_c((D_X I_i) Y, Z) via the closed fiberwise case table
double f_tensor(const TwistorContext& ctx, const TwistorPoint& pt, int which,
                double c, const TwistorVector& x, const TwistorVector& y,
                const TwistorVector& z);

// curvature of h_c via the closed fiberwise case table
double k_tensor(const TwistorContext& ctx, const TwistorPoint& pt, double c,
                const TwistorVector& x, const TwistorVector& y,
                const TwistorVector& z, const TwistorVector& w);

struct ClassReport {
  double kaehler = 0.0;
  double hermitian = 0.0;
  double g1 = 0.0;
  double semi_kaehler = 0.0;
  double quasi_kaehler = 0.0;
  double nearly_kaehler = 0.0;
  double almost_kaehler = 0.0;
  // deviation of tr F on horizontal vectors from t(J0 xi)
  double trf_vs_t = 0.0;
  double trf_max = 0.0;
};

ClassReport gray_hervella_at(const TwistorContext& ctx, const TwistorPoint& pt,
                             int which, double c);

// evaluation grid: the six axis points and `extra` seeded unit vectors
std::vector<std::array<double, 3>> twistor_grid(int extra, std::uint64_t seed);

// classification over the grid (max residual per class)
ClassReport gray_hervella(const TwistorContext& ctx, int which, double c,
                          const std::vector<std::array<double, 3>>& grid);
ClassReport gray_hervella_serial(const TwistorContext& ctx, int which, double c,
                                 const std::vector<std::array<double, 3>>& grid);

// structural residuals: torsion 2-form relations, I_i^2 = -id, metric
// compatibility, antisymmetries of F and K, gauge rotation about the
// point, antipodal verdicts
CheckList twistor_structure_checks(const TwistorContext& ctx, double c,
                                   const std::vector<std::array<double, 3>>& grid,
                                   double tol);

// the integrability/classification theorem: non-integrability witness for
// I2, the G1 equivalences at the given c, semi-Kaehler iff balanced, and
// the vanishing-torsion implications
CheckList verify_th2(const TwistorContext& ctx, const CurvatureBundle& b,
                     const QuaternionicTriple& q, double c,
                     const std::vector<std::array<double, 3>>& grid, double tol);

// Ricci and *-Ricci of (Z, h_c, I_i) from traces of the curvature table
// (defined for hyper models)
CheckList twistor_ricci(const TwistorContext& ctx, double c, double tol);

} // namespace qkt

#endif
