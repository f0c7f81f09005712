#ifndef QKT_QUATERNIONIC_HPP
#define QKT_QUATERNIONIC_HPP

#include <array>

#include "qkt/tensor.hpp"

namespace qkt {

// An admissible basis J1, J2, J3 of a quaternionic structure:
// J_a^2 = -id, J1 J2 = J3 = -J2 J1, each J_a orthogonal.
struct QuaternionicTriple {
  std::array<EndoMatrix, 3> j;

  int dim() const { return int(j[0].rows()); }
  const EndoMatrix& operator[](int a) const { return j[std::size_t(a)]; }
};

struct TripleReport {
  double square_res = 0.0;        // max |J_a^2 + id|
  double product_res = 0.0;       // max |J1 J2 - J3|
  double anticommute_res = 0.0;   // max |J1 J2 + J2 J1|
  double orthogonality_res = 0.0; // max |J_a^t J_a - id|
  double max_res() const;
  bool pass(double tol) const { return max_res() < tol; }
};

TripleReport verify_triple(const QuaternionicTriple& q);

// Phi(X,Y) = g(X, JY) on the orthonormal frame.
Tensor kaehler_form(const EndoMatrix& j);

// New admissible basis with J2' = a1 J1 + a2 J2 + a3 J3 for |a| = 1,
// obtained by the rotation taking (0,1,0) to a (fixed axis flip at the
// antipode a = (0,-1,0)).
QuaternionicTriple sp1_rotate(const QuaternionicTriple& q,
                              const std::array<double, 3>& a);

// J_a' = sum_b R[b][a] J_b for R in SO(3)
QuaternionicTriple rotate_triple(const QuaternionicTriple& q,
                                 const std::array<std::array<double, 3>, 3>& r);

// Rodrigues rotation taking (0,1,0) to the unit vector a.
std::array<std::array<double, 3>, 3> rotation_to(const std::array<double, 3>& a);

} // namespace qkt

#endif
