#include "qkt/lie_model.hpp"

#include <cmath>

namespace qkt {

double jacobi_check(const MetricLieAlgebra& l) {
  const int d = l.dim;
  const Tensor& c = l.c;
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        for (int t = 0; t < d; ++t) {
          double s = 0.0;
          for (int m = 0; m < d; ++m)
            s += c(i, j, m) * c(m, k, t) + c(j, k, m) * c(m, i, t) +
                 c(k, i, m) * c(m, j, t);
          worst = std::max(worst, std::abs(s));
        }
  return worst;
}

Connection levi_civita(const MetricLieAlgebra& l) {
  const int d = l.dim;
  const Tensor& c = l.c;
  Connection conn{Tensor(3, d)};
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        conn.gamma(i, j, k) =
            0.5 * (c(i, j, k) - c(j, k, i) + c(k, i, j));
  return conn;
}

double torsion_free_residual(const MetricLieAlgebra& l, const Connection& g) {
  const int d = l.dim;
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        worst = std::max(worst, std::abs(g.gamma(i, j, k) - g.gamma(j, i, k) -
                                         l.c(i, j, k)));
  return worst;
}

double metric_residual(const Connection& g) {
  const int d = g.dim();
  double worst = 0.0;
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j)
      for (int k = 0; k < d; ++k)
        worst = std::max(worst, std::abs(g.gamma(i, j, k) + g.gamma(i, k, j)));
  return worst;
}

namespace {

// shared entry evaluator for the exterior derivative kernels
double ce_entry(const MetricLieAlgebra& l, const Tensor& w, const int* idx,
                int p1) {
  const int d = l.dim;
  double s = 0.0;
  int rest[5];
  for (int a = 0; a < p1; ++a)
    for (int b = a + 1; b < p1; ++b) {
      int n = 0;
      for (int t = 0; t < p1; ++t)
        if (t != a && t != b) rest[n++] = idx[t];
      const double sign = ((a + b) % 2 == 0) ? 1.0 : -1.0;
      double inner = 0.0;
      for (int m = 0; m < d; ++m) {
        const double br = l.c(idx[a], idx[b], m);
        if (br == 0.0) continue;
        double wv = 0.0;
        switch (p1 - 2) {
          case 0: wv = w.data()[m]; break;
          case 1: wv = w(m, rest[0]); break;
          case 2: wv = w(m, rest[0], rest[1]); break;
          case 3: wv = w(m, rest[0], rest[1], rest[2]); break;
          default: assert(false);
        }
        inner += br * wv;
      }
      s += sign * inner;
    }
  return s;
}

void unflatten(std::size_t f, int d, int rank, int* idx) {
  for (int r = rank - 1; r >= 0; --r) {
    idx[r] = int(f % std::size_t(d));
    f /= std::size_t(d);
  }
}

} // namespace

Tensor ce_derivative(const MetricLieAlgebra& l, const Tensor& w) {
  const int d = l.dim;
  const int p1 = w.rank() + 1;
  Tensor out(p1, d);
  const std::ptrdiff_t n = std::ptrdiff_t(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t f = 0; f < n; ++f) {
    int idx[5];
    unflatten(std::size_t(f), d, p1, idx);
    out.data()[f] = ce_entry(l, w, idx, p1);
  }
  return out;
}

Tensor ce_derivative_serial(const MetricLieAlgebra& l, const Tensor& w) {
  const int d = l.dim;
  const int p1 = w.rank() + 1;
  Tensor out(p1, d);
  for (std::size_t f = 0; f < out.size(); ++f) {
    int idx[5];
    unflatten(f, d, p1, idx);
    out.data()[f] = ce_entry(l, w, idx, p1);
  }
  return out;
}

namespace {

double covd_entry(const Connection& conn, const Tensor& s, const int* idx,
                  int rank_out) {
  const int d = conn.dim();
  const int i = idx[0];
  const int r = rank_out - 1;
  double acc = 0.0;
  int jdx[5];
  for (int t = 0; t < r; ++t) jdx[t] = idx[1 + t];
  for (int slot = 0; slot < r; ++slot) {
    const int orig = jdx[slot];
    double inner = 0.0;
    for (int m = 0; m < d; ++m) {
      const double g = conn.gamma(i, orig, m);
      if (g == 0.0) continue;
      jdx[slot] = m;
      double sv = 0.0;
      switch (r) {
        case 1: sv = s.data()[jdx[0]]; break;
        case 2: sv = s(jdx[0], jdx[1]); break;
        case 3: sv = s(jdx[0], jdx[1], jdx[2]); break;
        case 4: sv = s(jdx[0], jdx[1], jdx[2], jdx[3]); break;
        default: assert(false);
      }
      inner += g * sv;
    }
    jdx[slot] = orig;
    acc -= inner;
  }
  return acc;
}

} // namespace

Tensor covariant_derivative(const Connection& conn, const Tensor& s) {
  const int d = conn.dim();
  const int rank_out = s.rank() + 1;
  Tensor out(rank_out, d);
  const std::ptrdiff_t n = std::ptrdiff_t(out.size());
#pragma omp parallel for schedule(static)
  for (std::ptrdiff_t f = 0; f < n; ++f) {
    int idx[5];
    unflatten(std::size_t(f), d, rank_out, idx);
    out.data()[f] = covd_entry(conn, s, idx, rank_out);
  }
  return out;
}

Tensor covariant_derivative_serial(const Connection& conn, const Tensor& s) {
  const int d = conn.dim();
  const int rank_out = s.rank() + 1;
  Tensor out(rank_out, d);
  for (std::size_t f = 0; f < out.size(); ++f) {
    int idx[5];
    unflatten(f, d, rank_out, idx);
    out.data()[f] = covd_entry(conn, s, idx, rank_out);
  }
  return out;
}

Tensor codifferential(const Connection& lc, const Tensor& s) {
  const int d = lc.dim();
  const Tensor ns = covariant_derivative(lc, s);
  const int r = s.rank();
  Tensor out(r - 1, d);
  // out(j2..jr) = -sum_i ns(i, i, j2..jr)
  for (std::size_t f = 0; f < out.size(); ++f) {
    int idx[5];
    unflatten(f, d, r - 1, idx);
    double acc = 0.0;
    for (int i = 0; i < d; ++i) {
      switch (r) {
        case 1: acc += ns(i, i); break;
        case 2: acc += ns(i, i, idx[0]); break;
        case 3: acc += ns(i, i, idx[0], idx[1]); break;
        default: assert(false);
      }
    }
    out.data()[f] = -acc;
  }
  return out;
}

double codifferential_scalar(const Connection& lc, const Vec& one_form) {
  const int d = lc.dim();
  Tensor t(1, d);
  for (int i = 0; i < d; ++i) t.data()[i] = one_form[i];
  const Tensor ns = covariant_derivative(lc, t);
  double acc = 0.0;
  for (int i = 0; i < d; ++i) acc += ns(i, i);
  return -acc;
}

} // namespace qkt
