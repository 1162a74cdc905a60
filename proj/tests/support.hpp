#pragma once

// Shared fixtures for the test suite: small named structures, random
// families, and basis-change transport.

#include "entwine/structures.hpp"

#include <random>

namespace support {

using entwine::DMat;
using entwine::DVec;
using entwine::EntwineError;
using entwine::EntwiningMap;
using entwine::EntwiningStructure;
using entwine::FiniteAlgebra;
using entwine::FiniteCoalgebra;
using entwine::is_zero;

// --- named algebras -------------------------------------------------------

template <class S>
FiniteAlgebra<S> algebra_k() {
  FiniteAlgebra<S> A;
  A.dim = 1;
  A.unital = true;
  A.unit = entwine::basis_vec<S>(1, 0);
  A.mul = {entwine::basis_vec<S>(1, 0)};
  return A;
}

// k[x]/(x^2 - b x - c), basis {1, x}
template <class S>
FiniteAlgebra<S> quadratic_algebra(const S& b, const S& c) {
  FiniteAlgebra<S> A;
  A.dim = 2;
  A.unital = true;
  A.unit = entwine::basis_vec<S>(2, 0);
  A.mul.assign(4, entwine::zero_vec<S>(2));
  A.mul[0 * 2 + 0](0) = S(1);
  A.mul[0 * 2 + 1](1) = S(1);
  A.mul[1 * 2 + 0](1) = S(1);
  A.mul[1 * 2 + 1](0) = c;
  A.mul[1 * 2 + 1](1) = b;
  return A;
}

template <class S>
FiniteAlgebra<S> dual_numbers() {
  return quadratic_algebra<S>(S(0), S(0));
}

template <class S>
FiniteAlgebra<S> group_algebra_zn(int n) {
  FiniteAlgebra<S> A;
  A.dim = n;
  A.unital = true;
  A.unit = entwine::basis_vec<S>(n, 0);
  A.mul.assign(size_t(n) * n, entwine::zero_vec<S>(n));
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) A.mul[i * n + j]((i + j) % n) = S(1);
  return A;
}

// --- named coalgebras -----------------------------------------------------

template <class S>
FiniteCoalgebra<S> coalgebra_k() {
  FiniteCoalgebra<S> C;
  C.dim = 1;
  C.counit = entwine::basis_vec<S>(1, 0);
  C.comul = {entwine::zero_mat<S>(1, 1)};
  C.comul[0](0, 0) = S(1);
  return C;
}

template <class S>
FiniteCoalgebra<S> grouplike_coalgebra(int n) {
  FiniteCoalgebra<S> C;
  C.dim = n;
  C.counit = DVec<S>::Constant(n, S(1));
  C.comul.assign(n, entwine::zero_mat<S>(n, n));
  for (int k = 0; k < n; ++k) C.comul[k](k, k) = S(1);
  return C;
}

// Dual coalgebra of a finite algebra: Delta(c_k)(i,j) = coeff of e_k in
// e_i e_j, counit(c_k) = coeff of e_k in 1.
template <class S>
FiniteCoalgebra<S> dual_coalgebra(const FiniteAlgebra<S>& A) {
  if (!A.unital) throw EntwineError("dual_coalgebra needs a unital algebra");
  FiniteCoalgebra<S> C;
  C.dim = A.dim;
  C.counit = A.unit;
  C.comul.assign(A.dim, entwine::zero_mat<S>(A.dim, A.dim));
  for (int i = 0; i < A.dim; ++i)
    for (int j = 0; j < A.dim; ++j) {
      const DVec<S>& prod = A.mul_basis(i, j);
      for (int k = 0; k < A.dim; ++k) C.comul[k](i, j) = prod(k);
    }
  return C;
}

// --- named entwinings -----------------------------------------------------

// A = C = k Z_n with psi(c_g (x) e_x) = e_x (x) c_{g x}: a genuinely
// non-flip entwining coming from the translation action.
template <class S>
EntwiningStructure<S> zn_translation(int n) {
  EntwiningStructure<S> s;
  s.A = group_algebra_zn<S>(n);
  s.C = grouplike_coalgebra<S>(n);
  s.psi.dimA = n;
  s.psi.dimC = n;
  s.psi.comp.assign(size_t(n) * n, entwine::zero_mat<S>(n, n));
  for (int g = 0; g < n; ++g)
    for (int x = 0; x < n; ++x) s.psi.at(g, x)(x, (g + x) % n) = S(1);
  return s;
}

// --- basis change ---------------------------------------------------------

template <class S>
DMat<S> dense_inverse(const DMat<S>& m) {
  int n = int(m.rows());
  DMat<S> a = m;
  DMat<S> inv = entwine::zero_mat<S>(n, n);
  for (int i = 0; i < n; ++i) inv(i, i) = S(1);
  for (int c = 0; c < n; ++c) {
    int sel = -1;
    for (int r = c; r < n; ++r)
      if (!is_zero(a(r, c))) {
        sel = r;
        break;
      }
    if (sel == -1) throw EntwineError("dense_inverse: singular matrix");
    a.row(c).swap(a.row(sel));
    inv.row(c).swap(inv.row(sel));
    S lead = a(c, c);
    for (int j = 0; j < n; ++j) {
      a(c, j) = a(c, j) / lead;
      inv(c, j) = inv(c, j) / lead;
    }
    for (int r = 0; r < n; ++r) {
      if (r == c || is_zero(a(r, c))) continue;
      S f = a(r, c);
      for (int j = 0; j < n; ++j) {
        a(r, j) = a(r, j) - f * a(c, j);
        inv(r, j) = inv(r, j) - f * inv(c, j);
      }
    }
  }
  return inv;
}

// Transport the structure to new bases f_j = sum_i P(i,j) e_i on A and
// g_k = sum_i Q(i,k) c_i on C.  P and Q must be invertible.
template <class S>
EntwiningStructure<S> change_basis(const EntwiningStructure<S>& s,
                                   const DMat<S>& P, const DMat<S>& Q) {
  const int mA = s.dimA(), mC = s.dimC();
  DMat<S> Pi = dense_inverse(P);
  DMat<S> Qi = dense_inverse(Q);
  EntwiningStructure<S> out;
  out.A.dim = mA;
  out.A.unital = s.A.unital;
  if (s.A.unital) out.A.unit = Pi * s.A.unit;
  out.A.mul.assign(size_t(mA) * mA, entwine::zero_vec<S>(mA));
  for (int i = 0; i < mA; ++i)
    for (int j = 0; j < mA; ++j)
      out.A.mul[i * mA + j] = Pi * s.A.mul_vec(P.col(i), P.col(j));
  out.C.dim = mC;
  out.C.counit = entwine::zero_vec<S>(mC);
  for (int k = 0; k < mC; ++k) {
    S v = S(0);
    for (int i = 0; i < mC; ++i) v += Q(i, k) * s.C.counit(i);
    out.C.counit(k) = v;
  }
  out.C.comul.assign(mC, entwine::zero_mat<S>(mC, mC));
  for (int k = 0; k < mC; ++k) {
    DMat<S> m = entwine::zero_mat<S>(mC, mC);
    for (int k2 = 0; k2 < mC; ++k2) {
      if (is_zero(Q(k2, k))) continue;
      m += Q(k2, k) * s.C.comul[k2];
    }
    out.C.comul[k] = Qi * m * Qi.transpose();
  }
  out.psi.dimA = mA;
  out.psi.dimC = mC;
  out.psi.comp.assign(size_t(mC) * mA, entwine::zero_mat<S>(mA, mC));
  for (int i = 0; i < mC; ++i)
    for (int j = 0; j < mA; ++j) {
      DMat<S> m = entwine::zero_mat<S>(mA, mC);
      for (int i2 = 0; i2 < mC; ++i2)
        for (int j2 = 0; j2 < mA; ++j2) {
          S f = Q(i2, i) * P(j2, j);
          if (is_zero(f)) continue;
          m += f * s.psi.at(i2, j2);
        }
      out.psi.at(i, j) = Pi * m * Qi.transpose();
    }
  return out;
}

// --- randomness -----------------------------------------------------------

using Rng = std::mt19937_64;

inline int rand_int(Rng& rng, int lo, int hi) {
  return int(rng() % (unsigned long long)(hi - lo + 1)) + lo;
}

template <class S>
S rand_scalar(Rng& rng, int span = 3) {
  return S(rand_int(rng, -span, span));
}

// Invertible matrix with unit determinant: product of unitriangular factors.
template <class S>
DMat<S> random_invertible(Rng& rng, int n) {
  DMat<S> L = entwine::zero_mat<S>(n, n);
  DMat<S> U = entwine::zero_mat<S>(n, n);
  for (int i = 0; i < n; ++i) {
    L(i, i) = S(1);
    U(i, i) = S(1);
    for (int j = 0; j < i; ++j) L(i, j) = rand_scalar<S>(rng, 2);
    for (int j = i + 1; j < n; ++j) U(i, j) = rand_scalar<S>(rng, 2);
  }
  return L * U;
}

template <class S>
FiniteAlgebra<S> random_algebra(Rng& rng) {
  switch (rand_int(rng, 0, 3)) {
    case 0: return algebra_k<S>();
    case 1: return dual_numbers<S>();
    case 2: return group_algebra_zn<S>(2);
    default:
      return quadratic_algebra<S>(rand_scalar<S>(rng), rand_scalar<S>(rng));
  }
}

template <class S>
FiniteCoalgebra<S> random_coalgebra(Rng& rng) {
  switch (rand_int(rng, 0, 3)) {
    case 0: return coalgebra_k<S>();
    case 1: return grouplike_coalgebra<S>(2);
    case 2: return dual_coalgebra(dual_numbers<S>());
    default: return dual_coalgebra(random_algebra<S>(rng));
  }
}

// Random valid entwining with dim A, dim C <= 2: a flip or translation
// structure pushed through random basis changes on both sides.
template <class S>
EntwiningStructure<S> random_structure(Rng& rng) {
  EntwiningStructure<S> s;
  if (rand_int(rng, 0, 3) == 0) {
    s = zn_translation<S>(2);
  } else {
    s = entwine::flip_entwining(random_algebra<S>(rng), random_coalgebra<S>(rng));
  }
  DMat<S> P = random_invertible<S>(rng, s.dimA());
  DMat<S> Q = random_invertible<S>(rng, s.dimC());
  return change_basis(s, P, Q);
}

}  // namespace support
