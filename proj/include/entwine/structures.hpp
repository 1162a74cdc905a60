#pragma once

// Finite-dimensional algebras, coalgebras and entwining maps, given by exact
// structure constants in a fixed basis, plus the constructions that produce
// new entwining structures from old ones: matrix rings M_r(A), tensor
// products, morphisms, psi-invariant units and inner automorphisms.
//
// Conventions, fixed across the whole library:
//   algebra    mul[i*dim+j]      coordinates of e_i * e_j
//   coalgebra  comul[k](i,j)     coefficient of c_i (x) c_j in Delta(c_k)
//   entwining  psi.at(i,j)(p,q)  coefficient of e_p (x) c_q in psi(c_i (x) e_j)

#include "entwine/linalg.hpp"
#include "entwine/report.hpp"

#include <sstream>
#include <string>
#include <vector>

namespace entwine {

inline constexpr int kStructureDimCap = 64;

template <class S>
bool dvec_equal(const DVec<S>& a, const DVec<S>& b) {
  if (a.size() != b.size()) return false;
  for (int i = 0; i < a.size(); ++i)
    if (!is_zero(S(a(i) - b(i)))) return false;
  return true;
}

template <class S>
bool dmat_equal(const DMat<S>& a, const DMat<S>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  for (int j = 0; j < a.cols(); ++j)
    for (int i = 0; i < a.rows(); ++i)
      if (!is_zero(S(a(i, j) - b(i, j)))) return false;
  return true;
}

template <class S>
DVec<S> zero_vec(int n) {
  return DVec<S>::Constant(n, S(0));
}

template <class S>
DMat<S> zero_mat(int r, int c) {
  return DMat<S>::Constant(r, c, S(0));
}

template <class S>
DVec<S> basis_vec(int n, int i) {
  DVec<S> v = zero_vec<S>(n);
  v(i) = S(1);
  return v;
}

template <class S>
struct FiniteAlgebra {
  int dim = 0;
  bool unital = true;
  DVec<S> unit;                // zero vector when non-unital
  std::vector<DVec<S>> mul;    // [i*dim+j]

  const DVec<S>& mul_basis(int i, int j) const { return mul[i * dim + j]; }

  DVec<S> mul_vec(const DVec<S>& x, const DVec<S>& y) const {
    DVec<S> out = zero_vec<S>(dim);
    for (int i = 0; i < dim; ++i) {
      if (is_zero(x(i))) continue;
      for (int j = 0; j < dim; ++j) {
        if (is_zero(y(j))) continue;
        S c = x(i) * y(j);
        out += (mul_basis(i, j) * c).eval();
      }
    }
    return out;
  }

  DMat<S> left_mul(const DVec<S>& x) const {  // L_x(a) = x*a
    DMat<S> m = zero_mat<S>(dim, dim);
    for (int j = 0; j < dim; ++j)
      m.col(j) = mul_vec(x, basis_vec<S>(dim, j));
    return m;
  }
  DMat<S> right_mul(const DVec<S>& x) const {  // R_x(a) = a*x
    DMat<S> m = zero_mat<S>(dim, dim);
    for (int j = 0; j < dim; ++j)
      m.col(j) = mul_vec(basis_vec<S>(dim, j), x);
    return m;
  }
};

template <class S>
struct FiniteCoalgebra {
  int dim = 0;
  DVec<S> counit;
  std::vector<DMat<S>> comul;  // [k](i,j)
};

template <class S>
struct EntwiningMap {
  int dimA = 0, dimC = 0;
  std::vector<DMat<S>> comp;  // [i*dimA+j], each dimA x dimC

  const DMat<S>& at(int i, int j) const { return comp[i * dimA + j]; }
  DMat<S>& at(int i, int j) { return comp[i * dimA + j]; }
};

template <class S>
struct EntwiningStructure {
  FiniteAlgebra<S> A;
  FiniteCoalgebra<S> C;
  EntwiningMap<S> psi;

  int dimA() const { return A.dim; }
  int dimC() const { return C.dim; }
};

namespace detail {
inline std::string tuple_str(std::initializer_list<int> idx) {
  std::ostringstream os;
  os << "(";
  bool first = true;
  for (int i : idx) {
    if (!first) os << ",";
    os << i;
    first = false;
  }
  os << ")";
  return os.str();
}
}  // namespace detail

// Axiom-by-axiom validation; each verdict carries the first failing basis
// tuple as witness.
template <class S>
Report validate(const EntwiningStructure<S>& s) {
  Report rep;
  const auto& A = s.A;
  const auto& C = s.C;
  const auto& psi = s.psi;
  const int mA = A.dim, mC = C.dim;

  bool shapes = mA > 0 && mC > 0 && int(A.mul.size()) == mA * mA &&
                A.unit.size() == mA && C.counit.size() == mC &&
                int(C.comul.size()) == mC && psi.dimA == mA &&
                psi.dimC == mC && int(psi.comp.size()) == mC * mA;
  if (shapes)
    for (const auto& v : A.mul) shapes = shapes && v.size() == mA;
  if (shapes)
    for (const auto& m : C.comul)
      shapes = shapes && m.rows() == mC && m.cols() == mC;
  if (shapes)
    for (const auto& m : psi.comp)
      shapes = shapes && m.rows() == mA && m.cols() == mC;
  rep.check("shapes", shapes, "structure constant tables have wrong shape");
  if (!shapes) return rep;

  {
    bool ok = true;
    std::string w;
    for (int i = 0; i < mA && ok; ++i)
      for (int j = 0; j < mA && ok; ++j)
        for (int k = 0; k < mA && ok; ++k) {
          DVec<S> lhs = A.mul_vec(A.mul_basis(i, j), basis_vec<S>(mA, k));
          DVec<S> rhs = A.mul_vec(basis_vec<S>(mA, i), A.mul_basis(j, k));
          if (!dvec_equal(lhs, rhs)) {
            ok = false;
            w = "basis triple " + detail::tuple_str({i, j, k});
          }
        }
    rep.check("algebra associativity", ok, w);
  }

  if (A.unital) {
    bool ok = true;
    std::string w;
    for (int j = 0; j < mA && ok; ++j) {
      DVec<S> e = basis_vec<S>(mA, j);
      if (!dvec_equal(A.mul_vec(A.unit, e), e) ||
          !dvec_equal(A.mul_vec(e, A.unit), e)) {
        ok = false;
        w = "basis element " + detail::tuple_str({j});
      }
    }
    rep.check("algebra unit law", ok, w);
  }

  {
    // coassociativity: (Delta (x) id)Delta = (id (x) Delta)Delta on c_k
    bool ok = true;
    std::string w;
    for (int k = 0; k < mC && ok; ++k) {
      for (int a = 0; a < mC && ok; ++a)
        for (int b = 0; b < mC && ok; ++b)
          for (int c = 0; c < mC && ok; ++c) {
            S lhs(0), rhs(0);
            for (int m = 0; m < mC; ++m) {
              lhs += C.comul[k](m, c) * C.comul[m](a, b);
              rhs += C.comul[k](a, m) * C.comul[m](b, c);
            }
            if (!is_zero(S(lhs - rhs))) {
              ok = false;
              w = "c_" + std::to_string(k) + " at " +
                  detail::tuple_str({a, b, c});
            }
          }
    }
    rep.check("coalgebra coassociativity", ok, w);
  }

  {
    bool ok = true;
    std::string w;
    for (int k = 0; k < mC && ok; ++k) {
      DVec<S> left = zero_vec<S>(mC), right = zero_vec<S>(mC);
      for (int i = 0; i < mC; ++i)
        for (int j = 0; j < mC; ++j) {
          left(j) += C.counit(i) * C.comul[k](i, j);
          right(i) += C.counit(j) * C.comul[k](i, j);
        }
      DVec<S> ck = basis_vec<S>(mC, k);
      if (!dvec_equal(left, ck) || !dvec_equal(right, ck)) {
        ok = false;
        w = "c_" + std::to_string(k);
      }
    }
    rep.check("coalgebra counit law", ok, w);
  }
  if (!rep.ok()) return rep;  // psi axioms assume sane A and C

  {
    // psi multiplicativity: psi(c_i (x) e_j e_k) = (e_j)_psi (e_k)_psi (x) c^{psi psi}
    bool ok = true;
    std::string w;
    for (int i = 0; i < mC && ok; ++i)
      for (int j = 0; j < mA && ok; ++j)
        for (int k = 0; k < mA && ok; ++k) {
          DMat<S> lhs = zero_mat<S>(mA, mC);
          const DVec<S>& prod = A.mul_basis(j, k);
          for (int l = 0; l < mA; ++l)
            if (!is_zero(prod(l))) lhs += (psi.at(i, l) * prod(l)).eval();
          DMat<S> rhs = zero_mat<S>(mA, mC);
          const DMat<S>& first = psi.at(i, j);
          for (int p = 0; p < mA; ++p)
            for (int q = 0; q < mC; ++q) {
              if (is_zero(first(p, q))) continue;
              const DMat<S>& second = psi.at(q, k);
              for (int p2 = 0; p2 < mA; ++p2)
                for (int q2 = 0; q2 < mC; ++q2) {
                  if (is_zero(second(p2, q2))) continue;
                  S c = first(p, q) * second(p2, q2);
                  const DVec<S>& pp = A.mul_basis(p, p2);
                  for (int r = 0; r < mA; ++r)
                    if (!is_zero(pp(r))) rhs(r, q2) += pp(r) * c;
                }
            }
          if (!dmat_equal(lhs, rhs)) {
            ok = false;
            w = "(c,a,b) = " + detail::tuple_str({i, j, k});
          }
        }
    rep.check("psi multiplicativity", ok, w);
  }

  {
    // psi comultiplicativity
    bool ok = true;
    std::string w;
    for (int i = 0; i < mC && ok; ++i)
      for (int j = 0; j < mA && ok; ++j) {
        // lhs(p,a,b) = sum_q psi[i][j](p,q) Delta[q](a,b)
        // rhs(p,a,b) = sum_{a',b',p1} Delta[i](a',b') psi[b'][j](p1,b) psi[a'][p1](p,a)
        std::vector<DMat<S>> lhs(mA, zero_mat<S>(mC, mC));
        std::vector<DMat<S>> rhs(mA, zero_mat<S>(mC, mC));
        const DMat<S>& pij = psi.at(i, j);
        for (int p = 0; p < mA; ++p)
          for (int q = 0; q < mC; ++q)
            if (!is_zero(pij(p, q))) lhs[p] += (C.comul[q] * pij(p, q)).eval();
        for (int a1 = 0; a1 < mC; ++a1)
          for (int b1 = 0; b1 < mC; ++b1) {
            if (is_zero(C.comul[i](a1, b1))) continue;
            const DMat<S>& inner = psi.at(b1, j);
            for (int p1 = 0; p1 < mA; ++p1)
              for (int b = 0; b < mC; ++b) {
                if (is_zero(inner(p1, b))) continue;
                S c = C.comul[i](a1, b1) * inner(p1, b);
                const DMat<S>& outer = psi.at(a1, p1);
                for (int p = 0; p < mA; ++p)
                  for (int a = 0; a < mC; ++a)
                    if (!is_zero(outer(p, a))) rhs[p](a, b) += outer(p, a) * c;
              }
          }
        for (int p = 0; p < mA && ok; ++p)
          if (!dmat_equal(lhs[p], rhs[p])) {
            ok = false;
            w = "(c,a) = " + detail::tuple_str({i, j});
          }
      }
    rep.check("psi comultiplicativity", ok, w);
  }

  {
    // psi counit: a_psi eps(c^psi) = eps(c) a
    bool ok = true;
    std::string w;
    for (int i = 0; i < mC && ok; ++i)
      for (int j = 0; j < mA && ok; ++j) {
        DVec<S> lhs = (psi.at(i, j) * C.counit).eval();
        DVec<S> rhs = (basis_vec<S>(mA, j) * C.counit(i)).eval();
        if (!dvec_equal(lhs, rhs)) {
          ok = false;
          w = "(c,a) = " + detail::tuple_str({i, j});
        }
      }
    rep.check("psi counit", ok, w);
  }

  if (A.unital) {
    // psi unit: psi(c (x) 1_A) = 1_A (x) c
    bool ok = true;
    std::string w;
    for (int i = 0; i < mC && ok; ++i) {
      DMat<S> lhs = zero_mat<S>(mA, mC);
      for (int j = 0; j < mA; ++j)
        if (!is_zero(A.unit(j))) lhs += (psi.at(i, j) * A.unit(j)).eval();
      DMat<S> rhs = zero_mat<S>(mA, mC);
      rhs.col(i) = A.unit;
      if (!dmat_equal(lhs, rhs)) {
        ok = false;
        w = "c_" + std::to_string(i);
      }
    }
    rep.check("psi unit", ok, w);
  }
  return rep;
}

// --- builders -------------------------------------------------------------

template <class S>
EntwiningStructure<S> flip_entwining(FiniteAlgebra<S> A, FiniteCoalgebra<S> C) {
  EntwiningStructure<S> s;
  s.psi.dimA = A.dim;
  s.psi.dimC = C.dim;
  s.psi.comp.assign(size_t(C.dim) * A.dim, zero_mat<S>(A.dim, C.dim));
  for (int i = 0; i < C.dim; ++i)
    for (int j = 0; j < A.dim; ++j) s.psi.at(i, j)(j, i) = S(1);
  s.A = std::move(A);
  s.C = std::move(C);
  return s;
}

// M_r(A) with basis e_j (x) E_{kl}(1), flattened as (j*r + k)*r + l.
inline int matrix_basis_index(int r, int j, int k, int l) {
  return (j * r + k) * r + l;
}

template <class S>
EntwiningStructure<S> matrix_extend(const EntwiningStructure<S>& s, int r,
                                    int dim_cap = kStructureDimCap) {
  if (r < 1) throw EntwineError("matrix_extend: r must be >= 1");
  if (!s.A.unital) throw EntwineError("matrix_extend: algebra must be unital");
  const int mA = s.dimA(), mC = s.dimC();
  const int dim = mA * r * r;
  if (dim > dim_cap)
    throw EntwineError("matrix_extend: dimension " + std::to_string(dim) +
                       " exceeds cap " + std::to_string(dim_cap));
  EntwiningStructure<S> out;
  out.C = s.C;
  out.A.dim = dim;
  out.A.unital = true;
  out.A.unit = zero_vec<S>(dim);
  for (int k = 0; k < r; ++k)
    for (int m = 0; m < mA; ++m)
      out.A.unit(matrix_basis_index(r, m, k, k)) += s.A.unit(m);
  out.A.mul.assign(size_t(dim) * dim, zero_vec<S>(dim));
  for (int j = 0; j < mA; ++j)
    for (int k = 0; k < r; ++k)
      for (int l = 0; l < r; ++l)
        for (int j2 = 0; j2 < mA; ++j2)
          for (int k2 = 0; k2 < r; ++k2)
            for (int l2 = 0; l2 < r; ++l2) {
              if (l != k2) continue;
              DVec<S>& dst =
                  out.A.mul[size_t(matrix_basis_index(r, j, k, l)) * dim +
                            matrix_basis_index(r, j2, k2, l2)];
              const DVec<S>& prod = s.A.mul_basis(j, j2);
              for (int m = 0; m < mA; ++m)
                dst(matrix_basis_index(r, m, k, l2)) += prod(m);
            }
  out.psi.dimA = dim;
  out.psi.dimC = mC;
  out.psi.comp.assign(size_t(mC) * dim, zero_mat<S>(dim, mC));
  for (int i = 0; i < mC; ++i)
    for (int j = 0; j < mA; ++j) {
      const DMat<S>& base = s.psi.at(i, j);
      for (int k = 0; k < r; ++k)
        for (int l = 0; l < r; ++l) {
          DMat<S>& dst = out.psi.at(i, matrix_basis_index(r, j, k, l));
          for (int p = 0; p < mA; ++p)
            for (int q = 0; q < mC; ++q)
              dst(matrix_basis_index(r, p, k, l), q) += base(p, q);
        }
    }
  return out;
}

// Tensor structure (A (x) A', C (x) C', psi (x) psi'), row-major flattening.
template <class S>
EntwiningStructure<S> tensor_structure(const EntwiningStructure<S>& s1,
                                       const EntwiningStructure<S>& s2,
                                       int dim_cap = kStructureDimCap) {
  const int a1 = s1.dimA(), a2 = s2.dimA(), c1 = s1.dimC(), c2 = s2.dimC();
  const int dA = a1 * a2, dC = c1 * c2;
  if (dA > dim_cap || dC > dim_cap)
    throw EntwineError("tensor_structure: dimension exceeds cap");
  auto ai = [a2](int i, int j) { return i * a2 + j; };
  auto ci = [c2](int i, int j) { return i * c2 + j; };
  EntwiningStructure<S> out;
  out.A.dim = dA;
  out.A.unital = s1.A.unital && s2.A.unital;
  out.A.unit = zero_vec<S>(dA);
  if (out.A.unital)
    for (int i = 0; i < a1; ++i)
      for (int j = 0; j < a2; ++j)
        out.A.unit(ai(i, j)) = s1.A.unit(i) * s2.A.unit(j);
  out.A.mul.assign(size_t(dA) * dA, zero_vec<S>(dA));
  for (int i = 0; i < a1; ++i)
    for (int j = 0; j < a2; ++j)
      for (int k = 0; k < a1; ++k)
        for (int l = 0; l < a2; ++l) {
          DVec<S>& dst = out.A.mul[size_t(ai(i, j)) * dA + ai(k, l)];
          const DVec<S>& p1 = s1.A.mul_basis(i, k);
          const DVec<S>& p2 = s2.A.mul_basis(j, l);
          for (int p = 0; p < a1; ++p) {
            if (is_zero(p1(p))) continue;
            for (int q = 0; q < a2; ++q) dst(ai(p, q)) += p1(p) * p2(q);
          }
        }
  out.C.dim = dC;
  out.C.counit = zero_vec<S>(dC);
  for (int i = 0; i < c1; ++i)
    for (int j = 0; j < c2; ++j)
      out.C.counit(ci(i, j)) = s1.C.counit(i) * s2.C.counit(j);
  out.C.comul.assign(dC, zero_mat<S>(dC, dC));
  for (int k1 = 0; k1 < c1; ++k1)
    for (int k2 = 0; k2 < c2; ++k2) {
      DMat<S>& dst = out.C.comul[ci(k1, k2)];
      const DMat<S>& d1 = s1.C.comul[k1];
      const DMat<S>& d2 = s2.C.comul[k2];
      for (int i = 0; i < c1; ++i)
        for (int j = 0; j < c1; ++j) {
          if (is_zero(d1(i, j))) continue;
          for (int p = 0; p < c2; ++p)
            for (int q = 0; q < c2; ++q)
              dst(ci(i, p), ci(j, q)) += d1(i, j) * d2(p, q);
        }
    }
  out.psi.dimA = dA;
  out.psi.dimC = dC;
  out.psi.comp.assign(size_t(dC) * dA, zero_mat<S>(dA, dC));
  for (int i = 0; i < c1; ++i)
    for (int j = 0; j < c2; ++j)
      for (int k = 0; k < a1; ++k)
        for (int l = 0; l < a2; ++l) {
          DMat<S>& dst = out.psi.at(ci(i, j), ai(k, l));
          const DMat<S>& q1 = s1.psi.at(i, k);
          const DMat<S>& q2 = s2.psi.at(j, l);
          for (int p = 0; p < a1; ++p)
            for (int u = 0; u < c1; ++u) {
              if (is_zero(q1(p, u))) continue;
              for (int p2 = 0; p2 < a2; ++p2)
                for (int v = 0; v < c2; ++v)
                  dst(ai(p, p2), ci(u, v)) += q1(p, u) * q2(p2, v);
            }
        }
  return out;
}

// --- morphisms ------------------------------------------------------------

template <class S>
struct EntwiningMorphism {
  EntwiningStructure<S> source, target;
  DMat<S> alpha;  // dimA' x dimA
  DMat<S> gamma;  // dimC' x dimC
};

template <class S>
EntwiningMorphism<S> identity_morphism(const EntwiningStructure<S>& s) {
  EntwiningMorphism<S> m{s, s, zero_mat<S>(s.dimA(), s.dimA()),
                         zero_mat<S>(s.dimC(), s.dimC())};
  for (int i = 0; i < s.dimA(); ++i) m.alpha(i, i) = S(1);
  for (int i = 0; i < s.dimC(); ++i) m.gamma(i, i) = S(1);
  return m;
}

template <class S>
EntwiningMorphism<S> compose_morphism(const EntwiningMorphism<S>& m2,
                                      const EntwiningMorphism<S>& m1) {
  if (m2.source.dimA() != m1.target.dimA() ||
      m2.source.dimC() != m1.target.dimC())
    throw EntwineError("compose_morphism: dimension mismatch");
  EntwiningMorphism<S> out{m1.source, m2.target,
                           (m2.alpha * m1.alpha).eval(),
                           (m2.gamma * m1.gamma).eval()};
  return out;
}

// alpha multiplicative, gamma a coalgebra map, and the compatibility
// (alpha (x) gamma) psi = psi' (gamma (x) alpha) on all basis pairs.
template <class S>
Report check_morphism(const EntwiningMorphism<S>& m) {
  Report rep;
  const auto& s = m.source;
  const auto& t = m.target;
  const int mA = s.dimA(), mC = s.dimC();
  bool shapes = m.alpha.rows() == t.dimA() && m.alpha.cols() == mA &&
                m.gamma.rows() == t.dimC() && m.gamma.cols() == mC;
  rep.check("shapes", shapes, "alpha/gamma dimensions do not match");
  if (!shapes) return rep;

  {
    bool ok = true;
    std::string w;
    for (int i = 0; i < mA && ok; ++i)
      for (int j = 0; j < mA && ok; ++j) {
        DVec<S> lhs = (m.alpha * s.A.mul_basis(i, j)).eval();
        DVec<S> rhs = t.A.mul_vec(m.alpha.col(i), m.alpha.col(j));
        if (!dvec_equal(lhs, rhs)) {
          ok = false;
          w = "basis pair " + detail::tuple_str({i, j});
        }
      }
    rep.check("alpha multiplicative", ok, w);
  }

  {
    bool ok = true;
    std::string w;
    for (int k = 0; k < mC && ok; ++k) {
      DMat<S> lhs = zero_mat<S>(t.dimC(), t.dimC());
      for (int i = 0; i < mC; ++i)
        for (int j = 0; j < mC; ++j) {
          if (is_zero(s.C.comul[k](i, j))) continue;
          lhs += (m.gamma.col(i) * m.gamma.col(j).transpose() *
                  s.C.comul[k](i, j))
                     .eval();
        }
      DMat<S> rhs = zero_mat<S>(t.dimC(), t.dimC());
      for (int k2 = 0; k2 < t.dimC(); ++k2)
        if (!is_zero(m.gamma(k2, k))) rhs += (t.C.comul[k2] * m.gamma(k2, k)).eval();
      if (!dmat_equal(lhs, rhs)) {
        ok = false;
        w = "c_" + std::to_string(k);
      }
    }
    rep.check("gamma comultiplicative", ok, w);
  }

  {
    bool ok = true;
    std::string w;
    for (int k = 0; k < mC && ok; ++k) {
      S lhs = (t.C.counit.transpose() * m.gamma.col(k)).value();
      if (!is_zero(S(lhs - s.C.counit(k)))) {
        ok = false;
        w = "c_" + std::to_string(k);
      }
    }
    rep.check("gamma counital", ok, w);
  }

  {
    bool ok = true;
    std::string w;
    for (int i = 0; i < mC && ok; ++i)
      for (int j = 0; j < mA && ok; ++j) {
        DMat<S> lhs = (m.alpha * s.psi.at(i, j) * m.gamma.transpose()).eval();
        DMat<S> rhs = zero_mat<S>(t.dimA(), t.dimC());
        for (int i2 = 0; i2 < t.dimC(); ++i2) {
          if (is_zero(m.gamma(i2, i))) continue;
          for (int j2 = 0; j2 < t.dimA(); ++j2) {
            if (is_zero(m.alpha(j2, j))) continue;
            rhs += (t.psi.at(i2, j2) * (m.gamma(i2, i) * m.alpha(j2, j))).eval();
          }
        }
        if (!dmat_equal(lhs, rhs)) {
          ok = false;
          w = "(c,a) = " + detail::tuple_str({i, j});
        }
      }
    rep.check("entwining compatibility", ok, w);
  }
  return rep;
}

// --- units and inner automorphisms ---------------------------------------

// Inversion helper: solve L_x y = 1_A and check two-sidedness.
template <class S>
std::optional<DVec<S>> algebra_inverse(const FiniteAlgebra<S>& A,
                                       const DVec<S>& x) {
  if (!A.unital) return std::nullopt;
  SpMat<S> lx = dense_to_sparse<S>(A.left_mul(x));
  auto y = solve_membership<S>(lx, A.unit);
  if (!y) return std::nullopt;
  if (!dvec_equal(A.mul_vec(*y, x), A.unit)) return std::nullopt;
  return y;
}

// x in U_psi(A): xy = yx = 1_A and psi(c (x) x) = x (x) c for all c.
template <class S>
Report unit_check(const EntwiningStructure<S>& s, const DVec<S>& x,
                  const DVec<S>& y) {
  Report rep;
  const int mA = s.dimA(), mC = s.dimC();
  bool shapes = x.size() == mA && y.size() == mA && s.A.unital;
  rep.check("shapes", shapes, "vector sizes or missing unit");
  if (!shapes) return rep;
  rep.check("x*y = 1", dvec_equal(s.A.mul_vec(x, y), s.A.unit),
            "x*y differs from the unit");
  rep.check("y*x = 1", dvec_equal(s.A.mul_vec(y, x), s.A.unit),
            "y*x differs from the unit");
  bool inv = true;
  std::string w;
  for (int i = 0; i < mC && inv; ++i) {
    DMat<S> lhs = zero_mat<S>(mA, mC);
    for (int j = 0; j < mA; ++j)
      if (!is_zero(x(j))) lhs += (s.psi.at(i, j) * x(j)).eval();
    DMat<S> rhs = zero_mat<S>(mA, mC);
    rhs.col(i) = x;
    if (!dmat_equal(lhs, rhs)) {
      inv = false;
      w = "c_" + std::to_string(i);
    }
  }
  rep.check("psi(c (x) x) = x (x) c", inv, w);
  return rep;
}

// phi_x(a) = x a x^{-1} as an entwining morphism (phi_x, id_C).
template <class S>
EntwiningMorphism<S> inner_automorphism(const EntwiningStructure<S>& s,
                                        const DVec<S>& x, const DVec<S>& y) {
  Report uc = unit_check(s, x, y);
  if (!uc.ok()) throw EntwineError("inner_automorphism: x not in U_psi(A)");
  EntwiningMorphism<S> m = identity_morphism(s);
  for (int j = 0; j < s.dimA(); ++j)
    m.alpha.col(j) =
        s.A.mul_vec(x, s.A.mul_vec(basis_vec<S>(s.dimA(), j), y));
  return m;
}

// --- scalar conversion ----------------------------------------------------

// Structures are stored with rational entries; this maps them into the
// working field (identity for Q, reduction for F_p with integrality
// enforced by scalar_from_rat).
template <class S>
DVec<S> vec_from_rat(const DVec<Rat>& v, const Field& f) {
  DVec<S> out(v.size());
  for (int i = 0; i < int(v.size()); ++i)
    out(i) = scalar_from_rat<S>(v(i), f);
  return out;
}

template <class S>
DMat<S> mat_from_rat(const DMat<Rat>& m, const Field& f) {
  DMat<S> out(m.rows(), m.cols());
  for (int i = 0; i < int(m.rows()); ++i)
    for (int j = 0; j < int(m.cols()); ++j)
      out(i, j) = scalar_from_rat<S>(m(i, j), f);
  return out;
}

template <class S>
EntwiningStructure<S> structure_from_rat(const EntwiningStructure<Rat>& s,
                                         const Field& f) {
  EntwiningStructure<S> out;
  out.A.dim = s.A.dim;
  out.A.unital = s.A.unital;
  if (s.A.unital) out.A.unit = vec_from_rat<S>(s.A.unit, f);
  for (const auto& v : s.A.mul) out.A.mul.push_back(vec_from_rat<S>(v, f));
  out.C.dim = s.C.dim;
  out.C.counit = vec_from_rat<S>(s.C.counit, f);
  for (const auto& m : s.C.comul) out.C.comul.push_back(mat_from_rat<S>(m, f));
  out.psi.dimA = s.psi.dimA;
  out.psi.dimC = s.psi.dimC;
  for (const auto& m : s.psi.comp) out.psi.comp.push_back(mat_from_rat<S>(m, f));
  return out;
}

}  // namespace entwine
