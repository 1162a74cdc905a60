#pragma once

// Matrix-extension comparison machinery: the corner inclusion and matrix
// trace as chain maps, the explicit simplicial homotopy between their
// composite and the identity, and a report that certifies the homotopy
// identities together with equality of cohomology in every theory.

#include "entwine/complexes.hpp"
#include "entwine/structures.hpp"

#include <string>
#include <vector>

namespace entwine {

// All chain faces d_i : C_{n+1} -> C_n.
template <class S>
std::vector<SpMat<S>> face_maps(const EntwiningStructure<S>& s, int n,
                                long long max_dim = Limits{}.max_dim) {
  std::vector<SpMat<S>> out;
  for (int i = 0; i <= n + 1; ++i) out.push_back(chain_face(s, n, i, max_dim));
  return out;
}

namespace detail {

// letters of M_r(A) are triples (j, k, l) flattened as (j*r + k)*r + l
inline void split_letter(int letter, int r, int& j, int& k, int& l) {
  l = letter % r;
  k = (letter / r) % r;
  j = letter / (r * r);
}

}  // namespace detail

// Chain map C_n(A) -> C_n(M_r(A)) induced by the corner embedding
// a -> E_pp(a).
template <class S>
SpMat<S> inclusion_chain(const EntwiningStructure<S>& s, int r, int p, int n,
                         long long max_dim = Limits{}.max_dim) {
  if (p < 0 || p >= r) throw EntwineError("inclusion_chain: corner out of range");
  const int mA = s.dimA();
  const int mE = mA * r * r;
  long long src = chain_dim(s, n, max_dim);
  long long tgt = s.dimC();
  for (int i = 0; i <= n; ++i) tgt *= mE;
  if (tgt > max_dim)
    throw EntwineError("inclusion_chain: matrix chain space exceeds the guard");
  std::vector<Trip<S>> trips;
  std::vector<int> word, out;
  int c = 0;
  for (long long col = 0; col < src; ++col) {
    entwine::detail::decode_tuple(col, mA, n + 1, c, word);
    out.clear();
    for (int j : word) out.push_back(matrix_basis_index(r, j, p, p));
    trips.emplace_back(int(entwine::detail::encode_tuple(c, out, mE)),
                       int(col), S(1));
  }
  return sparse_from_triplets(int(tgt), int(src), trips);
}

// Chain map C_n(M_r(A)) -> C_n(A) induced by the matrix trace: a basis
// tuple survives iff its matrix indices close up cyclically.
template <class S>
SpMat<S> trace_chain(const EntwiningStructure<S>& s, int r, int n,
                     long long max_dim = Limits{}.max_dim) {
  const int mA = s.dimA();
  const int mE = mA * r * r;
  long long tgt = chain_dim(s, n, max_dim);
  long long src = s.dimC();
  for (int i = 0; i <= n; ++i) src *= mE;
  if (src > max_dim)
    throw EntwineError("trace_chain: matrix chain space exceeds the guard");
  std::vector<Trip<S>> trips;
  std::vector<int> word, out;
  int c = 0;
  for (long long col = 0; col < src; ++col) {
    entwine::detail::decode_tuple(col, mE, n + 1, c, word);
    bool closes = true;
    out.clear();
    int first_k = -1, prev_l = -1;
    for (int t = 0; t <= n; ++t) {
      int j, k, l;
      detail::split_letter(word[t], r, j, k, l);
      if (t == 0) first_k = k;
      else if (prev_l != k) { closes = false; break; }
      prev_l = l;
      out.push_back(j);
    }
    if (!closes || prev_l != first_k) continue;
    trips.emplace_back(int(entwine::detail::encode_tuple(c, out, mA)),
                       int(col), S(1));
  }
  return sparse_from_triplets(int(tgt), int(src), trips);
}

// The i-th piece of the simplicial homotopy, h_i : C_n(M_r) -> C_{n+1}(M_r),
// 0 <= i <= n.  On a basis tuple (c; (j_1,k_1,l_1),...,(j_{n+1},k_{n+1},l_{n+1}))
// it vanishes unless l_t = k_{t+1} for t < i and (for i >= 1) l_{n+1} = k_1;
// otherwise it zeroes out the matrix indices of the first i letters, inserts
// the unit in the corner row 0 with column l_i (l_{n+1} for i = 0), and
// clears the last letter's column index.
template <class S>
SpMat<S> homotopy_h(const EntwiningStructure<S>& s, int r, int n, int i,
                    long long max_dim = Limits{}.max_dim) {
  if (!s.A.unital) throw EntwineError("homotopy_h: the algebra must be unital");
  if (i < 0 || i > n) throw EntwineError("homotopy_h: index out of range");
  const int mA = s.dimA();
  const int mE = mA * r * r;
  long long src = s.dimC(), tgt = s.dimC();
  for (int t = 0; t <= n; ++t) src *= mE;
  for (int t = 0; t <= n + 1; ++t) tgt *= mE;
  if (src > max_dim || tgt > max_dim)
    throw EntwineError("homotopy_h: matrix chain space exceeds the guard");
  std::vector<Trip<S>> trips;
  std::vector<int> word, out;
  std::vector<int> js(n + 1), ks(n + 1), ls(n + 1);
  int c = 0;
  for (long long col = 0; col < src; ++col) {
    entwine::detail::decode_tuple(col, mE, n + 1, c, word);
    for (int t = 0; t <= n; ++t)
      detail::split_letter(word[t], r, js[t], ks[t], ls[t]);
    bool alive = true;
    for (int t = 0; t <= i - 2; ++t)
      if (ls[t] != ks[t + 1]) { alive = false; break; }
    if (i >= 1 && ls[n] != ks[0]) alive = false;
    if (!alive) continue;
    int insert_col = i == 0 ? ls[n] : ls[i - 1];
    for (int u = 0; u < mA; ++u) {
      if (is_zero(s.A.unit(u))) continue;
      out.clear();
      for (int t = 0; t < i; ++t)
        out.push_back(matrix_basis_index(r, js[t], 0, 0));
      out.push_back(matrix_basis_index(r, u, 0, insert_col));
      for (int t = i; t < n; ++t) out.push_back(word[t]);
      out.push_back(matrix_basis_index(r, js[n], ks[n], 0));
      trips.emplace_back(int(entwine::detail::encode_tuple(c, out, mE)),
                         int(col), s.A.unit(u));
    }
  }
  return sparse_from_triplets(int(tgt), int(src), trips);
}

// Alternating sum h = sum_i (-1)^i h_i : C_n(M_r) -> C_{n+1}(M_r).
template <class S>
SpMat<S> homotopy_total(const EntwiningStructure<S>& s, int r, int n,
                        long long max_dim = Limits{}.max_dim) {
  SpMat<S> h = homotopy_h(s, r, n, 0, max_dim);
  for (int i = 1; i <= n; ++i)
    h = add_scaled(h, S(1), homotopy_h(s, r, n, i, max_dim),
                   i % 2 ? S(-1) : S(1));
  return h;
}

// Chain boundary b : C_{n+1} -> C_n of the extended structure.
template <class S>
SpMat<S> chain_boundary(const EntwiningStructure<S>& s, int n,
                        long long max_dim = Limits{}.max_dim) {
  SpMat<S> b{int(chain_dim(s, n, max_dim)), int(chain_dim(s, n + 1, max_dim))};
  for (int i = 0; i <= n + 1; ++i)
    b = add_scaled(b, S(1), chain_face(s, n, i, max_dim),
                   i % 2 ? S(-1) : S(1));
  return b;
}

template <class S>
Report morita_report(const EntwiningStructure<S>& s, int r, int max_n,
                     long long max_dim = Limits{}.max_dim) {
  Report rep;
  if (r < 1) throw EntwineError("morita_report: r must be positive");
  if (!s.A.unital) throw EntwineError("morita_report: the algebra must be unital");
  EntwiningStructure<S> ext = matrix_extend(s, r);
  {
    Report v = validate(ext);
    rep.check("extended structure valid", v.ok(),
              v.ok() ? "" : v.items[0].witness);
    if (!v.ok()) return rep;
  }

  // (5.10)-style simplicial relations between faces and homotopy pieces
  {
    bool ok = true;
    std::string wit;
    for (int n = 0; n <= max_n && ok; ++n) {
      std::vector<SpMat<S>> h_n, h_dn;
      for (int i = 0; i <= n; ++i)
        h_n.push_back(homotopy_h(s, r, n, i, max_dim));
      if (n >= 1)
        for (int i = 0; i <= n - 1; ++i)
          h_dn.push_back(homotopy_h(s, r, n - 1, i, max_dim));
      std::vector<SpMat<S>> d_up = face_maps(ext, n, max_dim);  // C_{n+1}->C_n
      std::vector<SpMat<S>> d_dn;
      if (n >= 1) d_dn = face_maps(ext, n - 1, max_dim);  // C_n -> C_{n-1}
      for (int j = 0; j <= n && ok; ++j)
        for (int i = 0; i <= n + 1 && ok; ++i) {
          SpMat<S> lhs = matmul(d_up[i], h_n[j]);
          if (i < j) {
            if (!mat_equal(lhs, matmul(h_dn[j - 1], d_dn[i]))) {
              ok = false;
              wit = "(n=" + std::to_string(n) + ",i=" + std::to_string(i) +
                    ",j=" + std::to_string(j) + ")";
            }
          } else if (i == j && i > 0) {
            if (!mat_equal(lhs, matmul(d_up[i], h_n[i - 1]))) {
              ok = false;
              wit = "(n=" + std::to_string(n) + ",i=j=" + std::to_string(i) + ")";
            }
          } else if (i > j + 1) {
            if (!mat_equal(lhs, matmul(h_dn[j], d_dn[i - 1]))) {
              ok = false;
              wit = "(n=" + std::to_string(n) + ",i=" + std::to_string(i) +
                    ",j=" + std::to_string(j) + ")";
            }
          }
        }
      if (!ok) break;
      if (!mat_equal(matmul(d_up[0], h_n[0]),
                     sparse_identity<S>(h_n[0].cols()))) {
        ok = false;
        wit = "(n=" + std::to_string(n) + ", d_0 h_0 != id)";
      }
      SpMat<S> inc_tr = matmul(inclusion_chain(s, r, 0, n, max_dim),
                               trace_chain(s, r, n, max_dim));
      if (ok && !mat_equal(matmul(d_up[n + 1], h_n[n]), inc_tr)) {
        ok = false;
        wit = "(n=" + std::to_string(n) + ", last face)";
      }
    }
    rep.check("homotopy simplicial relations", ok, wit);
    if (!ok) return rep;
  }

  // b h + h b = id - inc tr on chains
  {
    bool ok = true;
    std::string wit;
    for (int n = 0; n <= max_n && ok; ++n) {
      SpMat<S> lhs = matmul(chain_boundary(ext, n, max_dim),
                            homotopy_total(s, r, n, max_dim));
      if (n >= 1)
        lhs = add_scaled(lhs, S(1),
                         matmul(homotopy_total(s, r, n - 1, max_dim),
                                chain_boundary(ext, n - 1, max_dim)),
                         S(1));
      SpMat<S> rhs = add_scaled(
          sparse_identity<S>(lhs.cols()), S(1),
          matmul(inclusion_chain(s, r, 0, n, max_dim),
                 trace_chain(s, r, n, max_dim)),
          S(-1));
      if (!mat_equal(lhs, rhs)) {
        ok = false;
        wit = "(n=" + std::to_string(n) + ")";
      }
    }
    rep.check("chain homotopy identity", ok, wit);
  }

  // dual statement on cochains, and the dual homotopy restricts to the
  // invariant subcomplexes
  {
    bool ok = true;
    std::string wit;
    for (int n = 0; n <= max_n && ok; ++n) {
      SpMat<S> hT = transpose_of(homotopy_total(s, r, n, max_dim));
      SpMat<S> lhs = matmul(hT, hochschild_delta(ext, n, max_dim));
      if (n >= 1)
        lhs = add_scaled(
            lhs, S(1),
            matmul(hochschild_delta(ext, n - 1, max_dim),
                   transpose_of(homotopy_total(s, r, n - 1, max_dim))),
            S(1));
      SpMat<S> rhs = add_scaled(
          sparse_identity<S>(lhs.cols()), S(1),
          transpose_of(matmul(inclusion_chain(s, r, 0, n, max_dim),
                              trace_chain(s, r, n, max_dim))),
          S(-1));
      if (!mat_equal(lhs, rhs)) {
        ok = false;
        wit = "(n=" + std::to_string(n) + ", cochain identity)";
      }
      if (!ok) break;
      try {
        Subspace<S> inv_lo = invariant_basis(ext, n, max_dim);
        Subspace<S> inv_hi = invariant_basis(ext, n + 1, max_dim);
        restrict_map(hT, inv_hi, inv_lo, "dual homotopy");
      } catch (const EntwineError&) {
        ok = false;
        wit = "(n=" + std::to_string(n) + ", invariants not preserved)";
      }
    }
    rep.check("cochain homotopy identity", ok, wit);
  }

  // equality of cohomology in every theory
  {
    bool ok = true;
    std::string wit;
    for (Theory th : {Theory::Hochschild, Theory::Cyclic, Theory::Invariant}) {
      std::string base, extd;
      for (int n = 0; n <= max_n; ++n) {
        int da = cohomology(s, th, n, max_dim).dim;
        int dm = cohomology(ext, th, n, max_dim).dim;
        base += (n ? "," : "") + std::to_string(da);
        extd += (n ? "," : "") + std::to_string(dm);
        if (da != dm) ok = false;
      }
      wit += theory_str(th) + " base [" + base + "] matrix [" + extd + "]; ";
    }
    rep.note("cohomology dimensions agree", ok, wit);
  }
  return rep;
}

}  // namespace entwine
