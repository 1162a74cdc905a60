#pragma once

// Cochain complexes attached to an entwining structure.  All operators are
// assembled on the chain side (faces, rotation, unit insertions) as sparse
// matrices and dualized by transposition; subcomplexes are cut out as exact
// kernels and maps are restricted by solving against the subspace bases, so
// a containment failure surfaces as a hard error instead of a wrong answer.

#include "entwine/linalg.hpp"
#include "entwine/report.hpp"
#include "entwine/structures.hpp"

#include <optional>
#include <string>
#include <vector>

namespace entwine {

struct Limits {
  int max_degree = 4;
  long long max_dim = 2'000'000;
};

enum class Theory { Hochschild, Cyclic, Invariant };

inline Theory theory_from_string(const std::string& s) {
  if (s == "hochschild") return Theory::Hochschild;
  if (s == "cyclic") return Theory::Cyclic;
  if (s == "invariant") return Theory::Invariant;
  throw EntwineError("unknown theory '" + s +
                     "' (expected hochschild, cyclic or invariant)");
}

inline std::string theory_str(Theory t) {
  switch (t) {
    case Theory::Hochschild: return "hochschild";
    case Theory::Cyclic: return "cyclic";
    default: return "invariant";
  }
}

// dim of C (x) A^{(x)(n+1)}
template <class S>
long long chain_dim(const EntwiningStructure<S>& s, int n,
                    long long max_dim = Limits{}.max_dim) {
  long long d = s.dimC();
  for (int i = 0; i <= n; ++i) {
    d *= s.dimA();
    if (d > max_dim)
      throw EntwineError("chain space in degree " + std::to_string(n) +
                         " exceeds the dimension guard (" +
                         std::to_string(max_dim) + ")");
  }
  return d;
}

// If len == dimC * dimA^{n+1} for some n >= 0, return n.
template <class S>
int infer_degree(const EntwiningStructure<S>& s, long long len) {
  long long d = s.dimC();
  for (int n = 0; n < 62; ++n) {
    d *= s.dimA();
    if (d == len) return n;
    if (d > len) break;
  }
  throw EntwineError("vector length " + std::to_string(len) +
                     " is not dim C * (dim A)^(n+1) for any degree n");
}

namespace detail {

inline void decode_tuple(long long idx, int dimA, int letters, int& c,
                         std::vector<int>& a) {
  a.assign(letters, 0);
  for (int i = letters - 1; i >= 0; --i) {
    a[i] = int(idx % dimA);
    idx /= dimA;
  }
  c = int(idx);
}

inline long long encode_tuple(int c, const std::vector<int>& a, int dimA) {
  long long idx = c;
  for (int j : a) idx = idx * dimA + j;
  return idx;
}

}  // namespace detail

// Chain face d_i : C_{n+1} -> C_n, 0 <= i <= n+1.  d_0 entwines c past a_1
// and multiplies the entwined letter onto the last slot from the right,
// (c; a_1,...,a_{n+2}) -> (c^psi; a_2,...,a_{n+1}, a_{n+2} a_{1 psi});
// d_i for i >= 1 merges slots i and i+1.
template <class S>
SpMat<S> chain_face(const EntwiningStructure<S>& s, int n, int i,
                    long long max_dim = Limits{}.max_dim) {
  if (i < 0 || i > n + 1) throw EntwineError("chain_face: index out of range");
  const int mA = s.dimA();
  long long src = chain_dim(s, n + 1, max_dim);
  long long tgt = chain_dim(s, n, max_dim);
  std::vector<Trip<S>> trips;
  std::vector<int> word, out;
  int c = 0;
  for (long long col = 0; col < src; ++col) {
    detail::decode_tuple(col, mA, n + 2, c, word);
    if (i == 0) {
      const DMat<S>& m = s.psi.at(c, word[0]);
      for (int p = 0; p < mA; ++p)
        for (int q = 0; q < s.dimC(); ++q) {
          if (is_zero(m(p, q))) continue;
          const DVec<S>& prod = s.A.mul_basis(word[n + 1], p);
          for (int r = 0; r < mA; ++r) {
            if (is_zero(prod(r))) continue;
            out.assign(word.begin() + 1, word.end() - 1);
            out.push_back(r);
            trips.emplace_back(int(detail::encode_tuple(q, out, mA)), int(col),
                               S(m(p, q) * prod(r)));
          }
        }
    } else {
      const DVec<S>& prod = s.A.mul_basis(word[i - 1], word[i]);
      for (int r = 0; r < mA; ++r) {
        if (is_zero(prod(r))) continue;
        out.clear();
        for (int u = 0; u < n + 2; ++u) {
          if (u == i - 1) out.push_back(r);
          else if (u != i) out.push_back(word[u]);
        }
        trips.emplace_back(int(detail::encode_tuple(c, out, mA)), int(col),
                           prod(r));
      }
    }
  }
  return sparse_from_triplets(int(tgt), int(src), trips);
}

// Unsigned chain rotation t : C_n -> C_n,
// (c; a_1,...,a_{n+1}) -> (c^psi; a_2,...,a_{n+1}, a_{1 psi}).
template <class S>
SpMat<S> chain_rotation(const EntwiningStructure<S>& s, int n,
                        long long max_dim = Limits{}.max_dim) {
  const int mA = s.dimA();
  long long dim = chain_dim(s, n, max_dim);
  std::vector<Trip<S>> trips;
  std::vector<int> word, out;
  int c = 0;
  for (long long col = 0; col < dim; ++col) {
    detail::decode_tuple(col, mA, n + 1, c, word);
    const DMat<S>& m = s.psi.at(c, word[0]);
    for (int p = 0; p < mA; ++p)
      for (int q = 0; q < s.dimC(); ++q) {
        if (is_zero(m(p, q))) continue;
        out.assign(word.begin() + 1, word.end());
        out.push_back(p);
        trips.emplace_back(int(detail::encode_tuple(q, out, mA)), int(col),
                           m(p, q));
      }
  }
  return sparse_from_triplets(int(dim), int(dim), trips);
}

// Chain degeneracy s_j : C_n -> C_{n+1}, inserting the unit after slot j
// (j = 0 inserts in front of a_1), 0 <= j <= n.
template <class S>
SpMat<S> chain_insertion(const EntwiningStructure<S>& s, int n, int j,
                         long long max_dim = Limits{}.max_dim) {
  if (!s.A.unital)
    throw EntwineError("degeneracies need a unital algebra");
  if (j < 0 || j > n) throw EntwineError("chain_insertion: index out of range");
  const int mA = s.dimA();
  long long src = chain_dim(s, n, max_dim);
  long long tgt = chain_dim(s, n + 1, max_dim);
  std::vector<Trip<S>> trips;
  std::vector<int> word, out;
  int c = 0;
  for (long long col = 0; col < src; ++col) {
    detail::decode_tuple(col, mA, n + 1, c, word);
    for (int u = 0; u < mA; ++u) {
      if (is_zero(s.A.unit(u))) continue;
      out.clear();
      for (int t = 0; t < j; ++t) out.push_back(word[t]);
      out.push_back(u);
      for (int t = j; t < n + 1; ++t) out.push_back(word[t]);
      trips.emplace_back(int(detail::encode_tuple(c, out, mA)), int(col),
                         s.A.unit(u));
    }
  }
  return sparse_from_triplets(int(tgt), int(src), trips);
}

// Hochschild coboundary delta^n : Hom(C_n, k) -> Hom(C_{n+1}, k), the
// transpose of the alternating sum of chain faces.
template <class S>
SpMat<S> hochschild_delta(const EntwiningStructure<S>& s, int n,
                          long long max_dim = Limits{}.max_dim) {
  long long tgt = chain_dim(s, n, max_dim);
  long long src = chain_dim(s, n + 1, max_dim);
  SpMat<S> b{int(tgt), int(src)};
  for (int i = 0; i <= n + 1; ++i)
    b = add_scaled(b, S(1), chain_face(s, n, i, max_dim),
                   i % 2 ? S(-1) : S(1));
  return transpose_of(b);
}

// Signed cyclic operator tau_n on cochains: (-1)^n times the transpose of
// the rotation.
template <class S>
SpMat<S> cyclic_tau(const EntwiningStructure<S>& s, int n,
                    long long max_dim = Limits{}.max_dim) {
  SpMat<S> t = transpose_of(chain_rotation(s, n, max_dim));
  return n % 2 ? scaled(t, S(-1)) : t;
}

// Unsigned full twist U_n = (t^T)^{n+1} on cochains; its fixed vectors form
// the invariant subcomplex.
template <class S>
SpMat<S> full_twist(const EntwiningStructure<S>& s, int n,
                    long long max_dim = Limits{}.max_dim) {
  SpMat<S> t = transpose_of(chain_rotation(s, n, max_dim));
  SpMat<S> u = sparse_identity<S>(t.rows());
  for (int i = 0; i <= n; ++i) u = matmul(t, u);
  return u;
}

template <class S>
struct CosimplicialLevel {
  std::vector<SpMat<S>> delta;  // delta_i : C^n -> C^{n+1}, 0 <= i <= n+1
  std::vector<SpMat<S>> sigma;  // sigma_j : C^{n+1} -> C^n, 0 <= j <= n
};

template <class S>
CosimplicialLevel<S> faces_and_degeneracies(const EntwiningStructure<S>& s,
                                            int n,
                                            long long max_dim = Limits{}.max_dim) {
  CosimplicialLevel<S> lvl;
  for (int i = 0; i <= n + 1; ++i)
    lvl.delta.push_back(transpose_of(chain_face(s, n, i, max_dim)));
  for (int j = 0; j <= n; ++j)
    lvl.sigma.push_back(transpose_of(chain_insertion(s, n, j, max_dim)));
  return lvl;
}

// --- subcomplexes ---------------------------------------------------------

template <class S>
struct Subspace {
  long long ambient = 0;
  SpMat<S> basis;  // columns are basis vectors in ambient coordinates
  int dim() const { return basis.cols(); }
};

template <class S>
Subspace<S> full_basis(const EntwiningStructure<S>& s, int n,
                       long long max_dim = Limits{}.max_dim) {
  Subspace<S> sub;
  sub.ambient = chain_dim(s, n, max_dim);
  sub.basis = sparse_identity<S>(int(sub.ambient));
  return sub;
}

// Fixed space of the unsigned full twist (the invariant cochains).
template <class S>
Subspace<S> invariant_basis(const EntwiningStructure<S>& s, int n,
                            long long max_dim = Limits{}.max_dim) {
  Subspace<S> sub;
  sub.ambient = chain_dim(s, n, max_dim);
  SpMat<S> m = add_scaled(full_twist(s, n, max_dim), S(1),
                          sparse_identity<S>(int(sub.ambient)), S(-1));
  sub.basis = kernel_basis(m);
  return sub;
}

// Fixed space of the signed cyclic operator tau_n.
template <class S>
Subspace<S> cyclic_basis(const EntwiningStructure<S>& s, int n,
                         long long max_dim = Limits{}.max_dim) {
  Subspace<S> sub;
  sub.ambient = chain_dim(s, n, max_dim);
  SpMat<S> m = add_scaled(cyclic_tau(s, n, max_dim), S(1),
                          sparse_identity<S>(int(sub.ambient)), S(-1));
  sub.basis = kernel_basis(m);
  return sub;
}

template <class S>
Subspace<S> theory_basis(const EntwiningStructure<S>& s, Theory th, int n,
                         long long max_dim = Limits{}.max_dim) {
  switch (th) {
    case Theory::Hochschild: return full_basis(s, n, max_dim);
    case Theory::Cyclic: return cyclic_basis(s, n, max_dim);
    default: return invariant_basis(s, n, max_dim);
  }
}

// Restrict an ambient map to subspace coordinates; throws if the image of
// the source basis leaves the target subspace.
template <class S>
SpMat<S> restrict_map(const SpMat<S>& m, const Subspace<S>& src,
                      const Subspace<S>& tgt, const char* what = "operator") {
  SpMat<S> img = matmul(m, src.basis);
  SolveResult<S> sol = solve_many(tgt.basis, img);
  if (!sol.all_ok())
    throw EntwineError(std::string(what) +
                       " does not preserve the subcomplex");
  return sol.x;
}

// --- cohomology -----------------------------------------------------------

template <class S>
struct CohomologyResult {
  Theory theory = Theory::Hochschild;
  int n = 0;
  long long ambient_dim = 0;
  int subspace_dim = 0;
  int cocycle_dim = 0;
  int coboundary_dim = 0;
  int dim = 0;
  Subspace<S> sub;            // the subcomplex in ambient coordinates
  SpMat<S> cocycle_basis;     // ambient coordinates, canonical
  SpMat<S> coboundary_basis;  // ambient coordinates, canonical
};

template <class S>
CohomologyResult<S> cohomology(const EntwiningStructure<S>& s, Theory th,
                               int n, long long max_dim = Limits{}.max_dim) {
  if (n < 0) throw EntwineError("cohomology: negative degree");
  CohomologyResult<S> res;
  res.theory = th;
  res.n = n;
  res.sub = theory_basis(s, th, n, max_dim);
  res.ambient_dim = res.sub.ambient;
  res.subspace_dim = res.sub.dim();
  Subspace<S> above = theory_basis(s, th, n + 1, max_dim);
  SpMat<S> dn = restrict_map(hochschild_delta(s, n, max_dim), res.sub, above,
                             "coboundary");
  SpMat<S> z = kernel_basis(dn);
  res.cocycle_dim = z.cols();
  res.cocycle_basis = matmul(res.sub.basis, z);
  if (n == 0) {
    res.coboundary_basis = SpMat<S>(int(res.ambient_dim), 0);
    res.coboundary_dim = 0;
  } else {
    Subspace<S> below = theory_basis(s, th, n - 1, max_dim);
    SpMat<S> dprev = restrict_map(hochschild_delta(s, n - 1, max_dim), below,
                                  res.sub, "coboundary");
    SpMat<S> b = image_basis(dprev);
    res.coboundary_dim = b.cols();
    res.coboundary_basis = matmul(res.sub.basis, b);
  }
  res.dim = res.cocycle_dim - res.coboundary_dim;
  return res;
}

// If g (an ambient cochain vector lying in the theory's subcomplex) is a
// coboundary there, return a preimage in ambient coordinates one degree
// down; std::nullopt if it is not a coboundary.  Throws if g does not lie
// in the subcomplex.
template <class S>
std::optional<DVec<S>> is_coboundary(const EntwiningStructure<S>& s, Theory th,
                                     const DVec<S>& g,
                                     long long max_dim = Limits{}.max_dim) {
  int n = infer_degree(s, g.size());
  if (n == 0) {
    if (dvec_equal(g, zero_vec<S>(int(g.size())))) return DVec<S>();
    return std::nullopt;
  }
  Subspace<S> here = theory_basis(s, th, n, max_dim);
  std::optional<DVec<S>> coords = solve_membership(here.basis, g);
  if (!coords)
    throw EntwineError("cochain does not lie in the " + theory_str(th) +
                       " subcomplex");
  Subspace<S> below = theory_basis(s, th, n - 1, max_dim);
  SpMat<S> dprev = restrict_map(hochschild_delta(s, n - 1, max_dim), below,
                                here, "coboundary");
  std::optional<DVec<S>> x = solve_membership(dprev, *coords);
  if (!x) return std::nullopt;
  DVec<S> pre = zero_vec<S>(int(below.ambient));
  for (int j = 0; j < below.basis.cols(); ++j) {
    if (is_zero((*x)(j))) continue;
    for (typename SpMat<S>::InnerIterator it(below.basis, j); it; ++it)
      pre(it.row()) += it.value() * (*x)(j);
  }
  return pre;
}

// --- cocyclic identity suite ---------------------------------------------

// Verifies the cosimplicial, cyclic and mixed identities on the invariant
// subcomplex in every degree where all operators involved stay within
// max_n, plus the containment statements that make the restrictions
// well defined.
template <class S>
Report cocyclic_check(const EntwiningStructure<S>& s, int max_n,
                      long long max_dim = Limits{}.max_dim) {
  Report rep;
  if (max_n < 1) throw EntwineError("cocyclic_check: max_n must be >= 1");
  std::vector<Subspace<S>> inv;
  for (int n = 0; n <= max_n; ++n)
    inv.push_back(invariant_basis(s, n, max_dim));

  // restricted operators, indexed by source degree
  std::vector<std::vector<SpMat<S>>> dlt(max_n), sig(max_n);
  std::vector<SpMat<S>> tau(max_n + 1);
  bool contained = true;
  for (int n = 0; n + 1 <= max_n; ++n) {
    CosimplicialLevel<S> lvl = faces_and_degeneracies(s, n, max_dim);
    for (int i = 0; i <= n + 1; ++i) {
      try {
        dlt[n].push_back(restrict_map(lvl.delta[i], inv[n], inv[n + 1]));
      } catch (const EntwineError&) {
        contained = false;
        rep.fail("containment", "delta_" + std::to_string(i) +
                                    " leaves the invariant subcomplex at degree " +
                                    std::to_string(n));
      }
    }
    for (int j = 0; j <= n; ++j) {
      try {
        sig[n].push_back(restrict_map(lvl.sigma[j], inv[n + 1], inv[n]));
      } catch (const EntwineError&) {
        contained = false;
        rep.fail("containment", "sigma_" + std::to_string(j) +
                                    " leaves the invariant subcomplex at degree " +
                                    std::to_string(n));
      }
    }
  }
  for (int n = 0; n <= max_n; ++n) {
    try {
      tau[n] = restrict_map(cyclic_tau(s, n, max_dim), inv[n], inv[n]);
    } catch (const EntwineError&) {
      contained = false;
      rep.fail("containment", "tau leaves the invariant subcomplex at degree " +
                                  std::to_string(n));
    }
  }
  if (!contained) return rep;
  rep.pass("containment");

  // cosimplicial: delta_j delta_i = delta_i delta_{j-1} for i < j
  {
    bool ok = true;
    std::string wit;
    for (int n = 0; n + 2 <= max_n && ok; ++n)
      for (int i = 0; i <= n + 1 && ok; ++i)
        for (int j = i + 1; j <= n + 2 && ok; ++j)
          if (!mat_equal(matmul(dlt[n + 1][j], dlt[n][i]),
                         matmul(dlt[n + 1][i], dlt[n][j - 1]))) {
            ok = false;
            wit = "(n=" + std::to_string(n) + ",i=" + std::to_string(i) +
                  ",j=" + std::to_string(j) + ")";
          }
    rep.check("face-face", ok, wit);
  }

  // sigma_j sigma_i = sigma_i sigma_{j+1} for i <= j
  {
    bool ok = true;
    std::string wit;
    for (int n = 0; n + 2 <= max_n && ok; ++n)
      for (int j = 0; j <= n && ok; ++j)
        for (int i = 0; i <= j && ok; ++i)
          if (!mat_equal(matmul(sig[n][j], sig[n + 1][i]),
                         matmul(sig[n][i], sig[n + 1][j + 1]))) {
            ok = false;
            wit = "(n=" + std::to_string(n) + ",i=" + std::to_string(i) +
                  ",j=" + std::to_string(j) + ")";
          }
    rep.check("degeneracy-degeneracy", ok, wit);
  }

  // mixed: sigma_j delta_i
  {
    bool ok = true;
    std::string wit;
    for (int n = 1; n <= max_n && ok; ++n) {
      // sigma^{(n-1)}_j : C^n -> C^{n-1} after delta^{(n-1)}_i? No: the
      // composable pair at degree n-1 is delta^{(n-1)}_i : C^{n-1} -> C^n
      // followed by sigma^{(n-1)}_j : C^n -> C^{n-1}.
      for (int i = 0; i <= n && ok; ++i)
        for (int j = 0; j <= n - 1 && ok; ++j) {
          SpMat<S> lhs = matmul(sig[n - 1][j], dlt[n - 1][i]);
          bool good;
          if (i == j || i == j + 1) {
            good = mat_equal(lhs, sparse_identity<S>(inv[n - 1].dim()));
          } else if (i < j) {
            if (n - 2 < 0) continue;
            good = mat_equal(lhs, matmul(dlt[n - 2][i], sig[n - 2][j - 1]));
          } else {
            if (n - 2 < 0) continue;
            good = mat_equal(lhs, matmul(dlt[n - 2][i - 1], sig[n - 2][j]));
          }
          if (!good) {
            ok = false;
            wit = "(n=" + std::to_string(n - 1) + ",i=" + std::to_string(i) +
                  ",j=" + std::to_string(j) + ")";
          }
        }
    }
    rep.check("face-degeneracy", ok, wit);
  }

  // tau^{n+1} = id on the invariant subcomplex
  {
    bool ok = true;
    std::string wit;
    for (int n = 0; n <= max_n && ok; ++n) {
      SpMat<S> p = sparse_identity<S>(inv[n].dim());
      for (int k = 0; k <= n; ++k) p = matmul(tau[n], p);
      if (!mat_equal(p, sparse_identity<S>(inv[n].dim()))) {
        ok = false;
        wit = "(n=" + std::to_string(n) + ")";
      }
    }
    rep.check("tau order", ok, wit);
  }

  // delta_i tau = -tau delta_{i-1} (1 <= i <= n+1) and
  // delta_0 = (-1)^{n+1} tau delta_{n+1} at source degree n
  {
    bool ok = true;
    std::string wit;
    for (int n = 0; n + 1 <= max_n && ok; ++n) {
      for (int i = 1; i <= n + 1 && ok; ++i)
        if (!mat_equal(matmul(dlt[n][i], tau[n]),
                       scaled(matmul(tau[n + 1], dlt[n][i - 1]), S(-1)))) {
          ok = false;
          wit = "(n=" + std::to_string(n) + ",i=" + std::to_string(i) + ")";
        }
      if (!ok) break;
      SpMat<S> rhs = matmul(tau[n + 1], dlt[n][n + 1]);
      if ((n + 1) % 2) rhs = scaled(rhs, S(-1));
      if (!mat_equal(dlt[n][0], rhs)) {
        ok = false;
        wit = "(n=" + std::to_string(n) + ",extra)";
      }
    }
    rep.check("face-tau", ok, wit);
  }

  // sigma_i tau = -tau sigma_{i-1} (1 <= i <= n) and
  // sigma_0 tau^2 = (-1)^n tau sigma_n at source degree n+1
  {
    bool ok = true;
    std::string wit;
    for (int n = 0; n + 1 <= max_n && ok; ++n) {
      for (int i = 1; i <= n && ok; ++i)
        if (!mat_equal(matmul(sig[n][i], tau[n + 1]),
                       scaled(matmul(tau[n], sig[n][i - 1]), S(-1)))) {
          ok = false;
          wit = "(n=" + std::to_string(n) + ",i=" + std::to_string(i) + ")";
        }
      if (!ok) break;
      SpMat<S> lhs = matmul(sig[n][0], matmul(tau[n + 1], tau[n + 1]));
      SpMat<S> rhs = matmul(tau[n], sig[n][n]);
      if (n % 2) rhs = scaled(rhs, S(-1));
      if (!mat_equal(lhs, rhs)) {
        ok = false;
        wit = "(n=" + std::to_string(n) + ",extra)";
      }
    }
    rep.check("degeneracy-tau", ok, wit);
  }

  // the coboundary is the alternating face sum, restricted
  {
    bool ok = true;
    std::string wit;
    for (int n = 0; n + 1 <= max_n && ok; ++n) {
      SpMat<S> d = restrict_map(hochschild_delta(s, n, max_dim), inv[n],
                                inv[n + 1]);
      SpMat<S> alt(inv[n + 1].dim(), inv[n].dim());
      for (int i = 0; i <= n + 1; ++i)
        alt = add_scaled(alt, S(1), dlt[n][i], i % 2 ? S(-1) : S(1));
      if (!mat_equal(d, alt)) {
        ok = false;
        wit = "(n=" + std::to_string(n) + ")";
      }
    }
    rep.check("coboundary alternating sum", ok, wit);
  }

  return rep;
}

}  // namespace entwine
