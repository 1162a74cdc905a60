#pragma once

// Independent dense oracle for the cohomology tests.  Everything here is
// deliberately written against the defining formulas, with dense
// vector-of-vector matrices and its own Gaussian elimination; it shares only
// the scalar types and the structure-constant containers with the library,
// none of the sparse operator machinery.  Written and frozen before the
// sparse engine.

#include "entwine/structures.hpp"

#include <map>
#include <vector>

namespace oracle {

using entwine::DVec;
using entwine::EntwiningStructure;
using entwine::FiniteAlgebra;
using entwine::is_zero;

template <class S>
using Dense = std::vector<std::vector<S>>;  // row major

template <class S>
Dense<S> dense_zero(int rows, int cols) {
  return Dense<S>(rows, std::vector<S>(cols, S(0)));
}

// Plain dense RREF; returns pivot columns, matrix reduced in place.
template <class S>
std::vector<int> dense_rref(Dense<S>& m) {
  std::vector<int> pivots;
  int rows = int(m.size());
  int cols = rows ? int(m[0].size()) : 0;
  int r = 0;
  for (int c = 0; c < cols && r < rows; ++c) {
    int sel = -1;
    for (int i = r; i < rows; ++i)
      if (!is_zero(m[i][c])) {
        sel = i;
        break;
      }
    if (sel == -1) continue;
    std::swap(m[r], m[sel]);
    S lead = m[r][c];
    for (int j = 0; j < cols; ++j) m[r][j] = m[r][j] / lead;
    for (int i = 0; i < rows; ++i) {
      if (i == r || is_zero(m[i][c])) continue;
      S f = m[i][c];
      for (int j = 0; j < cols; ++j) m[i][j] = m[i][j] - f * m[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

template <class S>
int dense_rank(Dense<S> m) {
  return int(dense_rref(m).size());
}

template <class S>
Dense<S> dense_kernel(Dense<S> m) {
  int cols = m.empty() ? 0 : int(m[0].size());
  std::vector<int> pivots = dense_rref(m);
  std::vector<bool> is_pivot(cols, false);
  for (int p : pivots) is_pivot[p] = true;
  Dense<S> basis;  // each row of `basis` is one kernel vector
  for (int f = 0; f < cols; ++f) {
    if (is_pivot[f]) continue;
    std::vector<S> v(cols, S(0));
    v[f] = S(1);
    for (size_t r = 0; r < pivots.size(); ++r) v[pivots[r]] = S(0) - m[r][f];
    basis.push_back(v);
  }
  return basis;
}

template <class S>
Dense<S> dense_mul(const Dense<S>& a, const Dense<S>& b) {
  int n = int(a.size()), k = int(b.size()), mcols = k ? int(b[0].size()) : 0;
  Dense<S> c = dense_zero<S>(n, mcols);
  for (int i = 0; i < n; ++i)
    for (int l = 0; l < k; ++l) {
      if (is_zero(a[i][l])) continue;
      for (int j = 0; j < mcols; ++j) c[i][j] += a[i][l] * b[l][j];
    }
  return c;
}

// Solve A X = B densely; requires every column of B to be in the span.
template <class S>
Dense<S> dense_solve(const Dense<S>& a, const Dense<S>& b, bool& ok) {
  int rows = int(a.size());
  int acols = rows ? int(a[0].size()) : 0;
  int bcols = b.empty() ? 0 : int(b[0].size());
  Dense<S> aug = dense_zero<S>(rows, acols + bcols);
  for (int i = 0; i < rows; ++i) {
    for (int j = 0; j < acols; ++j) aug[i][j] = a[i][j];
    for (int j = 0; j < bcols; ++j) aug[i][acols + j] = b[i][j];
  }
  // eliminate with pivots restricted to the A block
  std::vector<int> pivots;
  int r = 0;
  for (int c = 0; c < acols && r < rows; ++c) {
    int sel = -1;
    for (int i = r; i < rows; ++i)
      if (!is_zero(aug[i][c])) {
        sel = i;
        break;
      }
    if (sel == -1) continue;
    std::swap(aug[r], aug[sel]);
    S lead = aug[r][c];
    for (int j = 0; j < acols + bcols; ++j) aug[r][j] = aug[r][j] / lead;
    for (int i = 0; i < rows; ++i) {
      if (i == r || is_zero(aug[i][c])) continue;
      S f = aug[i][c];
      for (int j = 0; j < acols + bcols; ++j)
        aug[i][j] = aug[i][j] - f * aug[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  ok = true;
  for (int i = r; i < rows; ++i)
    for (int j = 0; j < bcols; ++j)
      if (!is_zero(aug[i][acols + j])) ok = false;
  Dense<S> x = dense_zero<S>(acols, bcols);
  for (size_t rr = 0; rr < pivots.size(); ++rr)
    for (int j = 0; j < bcols; ++j) x[pivots[rr]][j] = aug[rr][acols + j];
  return x;
}

// --- tuple bookkeeping ----------------------------------------------------

struct Tuple {
  int c = 0;
  std::vector<int> a;
  bool operator<(const Tuple& o) const {
    if (c != o.c) return c < o.c;
    return a < o.a;
  }
  bool operator==(const Tuple& o) const { return c == o.c && a == o.a; }
};

inline long long tuple_count(int dimC, int dimA, int letters) {
  long long n = dimC;
  for (int i = 0; i < letters; ++i) n *= dimA;
  return n;
}

inline int tuple_index(const Tuple& t, int dimA) {
  long long idx = t.c;
  for (int j : t.a) idx = idx * dimA + j;
  return int(idx);
}

inline Tuple tuple_at(long long idx, int dimA, int letters) {
  Tuple t;
  t.a.assign(letters, 0);
  for (int i = letters - 1; i >= 0; --i) {
    t.a[i] = int(idx % dimA);
    idx /= dimA;
  }
  t.c = int(idx);
  return t;
}

template <class S>
using Expansion = std::map<Tuple, S>;

template <class S>
void add_term(Expansion<S>& e, const Tuple& t, const S& coeff) {
  if (is_zero(coeff)) return;
  e[t] += coeff;
}

// One unsigned rotation t: (c; a1,...,ak) -> psi expansion of
// (c^psi; a2,...,ak, a1_psi).
template <class S>
Expansion<S> rotate_once(const EntwiningStructure<S>& s, const Tuple& t,
                         const S& coeff) {
  Expansion<S> out;
  const auto& m = s.psi.at(t.c, t.a[0]);
  for (int p = 0; p < s.dimA(); ++p)
    for (int q = 0; q < s.dimC(); ++q) {
      if (is_zero(m(p, q))) continue;
      Tuple nt;
      nt.c = q;
      nt.a.assign(t.a.begin() + 1, t.a.end());
      nt.a.push_back(p);
      add_term(out, nt, S(coeff * m(p, q)));
    }
  return out;
}

template <class S>
Expansion<S> rotate_times(const EntwiningStructure<S>& s, const Tuple& start,
                          int times) {
  Expansion<S> cur;
  cur[start] = S(1);
  for (int it = 0; it < times; ++it) {
    Expansion<S> next;
    for (const auto& [t, co] : cur)
      for (const auto& [t2, co2] : rotate_once(s, t, co)) add_term(next, t2, co2);
    cur = next;
  }
  return cur;
}

// Matrix of the Hochschild coboundary on cochain coordinate vectors,
// evaluated straight from the defining formula.
template <class S>
Dense<S> delta_dense(const EntwiningStructure<S>& s, int n) {
  const int mA = s.dimA(), mC = s.dimC();
  long long src = tuple_count(mC, mA, n + 1);
  long long tgt = tuple_count(mC, mA, n + 2);
  Dense<S> d = dense_zero<S>(int(tgt), int(src));
  for (long long y = 0; y < tgt; ++y) {
    Tuple ty = tuple_at(y, mA, n + 2);
    // term i=0: g(c^psi, a2, ..., a_{n+1}, a_{n+2} a_{1 psi})
    const auto& m = s.psi.at(ty.c, ty.a[0]);
    for (int p = 0; p < mA; ++p)
      for (int q = 0; q < mC; ++q) {
        if (is_zero(m(p, q))) continue;
        const DVec<S>& prod = s.A.mul_basis(ty.a[n + 1], p);
        for (int r = 0; r < mA; ++r) {
          if (is_zero(prod(r))) continue;
          Tuple tx;
          tx.c = q;
          tx.a.assign(ty.a.begin() + 1, ty.a.end() - 1);
          tx.a.push_back(r);
          d[int(y)][tuple_index(tx, mA)] += m(p, q) * prod(r);
        }
      }
    // terms i=1..n+1: merge slots i, i+1 with sign (-1)^i
    for (int i = 1; i <= n + 1; ++i) {
      const DVec<S>& prod = s.A.mul_basis(ty.a[i - 1], ty.a[i]);
      for (int r = 0; r < mA; ++r) {
        if (is_zero(prod(r))) continue;
        Tuple tx;
        tx.c = ty.c;
        for (int u = 0; u < n + 2; ++u) {
          if (u == i - 1) tx.a.push_back(r);
          else if (u != i) tx.a.push_back(ty.a[u]);
        }
        S c = prod(r);
        if (i % 2) c = S(0) - c;
        d[int(y)][tuple_index(tx, mA)] += c;
      }
    }
  }
  return d;
}

// Signed cyclic operator tau_n on cochain coordinates.
template <class S>
Dense<S> tau_dense(const EntwiningStructure<S>& s, int n) {
  const int mA = s.dimA(), mC = s.dimC();
  long long dim = tuple_count(mC, mA, n + 1);
  Dense<S> t = dense_zero<S>(int(dim), int(dim));
  for (long long y = 0; y < dim; ++y) {
    Tuple ty = tuple_at(y, mA, n + 1);
    for (const auto& [tx, co] : rotate_once(s, ty, S(1))) {
      S c = co;
      if (n % 2) c = S(0) - c;
      t[int(y)][tuple_index(tx, mA)] += c;
    }
  }
  return t;
}

// Unsigned full twist U_n = (rotation)^{n+1} on cochain coordinates.
template <class S>
Dense<S> full_twist_dense(const EntwiningStructure<S>& s, int n) {
  const int mA = s.dimA(), mC = s.dimC();
  long long dim = tuple_count(mC, mA, n + 1);
  Dense<S> u = dense_zero<S>(int(dim), int(dim));
  for (long long y = 0; y < dim; ++y) {
    Tuple ty = tuple_at(y, mA, n + 1);
    for (const auto& [tx, co] : rotate_times(s, ty, n + 1))
      u[int(y)][tuple_index(tx, mA)] += co;
  }
  return u;
}

enum class Theory { Hochschild, Cyclic, Invariant };

// Basis (as rows) of the chosen subcomplex in degree n.
template <class S>
Dense<S> subspace_dense(const EntwiningStructure<S>& s, Theory th, int n) {
  long long dim = tuple_count(s.dimC(), s.dimA(), n + 1);
  if (th == Theory::Hochschild) {
    Dense<S> id = dense_zero<S>(int(dim), int(dim));
    for (int i = 0; i < dim; ++i) id[i][i] = S(1);
    return id;
  }
  Dense<S> op = th == Theory::Cyclic ? tau_dense(s, n) : full_twist_dense(s, n);
  for (int i = 0; i < int(dim); ++i) op[i][i] -= S(1);
  return dense_kernel(std::move(op));
}

// dim H^n of the chosen theory, fully dense.
template <class S>
int cohomology_dim_dense(const EntwiningStructure<S>& s, Theory th, int n) {
  // restricted coboundary at degree m: solve V_{m+1}^T X = delta_m V_m^T
  auto restricted = [&](int m) -> Dense<S> {
    Dense<S> vm = subspace_dense(s, th, m);
    Dense<S> vn = subspace_dense(s, th, m + 1);
    Dense<S> d = delta_dense(s, m);
    // transpose the row-bases into column form
    int amb_m = d.empty() ? 0 : int(d[0].size());
    int amb_n = int(d.size());
    Dense<S> vmt = dense_zero<S>(amb_m, int(vm.size()));
    for (size_t i = 0; i < vm.size(); ++i)
      for (int j = 0; j < amb_m; ++j) vmt[j][int(i)] = vm[i][j];
    Dense<S> vnt = dense_zero<S>(amb_n, int(vn.size()));
    for (size_t i = 0; i < vn.size(); ++i)
      for (int j = 0; j < amb_n; ++j) vnt[j][int(i)] = vn[i][j];
    Dense<S> rhs = dense_mul(d, vmt);
    bool ok = false;
    Dense<S> x = dense_solve(vnt, rhs, ok);
    if (!ok) throw entwine::EntwineError("oracle: delta does not preserve subcomplex");
    return x;
  };
  Dense<S> dn = restricted(n);
  int cols_n = dn.empty() ? int(subspace_dense(s, th, n).size()) : int(dn[0].size());
  int kern = cols_n - dense_rank(dn);
  int img = n == 0 ? 0 : dense_rank(restricted(n - 1));
  return kern - img;
}

// Classical Hochschild homology dims of (A, A) via the cyclic bar complex;
// by linear duality these equal dim HH^n(A, A^*), which is what the
// entwined complex computes for C = k and flip psi.
template <class S>
std::vector<int> classical_hh_dims(const FiniteAlgebra<S>& A, int max_n) {
  auto bmat = [&](int n) -> Dense<S> {
    // boundary X_n = A^{(x)n+1} -> X_{n-1}
    long long src = 1, tgt = 1;
    for (int i = 0; i <= n; ++i) src *= A.dim;
    for (int i = 0; i < n; ++i) tgt *= A.dim;
    Dense<S> b = dense_zero<S>(int(tgt), int(src));
    std::vector<int> word(n + 1, 0);
    for (long long x = 0; x < src; ++x) {
      long long rem = x;
      for (int i = n; i >= 0; --i) {
        word[i] = int(rem % A.dim);
        rem /= A.dim;
      }
      for (int i = 0; i <= n; ++i) {
        const DVec<S>& prod = i < n ? A.mul_basis(word[i], word[i + 1])
                                    : A.mul_basis(word[n], word[0]);
        for (int m = 0; m < A.dim; ++m) {
          if (is_zero(prod(m))) continue;
          std::vector<int> w2;
          if (i < n) {
            for (int u = 0; u <= n; ++u) {
              if (u == i) w2.push_back(m);
              else if (u != i + 1) w2.push_back(word[u]);
            }
          } else {
            w2.push_back(m);
            for (int u = 1; u < n; ++u) w2.push_back(word[u]);
          }
          long long yi = 0;
          for (int j : w2) yi = yi * A.dim + j;
          S c = prod(m);
          if (i % 2) c = S(0) - c;
          b[int(yi)][int(x)] += c;
        }
      }
    }
    return b;
  };
  std::vector<int> dims;
  for (int n = 0; n <= max_n; ++n) {
    long long dim_n = 1;
    for (int i = 0; i <= n; ++i) dim_n *= A.dim;
    int kern = n == 0 ? int(dim_n) : int(dim_n) - dense_rank(bmat(n));
    int img = dense_rank(bmat(n + 1));
    dims.push_back(kern - img);
  }
  return dims;
}

}  // namespace oracle
