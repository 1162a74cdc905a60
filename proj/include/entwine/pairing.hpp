#pragma once

// Cup-style pairing of cyclic cocycles over two entwining structures.  The
// graded tensor product of the two universal calculi is assembled as one
// DgEntwining over the tensor entwining structure, with the Koszul sign in
// the product; the product trace of two entwined traces then evaluates
// through the generic character machinery.

#include "entwine/complexes.hpp"
#include "entwine/omega.hpp"
#include "entwine/structures.hpp"

#include <string>
#include <vector>

namespace entwine {

template <class S>
struct TensorDga {
  DgEntwining<S> dg;     // over tensor_structure(s1, s2)
  DgEntwining<S> left;   // Omega(A)
  DgEntwining<S> right;  // Omega(A')
  // offset[n][i]: start of the component Omega^i (x) Omega'^{n-i} in R^n
  std::vector<std::vector<long long>> offset;

  long long comp_index(int n, int i, long long x, long long y) const {
    return offset[n][i] + x * right.dim[n - i] + y;
  }
};

template <class S>
TensorDga<S> tensor_dga(const EntwiningStructure<S>& s1,
                        const EntwiningStructure<S>& s2, int N,
                        long long max_dim = Limits{}.max_dim) {
  TensorDga<S> td;
  td.left = omega_build(s1, N, max_dim);
  td.right = omega_build(s2, N, max_dim);
  DgEntwining<S>& dg = td.dg;
  dg.base = tensor_structure(s1, s2, int(max_dim));
  dg.N = N;
  const int mC1 = s1.dimC(), mC2 = s2.dimC();
  const int mC = mC1 * mC2;
  for (int n = 0; n <= N; ++n) {
    td.offset.emplace_back();
    long long d = 0;
    for (int i = 0; i <= n; ++i) {
      td.offset[n].push_back(d);
      d += td.left.dim[i] * td.right.dim[n - i];
    }
    if (d * mC > max_dim)
      throw EntwineError("tensor_dga: degree " + std::to_string(n) +
                         " exceeds the dimension guard");
    dg.dim.push_back(d);
  }

  // multiplication with the Koszul sign: (x (x) x')(y (x) y') =
  // (-1)^{|x'| |y|} xy (x) x'y'
  for (int m1 = 0; m1 <= N; ++m1)
    for (int m2 = 0; m1 + m2 <= N; ++m2) {
      std::vector<Trip<S>> trips;
      for (int i1 = 0; i1 <= m1; ++i1) {
        int j1 = m1 - i1;
        for (int i2 = 0; i2 <= m2; ++i2) {
          int j2 = m2 - i2;
          S sign = (j1 * i2) % 2 ? S(-1) : S(1);
          const SpMat<S>& ml = td.left.mul_table(i1, i2);
          const SpMat<S>& mr = td.right.mul_table(j1, j2);
          for (long long x = 0; x < td.left.dim[i1]; ++x)
            for (long long y = 0; y < td.right.dim[j1]; ++y)
              for (long long x2 = 0; x2 < td.left.dim[i2]; ++x2)
                for (long long y2 = 0; y2 < td.right.dim[j2]; ++y2) {
                  long long col =
                      td.comp_index(m1, i1, x, y) * dg.dim[m2] +
                      td.comp_index(m2, i2, x2, y2);
                  for (typename SpMat<S>::InnerIterator itl(
                           ml, int(x * td.left.dim[i2] + x2));
                       itl; ++itl)
                    for (typename SpMat<S>::InnerIterator itr(
                             mr, int(y * td.right.dim[j2] + y2));
                         itr; ++itr) {
                      long long row = td.comp_index(m1 + m2, i1 + i2,
                                                    itl.row(), itr.row());
                      S v = sign * itl.value() * itr.value();
                      if (!is_zero(v))
                        trips.emplace_back(int(row), int(col), v);
                    }
                }
        }
      }
      dg.mul[{m1, m2}] = sparse_from_triplets(
          int(dg.dim[m1 + m2]), int(dg.dim[m1] * dg.dim[m2]), trips);
    }

  // differential: D (x (x) x') = Dx (x) x' + (-1)^{|x|} x (x) D'x'
  for (int n = 0; n < N; ++n) {
    std::vector<Trip<S>> trips;
    for (int i = 0; i <= n; ++i) {
      int j = n - i;
      S sign = i % 2 ? S(-1) : S(1);
      for (long long x = 0; x < td.left.dim[i]; ++x)
        for (long long y = 0; y < td.right.dim[j]; ++y) {
          long long col = td.comp_index(n, i, x, y);
          for (typename SpMat<S>::InnerIterator it(td.left.diff(i), int(x));
               it; ++it)
            trips.emplace_back(
                int(td.comp_index(n + 1, i + 1, it.row(), y)), int(col),
                it.value());
          for (typename SpMat<S>::InnerIterator it(td.right.diff(j), int(y));
               it; ++it) {
            S v = sign * it.value();
            if (!is_zero(v))
              trips.emplace_back(int(td.comp_index(n + 1, i, x, it.row())),
                                 int(col), v);
          }
        }
    }
    dg.D.push_back(
        sparse_from_triplets(int(dg.dim[n + 1]), int(dg.dim[n]), trips));
  }

  // componentwise entwining, no sign
  for (int n = 0; n <= N; ++n) {
    std::vector<Trip<S>> trips;
    for (int c1 = 0; c1 < mC1; ++c1)
      for (int c2 = 0; c2 < mC2; ++c2) {
        int c = c1 * mC2 + c2;
        for (int i = 0; i <= n; ++i) {
          int j = n - i;
          for (long long x = 0; x < td.left.dim[i]; ++x)
            for (long long y = 0; y < td.right.dim[j]; ++y) {
              long long col =
                  (long long)c * dg.dim[n] + td.comp_index(n, i, x, y);
              for (typename SpMat<S>::InnerIterator itl(
                       td.left.psi_hat(i),
                       int((long long)c1 * td.left.dim[i] + x));
                   itl; ++itl) {
                int xr = itl.row() / mC1, q1 = itl.row() % mC1;
                for (typename SpMat<S>::InnerIterator itr(
                         td.right.psi_hat(j),
                         int((long long)c2 * td.right.dim[j] + y));
                     itr; ++itr) {
                  int yr = itr.row() / mC2, q2 = itr.row() % mC2;
                  long long row =
                      td.comp_index(n, i, xr, yr) * mC + (q1 * mC2 + q2);
                  S v = itl.value() * itr.value();
                  if (!is_zero(v)) trips.emplace_back(int(row), int(col), v);
                }
              }
            }
        }
      }
    dg.Psi.push_back(sparse_from_triplets(int(dg.dim[n] * mC),
                                          int(mC * dg.dim[n]), trips));
  }

  // rho: A (x) A' = Omega^0 (x) Omega'^0 componentwise
  dg.rho = sparse_identity<S>(int(dg.dim[0]));
  return td;
}

// Product trace: concentrated on the component Omega^m (x) Omega'^n, where
// it evaluates T on the left leg against the first coalgebra factor and T'
// on the right leg against the second.
template <class S>
EntwinedTrace<S> tensor_trace(const TensorDga<S>& td,
                              const EntwinedTrace<S>& T,
                              const EntwinedTrace<S>& T2) {
  const int m = T.n, n = T2.n;
  if (m + n > td.dg.N)
    throw EntwineError("tensor_trace: total degree past the truncation");
  const int mC1 = td.left.base.dimC(), mC2 = td.right.base.dimC();
  EntwinedTrace<S> out;
  out.n = m + n;
  out.v = zero_vec<S>(int((long long)mC1 * mC2 * td.dg.dim[m + n]));
  for (int c1 = 0; c1 < mC1; ++c1)
    for (int c2 = 0; c2 < mC2; ++c2) {
      long long cbase =
          ((long long)c1 * mC2 + c2) * td.dg.dim[m + n];
      for (long long x = 0; x < td.left.dim[m]; ++x) {
        const S& tv = T.v(int((long long)c1 * td.left.dim[m] + x));
        if (is_zero(tv)) continue;
        for (long long y = 0; y < td.right.dim[n]; ++y) {
          const S& tv2 = T2.v(int((long long)c2 * td.right.dim[n] + y));
          if (is_zero(tv2)) continue;
          out.v(int(cbase + td.comp_index(m + n, m, x, y))) = tv * tv2;
        }
      }
    }
  return out;
}

namespace detail {

template <class S>
bool is_cyclic_cocycle(const EntwiningStructure<S>& s, const DVec<S>& g, int n,
                       long long max_dim) {
  DVec<S> tg = zero_vec<S>(int(g.size()));
  SpMat<S> tau = cyclic_tau(s, n, max_dim);
  for (int j = 0; j < tau.cols(); ++j) {
    if (is_zero(g(j))) continue;
    for (typename SpMat<S>::InnerIterator it(tau, j); it; ++it)
      tg(it.row()) += it.value() * g(j);
  }
  if (!dvec_equal(tg, g)) return false;
  SpMat<S> d = hochschild_delta(s, n, max_dim);
  DVec<S> dgv = zero_vec<S>(d.rows());
  for (int j = 0; j < d.cols(); ++j) {
    if (is_zero(g(j))) continue;
    for (typename SpMat<S>::InnerIterator it(d, j); it; ++it)
      dgv(it.row()) += it.value() * g(j);
  }
  return dvec_equal(dgv, zero_vec<S>(d.rows()));
}

}  // namespace detail

// The paired cochain over tensor_structure(s, s2): the character of the
// product of the two attached traces.  Both inputs must be cyclic cocycles,
// of the stated degrees.
template <class S>
DVec<S> pair_cocycles(const EntwiningStructure<S>& s, const DVec<S>& g, int m,
                      const EntwiningStructure<S>& s2, const DVec<S>& g2, int n,
                      long long max_dim = Limits{}.max_dim) {
  if (!detail::is_cyclic_cocycle(s, g, m, max_dim))
    throw EntwineError("pair_cocycles: left input is not a cyclic cocycle");
  if (!detail::is_cyclic_cocycle(s2, g2, n, max_dim))
    throw EntwineError("pair_cocycles: right input is not a cyclic cocycle");
  TensorDga<S> td = tensor_dga(s, s2, m + n < 1 ? 1 : m + n, max_dim);
  EntwinedTrace<S> T = trace_from_cocycle(s, g, m);
  EntwinedTrace<S> T2 = trace_from_cocycle(s2, g2, n);
  EntwinedTrace<S> prod = tensor_trace(td, T, T2);
  return character(td.dg, prod, m + n);
}

template <class S>
DVec<S> pair_cocycles(const EntwiningStructure<S>& s, const DVec<S>& g,
                      const EntwiningStructure<S>& s2, const DVec<S>& g2,
                      long long max_dim = Limits{}.max_dim) {
  return pair_cocycles(s, g, infer_degree(s, g.size()), s2, g2,
                       infer_degree(s2, g2.size()), max_dim);
}

// Full certification of one pairing: context axioms (with the deeper
// truncation needed for the Leibniz checks), trace axioms for the product
// trace, and the paired cochain being a cyclic cocycle again.
template <class S>
Report pairing_report(const EntwiningStructure<S>& s, const DVec<S>& g, int m,
                      const EntwiningStructure<S>& s2, const DVec<S>& g2, int n,
                      long long max_dim = Limits{}.max_dim) {
  Report rep;
  rep.check("left input is a cyclic cocycle",
            detail::is_cyclic_cocycle(s, g, m, max_dim), "");
  rep.check("right input is a cyclic cocycle",
            detail::is_cyclic_cocycle(s2, g2, n, max_dim), "");
  if (!rep.ok()) return rep;
  TensorDga<S> td = tensor_dga(s, s2, m + n + 1, max_dim);
  {
    Report v = validate_dg_entwining(td.dg);
    rep.check("tensor context valid", v.ok(),
              v.ok() ? "" : v.items.back().name);
  }
  EntwinedTrace<S> prod = tensor_trace(td, trace_from_cocycle(s, g, m),
                                       trace_from_cocycle(s2, g2, n));
  {
    Report v = validate_trace(td.dg, prod);
    rep.check("product trace valid", v.ok(), v.ok() ? "" : v.items.back().name);
  }
  DVec<S> paired = character(td.dg, prod, m + n);
  rep.check("paired cochain is a cyclic cocycle",
            detail::is_cyclic_cocycle(td.dg.base, paired, m + n, max_dim), "");
  return rep;
}

template <class S>
Report pairing_report(const EntwiningStructure<S>& s, const DVec<S>& g,
                      const EntwiningStructure<S>& s2, const DVec<S>& g2,
                      long long max_dim = Limits{}.max_dim) {
  return pairing_report(s, g, infer_degree(s, g.size()), s2, g2,
                        infer_degree(s2, g2.size()), max_dim);
}

// Well-definedness on cohomology classes in the left slot: pairing a cyclic
// coboundary with any cyclic cocycle lands in the cyclic coboundaries.
template <class S>
Report pairing_class_check(const EntwiningStructure<S>& s,
                           const EntwiningStructure<S>& s2, int m, int n,
                           long long max_dim = Limits{}.max_dim) {
  Report rep;
  if (m < 1) throw EntwineError("pairing_class_check: m must be >= 1");
  CohomologyResult<S> left = cohomology(s, Theory::Cyclic, m, max_dim);
  CohomologyResult<S> right = cohomology(s2, Theory::Cyclic, n, max_dim);
  EntwiningStructure<S> tp = tensor_structure(s, s2, int(max_dim));
  bool ok = true;
  std::string wit;
  int tested = 0;
  for (int i = 0; i < left.coboundary_basis.cols() && ok; ++i)
    for (int j = 0; j < right.cocycle_basis.cols() && ok; ++j) {
      DVec<S> b = sparse_col(left.coboundary_basis, i);
      DVec<S> z = sparse_col(right.cocycle_basis, j);
      DVec<S> paired = pair_cocycles(s, b, m, s2, z, n, max_dim);
      if (!is_coboundary(tp, Theory::Cyclic, paired, max_dim)) {
        ok = false;
        wit = "(b=" + std::to_string(i) + ",z=" + std::to_string(j) + ")";
      }
      ++tested;
    }
  rep.note("coboundary pairings are coboundaries", ok,
           ok ? std::to_string(tested) + " pairings tested" : wit);
  return rep;
}

}  // namespace entwine
