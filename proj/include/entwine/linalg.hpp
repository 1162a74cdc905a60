#pragma once

// Exact sparse linear algebra on Eigen containers.
//
// Matrices are Eigen::SparseMatrix<S> in column-major order over the basis
// enumeration of the ambient space.  Products and sums are written as free
// functions with plain loops so that only exact scalar arithmetic is ever
// performed (no norms, no pivont-by-magnitude).  Rank, kernel and membership
// queries all reduce to one deterministic sparse row echelon routine; since
// the reduced row echelon form is unique, every derived output (ranks, kernel
// bases, solutions) is reproducible bit for bit.

#include "entwine/scalar.hpp"

#include <Eigen/SparseCore>

#include <algorithm>
#include <map>
#include <optional>
#include <utility>
#include <vector>

namespace entwine {

template <class S>
using SpMat = Eigen::SparseMatrix<S, Eigen::ColMajor, int>;
template <class S>
using Trip = Eigen::Triplet<S>;
template <class S>
using DMat = Eigen::Matrix<S, Eigen::Dynamic, Eigen::Dynamic>;
template <class S>
using DVec = Eigen::Matrix<S, Eigen::Dynamic, 1>;

// Build from triplets: duplicates are summed, exact zeros dropped.
template <class S>
SpMat<S> sparse_from_triplets(int rows, int cols, std::vector<Trip<S>> ts) {
  std::map<std::pair<int, int>, S> acc;
  for (const auto& t : ts) {
    if (t.row() < 0 || t.row() >= rows || t.col() < 0 || t.col() >= cols)
      throw EntwineError("sparse_from_triplets: entry out of range");
    acc[{t.col(), t.row()}] += t.value();
  }
  SpMat<S> m(rows, cols);
  std::vector<Trip<S>> clean;
  clean.reserve(acc.size());
  for (const auto& [rc, v] : acc)
    if (!is_zero(v)) clean.emplace_back(rc.second, rc.first, v);
  m.setFromTriplets(clean.begin(), clean.end());
  m.makeCompressed();
  return m;
}

template <class S>
std::vector<Trip<S>> to_triplets(const SpMat<S>& m) {
  std::vector<Trip<S>> ts;
  for (int j = 0; j < m.outerSize(); ++j)
    for (typename SpMat<S>::InnerIterator it(m, j); it; ++it)
      if (!is_zero(it.value())) ts.emplace_back(it.row(), it.col(), it.value());
  return ts;
}

template <class S>
SpMat<S> sparse_identity(int n) {
  std::vector<Trip<S>> ts;
  ts.reserve(n);
  for (int i = 0; i < n; ++i) ts.emplace_back(i, i, S(1));
  return sparse_from_triplets<S>(n, n, std::move(ts));
}

template <class S>
SpMat<S> transpose_of(const SpMat<S>& m) {
  std::vector<Trip<S>> ts;
  for (int j = 0; j < m.outerSize(); ++j)
    for (typename SpMat<S>::InnerIterator it(m, j); it; ++it)
      ts.emplace_back(it.col(), it.row(), it.value());
  return sparse_from_triplets<S>(m.cols(), m.rows(), std::move(ts));
}

// C = A * B, exact, zeros pruned.
template <class S>
SpMat<S> matmul(const SpMat<S>& a, const SpMat<S>& b) {
  if (a.cols() != b.rows()) throw EntwineError("matmul: dimension mismatch");
  std::vector<Trip<S>> ts;
  for (int j = 0; j < b.outerSize(); ++j) {
    std::map<int, S> col;
    for (typename SpMat<S>::InnerIterator itb(b, j); itb; ++itb)
      for (typename SpMat<S>::InnerIterator ita(a, itb.row()); ita; ++ita)
        col[ita.row()] += ita.value() * itb.value();
    for (const auto& [r, v] : col)
      if (!is_zero(v)) ts.emplace_back(r, j, v);
  }
  return sparse_from_triplets<S>(a.rows(), b.cols(), std::move(ts));
}

template <class S>
SpMat<S> add_scaled(const SpMat<S>& a, const S& ca, const SpMat<S>& b,
                    const S& cb) {
  if (a.rows() != b.rows() || a.cols() != b.cols())
    throw EntwineError("add_scaled: dimension mismatch");
  std::vector<Trip<S>> ts;
  for (int j = 0; j < a.outerSize(); ++j)
    for (typename SpMat<S>::InnerIterator it(a, j); it; ++it)
      ts.emplace_back(it.row(), it.col(), ca * it.value());
  for (int j = 0; j < b.outerSize(); ++j)
    for (typename SpMat<S>::InnerIterator it(b, j); it; ++it)
      ts.emplace_back(it.row(), it.col(), cb * it.value());
  return sparse_from_triplets<S>(a.rows(), a.cols(), std::move(ts));
}

template <class S>
SpMat<S> scaled(const SpMat<S>& a, const S& c) {
  std::vector<Trip<S>> ts;
  for (int j = 0; j < a.outerSize(); ++j)
    for (typename SpMat<S>::InnerIterator it(a, j); it; ++it)
      ts.emplace_back(it.row(), it.col(), c * it.value());
  return sparse_from_triplets<S>(a.rows(), a.cols(), std::move(ts));
}

template <class S>
bool is_zero_mat(const SpMat<S>& m) {
  for (int j = 0; j < m.outerSize(); ++j)
    for (typename SpMat<S>::InnerIterator it(m, j); it; ++it)
      if (!is_zero(it.value())) return false;
  return true;
}

template <class S>
bool mat_equal(const SpMat<S>& a, const SpMat<S>& b) {
  if (a.rows() != b.rows() || a.cols() != b.cols()) return false;
  return is_zero_mat(add_scaled(a, S(1), b, S(-1)));
}

template <class S>
SpMat<S> hcat(const std::vector<SpMat<S>>& blocks) {
  if (blocks.empty()) throw EntwineError("hcat: empty");
  int rows = blocks[0].rows(), cols = 0;
  for (const auto& b : blocks) {
    if (b.rows() != rows) throw EntwineError("hcat: row mismatch");
    cols += b.cols();
  }
  std::vector<Trip<S>> ts;
  int off = 0;
  for (const auto& b : blocks) {
    for (int j = 0; j < b.outerSize(); ++j)
      for (typename SpMat<S>::InnerIterator it(b, j); it; ++it)
        ts.emplace_back(it.row(), off + it.col(), it.value());
    off += b.cols();
  }
  return sparse_from_triplets<S>(rows, cols, std::move(ts));
}

template <class S>
SpMat<S> dense_to_sparse(const DMat<S>& d) {
  std::vector<Trip<S>> ts;
  for (int j = 0; j < d.cols(); ++j)
    for (int i = 0; i < d.rows(); ++i)
      if (!is_zero(d(i, j))) ts.emplace_back(i, j, d(i, j));
  return sparse_from_triplets<S>(int(d.rows()), int(d.cols()), std::move(ts));
}

template <class S>
DVec<S> sparse_col(const SpMat<S>& m, int j) {
  DVec<S> v = DVec<S>::Constant(m.rows(), S(0));
  for (typename SpMat<S>::InnerIterator it(m, j); it; ++it)
    v(it.row()) = it.value();
  return v;
}

template <class S>
SpMat<S> vec_to_sparse(const DVec<S>& v) {
  std::vector<Trip<S>> ts;
  for (int i = 0; i < v.size(); ++i)
    if (!is_zero(v(i))) ts.emplace_back(int(i), 0, v(i));
  return sparse_from_triplets<S>(int(v.size()), 1, std::move(ts));
}

// --- row echelon engine ---------------------------------------------------

// Sparse row: column-sorted (col, value) pairs.
template <class S>
using SparseRow = std::vector<std::pair<int, S>>;

// Reduced row echelon form of [M | B] where pivots are only ever chosen in
// the first `pivot_cols` columns (the M block).  Pivot choice per column:
// among active rows whose leading entry sits in the column, take the one
// with the fewest stored entries (Markowitz-style), ties by lowest row
// index.  RREF is unique, so the outputs do not depend on that tie break.
template <class S>
struct Echelon {
  int rows = 0, cols = 0, pivot_limit = 0;
  std::vector<SparseRow<S>> pivot_rows;  // one per pivot, normalized, reduced
  std::vector<int> pivot_col;            // increasing
  std::vector<int> pivot_row_of_col;     // col -> index into pivot_rows or -1
  std::vector<SparseRow<S>> residual;    // rows with no pivot in the M block
  int rank() const { return int(pivot_col.size()); }
};

namespace detail {

template <class S>
SparseRow<S> row_axpy(const SparseRow<S>& r, const S& f, const SparseRow<S>& p) {
  // r - f * p, both column-sorted
  SparseRow<S> out;
  out.reserve(r.size() + p.size());
  size_t i = 0, j = 0;
  while (i < r.size() || j < p.size()) {
    if (j == p.size() || (i < r.size() && r[i].first < p[j].first)) {
      out.push_back(r[i++]);
    } else if (i == r.size() || p[j].first < r[i].first) {
      out.emplace_back(p[j].first, S(0) - f * p[j].second);
      ++j;
    } else {
      S v = r[i].second - f * p[j].second;
      if (!is_zero(v)) out.emplace_back(r[i].first, v);
      ++i; ++j;
    }
  }
  return out;
}

template <class S>
const S* row_coeff(const SparseRow<S>& r, int col) {
  auto it = std::lower_bound(
      r.begin(), r.end(), col,
      [](const std::pair<int, S>& a, int c) { return a.first < c; });
  if (it != r.end() && it->first == col) return &it->second;
  return nullptr;
}

}  // namespace detail

template <class S>
Echelon<S> row_echelon(const SpMat<S>& m, int pivot_limit = -1) {
  Echelon<S> e;
  e.rows = m.rows();
  e.cols = m.cols();
  e.pivot_limit = pivot_limit < 0 ? int(m.cols()) : pivot_limit;
  e.pivot_row_of_col.assign(e.pivot_limit, -1);

  std::vector<SparseRow<S>> work(m.rows());
  for (int j = 0; j < m.outerSize(); ++j)
    for (typename SpMat<S>::InnerIterator it(m, j); it; ++it)
      work[it.row()].emplace_back(it.col(), it.value());
  // column-major iteration above yields rows sorted by column already
  std::vector<char> active(m.rows(), 1);

  for (int c = 0; c < e.pivot_limit; ++c) {
    int best = -1;
    size_t best_nnz = 0;
    for (int r = 0; r < e.rows; ++r) {
      if (!active[r] || work[r].empty()) continue;
      if (work[r].front().first != c) continue;
      if (best == -1 || work[r].size() < best_nnz) {
        best = r;
        best_nnz = work[r].size();
      }
    }
    if (best == -1) continue;

    SparseRow<S> piv = std::move(work[best]);
    active[best] = 0;
    work[best].clear();
    S lead = piv.front().second;
    if (!(lead == S(1)))
      for (auto& [cc, v] : piv) v = v / lead;

    for (int r = 0; r < e.rows; ++r) {
      if (!active[r] || work[r].empty()) continue;
      if (work[r].front().first == c)
        work[r] = detail::row_axpy(work[r], work[r].front().second, piv);
    }
    for (auto& prow : e.pivot_rows) {
      const S* f = detail::row_coeff(prow, c);
      if (f) prow = detail::row_axpy(prow, *f, piv);
    }
    e.pivot_row_of_col[c] = int(e.pivot_col.size());
    e.pivot_col.push_back(c);
    e.pivot_rows.push_back(std::move(piv));
  }
  for (int r = 0; r < e.rows; ++r)
    if (active[r] && !work[r].empty()) e.residual.push_back(std::move(work[r]));
  return e;
}

template <class S>
int rank(const SpMat<S>& m) {
  return row_echelon(m).rank();
}

// Canonical kernel basis: one column per free column f (ascending), with
// coordinate 1 at f and -R[r][f] at each pivot column.
template <class S>
SpMat<S> kernel_basis(const SpMat<S>& m) {
  Echelon<S> e = row_echelon(m);
  std::vector<int> free_cols;
  for (int c = 0; c < e.cols; ++c)
    if (e.pivot_row_of_col[c] == -1) free_cols.push_back(c);
  std::vector<Trip<S>> ts;
  for (size_t k = 0; k < free_cols.size(); ++k) {
    int f = free_cols[k];
    ts.emplace_back(f, int(k), S(1));
    for (int r = 0; r < e.rank(); ++r) {
      const S* v = detail::row_coeff(e.pivot_rows[r], f);
      if (v) ts.emplace_back(e.pivot_col[r], int(k), S(0) - *v);
    }
  }
  return sparse_from_triplets<S>(e.cols, int(free_cols.size()), std::move(ts));
}

// Solve M X = B column by column.  ok[j] says whether column j of B lies in
// the column space of M; where it does, X column j holds the canonical
// solution (free coordinates zero).
template <class S>
struct SolveResult {
  SpMat<S> x;
  std::vector<bool> ok;
  bool all_ok() const {
    for (bool b : ok)
      if (!b) return false;
    return true;
  }
};

template <class S>
SolveResult<S> solve_many(const SpMat<S>& m, const SpMat<S>& b) {
  if (m.rows() != b.rows()) throw EntwineError("solve_many: row mismatch");
  SpMat<S> aug = hcat<S>({m, b});
  Echelon<S> e = row_echelon(aug, int(m.cols()));
  SolveResult<S> res;
  res.ok.assign(b.cols(), true);
  std::vector<Trip<S>> ts;
  for (int j = 0; j < b.cols(); ++j) {
    int col = int(m.cols()) + j;
    for (const auto& row : e.residual)
      if (detail::row_coeff(row, col)) res.ok[j] = false;
    if (!res.ok[j]) continue;
    for (int r = 0; r < e.rank(); ++r) {
      const S* v = detail::row_coeff(e.pivot_rows[r], col);
      if (v) ts.emplace_back(e.pivot_col[r], j, *v);
    }
  }
  res.x = sparse_from_triplets<S>(int(m.cols()), int(b.cols()), std::move(ts));
  return res;
}

template <class S>
std::optional<DVec<S>> solve_membership(const SpMat<S>& m, const DVec<S>& b) {
  SolveResult<S> r = solve_many<S>(m, vec_to_sparse<S>(b));
  if (!r.ok[0]) return std::nullopt;
  return sparse_col(r.x, 0);
}

// Basis of the column space: the columns of M sitting at the pivot columns
// of its echelon form (deterministic).
template <class S>
SpMat<S> image_basis(const SpMat<S>& m) {
  Echelon<S> e = row_echelon(m);
  std::vector<Trip<S>> ts;
  for (size_t k = 0; k < e.pivot_col.size(); ++k) {
    int j = e.pivot_col[k];
    for (typename SpMat<S>::InnerIterator it(m, j); it; ++it)
      ts.emplace_back(it.row(), int(k), it.value());
  }
  return sparse_from_triplets<S>(int(m.rows()), int(e.pivot_col.size()),
                                 std::move(ts));
}

// span(A) == span(B) as subspaces of the common ambient space.
template <class S>
bool same_span(const SpMat<S>& a, const SpMat<S>& b) {
  if (a.rows() != b.rows()) return false;
  int ra = rank(a), rb = rank(b);
  if (ra != rb) return false;
  return rank(hcat<S>({a, b})) == ra;
}

}  // namespace entwine
