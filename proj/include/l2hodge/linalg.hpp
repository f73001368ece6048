#pragma once

#include <algorithm>
#include <cstddef>
#include <utility>
#include <vector>

#include "l2hodge/common.hpp"
#include "l2hodge/rational.hpp"

namespace l2hodge {

/// Dense matrix over the exact rationals, row-major. All cochain and
/// differential matrices in the library live here; there is deliberately no
/// floating-point sibling of this type.
class RatMatrix {
public:
  RatMatrix() : rows_(0), cols_(0) {}
  RatMatrix(Count rows, Count cols)
      : rows_(rows), cols_(cols),
        entries_(static_cast<std::size_t>(rows * cols), Rat(0)) {
    require(rows >= 0 && cols >= 0, "RatMatrix: negative shape");
  }
  RatMatrix(Count rows, Count cols, std::vector<Rat> entries)
      : rows_(rows), cols_(cols), entries_(std::move(entries)) {
    require(rows >= 0 && cols >= 0, "RatMatrix: negative shape");
    require(entries_.size() == static_cast<std::size_t>(rows_ * cols_),
            "RatMatrix: entries length does not match rows*cols");
  }

  static RatMatrix identity(Count n) {
    RatMatrix m(n, n);
    for (Count i = 0; i < n; ++i) m.at(i, i) = 1;
    return m;
  }

  Count rows() const { return rows_; }
  Count cols() const { return cols_; }

  Rat& at(Count i, Count j) {
    return entries_[static_cast<std::size_t>(index(i, j))];
  }
  const Rat& at(Count i, Count j) const {
    return entries_[static_cast<std::size_t>(index(i, j))];
  }
  const std::vector<Rat>& entries() const { return entries_; }

  bool is_zero() const {
    return std::all_of(entries_.begin(), entries_.end(),
                       [](const Rat& r) { return r == 0; });
  }
  bool is_symmetric() const {
    if (rows_ != cols_) return false;
    for (Count i = 0; i < rows_; ++i)
      for (Count j = i + 1; j < cols_; ++j)
        if (at(i, j) != at(j, i)) return false;
    return true;
  }
  bool operator==(const RatMatrix& o) const {
    return rows_ == o.rows_ && cols_ == o.cols_ && entries_ == o.entries_;
  }

  RatMatrix transposed() const {
    RatMatrix t(cols_, rows_);
    for (Count i = 0; i < rows_; ++i)
      for (Count j = 0; j < cols_; ++j) t.at(j, i) = at(i, j);
    return t;
  }

  RatMatrix operator*(const RatMatrix& o) const {
    require(cols_ == o.rows_, "matrix product: inner dimensions differ");
    RatMatrix p(rows_, o.cols_);
    for (Count i = 0; i < rows_; ++i)
      for (Count k = 0; k < cols_; ++k) {
        const Rat& a = at(i, k);
        if (a == 0) continue;
        for (Count j = 0; j < o.cols_; ++j) p.at(i, j) += a * o.at(k, j);
      }
    return p;
  }

  RatMatrix operator-(const RatMatrix& o) const {
    require(rows_ == o.rows_ && cols_ == o.cols_, "matrix difference: shape");
    RatMatrix d(rows_, cols_);
    for (std::size_t i = 0; i < entries_.size(); ++i)
      d.entries_[i] = entries_[i] - o.entries_[i];
    return d;
  }

  /// [this | other], side by side.
  RatMatrix hcat(const RatMatrix& o) const {
    require(rows_ == o.rows_, "hcat: row counts differ");
    RatMatrix m(rows_, cols_ + o.cols_);
    for (Count i = 0; i < rows_; ++i) {
      for (Count j = 0; j < cols_; ++j) m.at(i, j) = at(i, j);
      for (Count j = 0; j < o.cols_; ++j) m.at(i, cols_ + j) = o.at(i, j);
    }
    return m;
  }

  RatMatrix select_columns(const std::vector<Count>& idx) const {
    RatMatrix m(rows_, static_cast<Count>(idx.size()));
    for (Count j = 0; j < m.cols(); ++j) {
      Count src = checked_index(idx[static_cast<std::size_t>(j)], cols_,
                                "select_columns");
      for (Count i = 0; i < rows_; ++i) m.at(i, j) = at(i, src);
    }
    return m;
  }

private:
  Count index(Count i, Count j) const {
    checked_index(i, rows_, "RatMatrix row");
    checked_index(j, cols_, "RatMatrix col");
    return i * cols_ + j;
  }

  Count rows_, cols_;
  std::vector<Rat> entries_;
};

namespace detail {

// Row echelon reduction in place; returns pivot columns. Partial pivoting by
// first nonzero entry; exact arithmetic makes the choice immaterial.
inline std::vector<Count> echelonize(RatMatrix& m) {
  std::vector<Count> pivots;
  Count row = 0;
  for (Count col = 0; col < m.cols() && row < m.rows(); ++col) {
    Count pr = -1;
    for (Count i = row; i < m.rows(); ++i)
      if (m.at(i, col) != 0) { pr = i; break; }
    if (pr < 0) continue;
    if (pr != row)
      for (Count j = 0; j < m.cols(); ++j) std::swap(m.at(pr, j), m.at(row, j));
    Rat inv = Rat(1) / m.at(row, col);
    for (Count j = col; j < m.cols(); ++j) m.at(row, j) *= inv;
    for (Count i = 0; i < m.rows(); ++i) {
      if (i == row || m.at(i, col) == 0) continue;
      Rat f = m.at(i, col);
      for (Count j = col; j < m.cols(); ++j) m.at(i, j) -= f * m.at(row, j);
    }
    pivots.push_back(col);
    ++row;
  }
  return pivots;
}

}  // namespace detail

inline Count rank(const RatMatrix& m) {
  RatMatrix work = m;
  return static_cast<Count>(detail::echelonize(work).size());
}

inline Count kernel_dim(const RatMatrix& m) { return m.cols() - rank(m); }

/// Columns form a basis of ker(m). Deterministic (reduced echelon form with
/// free variables set to unit vectors, in column order).
inline RatMatrix kernel_basis(const RatMatrix& m) {
  RatMatrix work = m;
  std::vector<Count> pivots = detail::echelonize(work);
  std::vector<bool> is_pivot(static_cast<std::size_t>(m.cols()), false);
  for (Count p : pivots) is_pivot[static_cast<std::size_t>(p)] = true;

  Count nfree = m.cols() - static_cast<Count>(pivots.size());
  RatMatrix basis(m.cols(), nfree);
  Count bcol = 0;
  for (Count fc = 0; fc < m.cols(); ++fc) {
    if (is_pivot[static_cast<std::size_t>(fc)]) continue;
    basis.at(fc, bcol) = 1;
    for (Count prow = 0; prow < static_cast<Count>(pivots.size()); ++prow)
      basis.at(pivots[static_cast<std::size_t>(prow)], bcol) =
          -work.at(prow, fc);
    ++bcol;
  }
  return basis;
}

/// Indices of a maximal independent subset of columns (a column-space basis).
inline std::vector<Count> column_space_basis(const RatMatrix& m) {
  RatMatrix work = m;
  return detail::echelonize(work);
}

/// dim(colspace(a) ∩ colspace(b)) = rk a + rk b − rk [a|b].
inline Count column_span_intersection_dim(const RatMatrix& a,
                                          const RatMatrix& b) {
  return rank(a) + rank(b) - rank(a.hcat(b));
}

/// Counts of positive, negative and zero eigenvalues of a symmetric matrix.
struct InertiaTriple {
  Count n_plus = 0;
  Count n_minus = 0;
  Count n_zero = 0;

  Count signature() const { return n_plus - n_minus; }
  Count size() const { return n_plus + n_minus + n_zero; }
  bool operator==(const InertiaTriple&) const = default;
};

/// Exact inertia by symmetric congruence (LDLᵀ-style). When no nonzero
/// diagonal pivot remains, a 2×2 off-diagonal block is eliminated instead;
/// such a block is hyperbolic and contributes (1,1,0). No square roots, no
/// floating point, so signatures of intersection forms are exact.
inline InertiaTriple inertia(const RatMatrix& m) {
  require(m.rows() == m.cols(), "inertia: matrix not square");
  require(m.is_symmetric(), "inertia: matrix not symmetric");

  RatMatrix a = m;
  std::vector<Count> live(static_cast<std::size_t>(a.rows()));
  for (std::size_t i = 0; i < live.size(); ++i) live[i] = static_cast<Count>(i);

  InertiaTriple t;
  while (!live.empty()) {
    Count piv = -1;
    for (std::size_t ii = 0; ii < live.size(); ++ii)
      if (a.at(live[ii], live[ii]) != 0) { piv = static_cast<Count>(ii); break; }

    if (piv >= 0) {
      Count p = live[static_cast<std::size_t>(piv)];
      Rat d = a.at(p, p);
      (d > 0 ? t.n_plus : t.n_minus) += 1;
      for (Count q : live) {
        if (q == p || a.at(q, p) == 0) continue;
        Rat f = a.at(q, p) / d;
        for (Count r : live) a.at(q, r) -= f * a.at(p, r);
      }
      for (Count r : live) a.at(p, r) = 0;
      live.erase(live.begin() + piv);
      continue;
    }

    // All live diagonal entries vanish; look for an off-diagonal coupling.
    Count bi = -1, bj = -1;
    for (std::size_t ii = 0; ii + 1 < live.size() && bi < 0; ++ii)
      for (std::size_t jj = ii + 1; jj < live.size(); ++jj)
        if (a.at(live[ii], live[jj]) != 0) {
          bi = static_cast<Count>(ii);
          bj = static_cast<Count>(jj);
          break;
        }
    if (bi < 0) {
      t.n_zero += static_cast<Count>(live.size());
      break;
    }

    // Hyperbolic plane [[0,c],[c,0]]: eigenvalues ±c. Block-eliminate the
    // rest: A_kl -= v_k B⁻¹ v_lᵀ with B⁻¹ = [[0,1/c],[1/c,0]].
    Count p = live[static_cast<std::size_t>(bi)];
    Count q = live[static_cast<std::size_t>(bj)];
    Rat c = a.at(p, q);
    t.n_plus += 1;
    t.n_minus += 1;
    std::vector<Count> rest;
    for (Count r : live)
      if (r != p && r != q) rest.push_back(r);
    for (Count k : rest) {
      Rat vkp = a.at(k, p), vkq = a.at(k, q);
      for (Count l : rest) {
        Rat vlp = a.at(l, p), vlq = a.at(l, q);
        a.at(k, l) -= (vkp * vlq + vkq * vlp) / c;
      }
    }
    for (Count k : rest) {
      a.at(k, p) = a.at(p, k) = 0;
      a.at(k, q) = a.at(q, k) = 0;
    }
    live.erase(live.begin() + bj);
    live.erase(live.begin() + bi);
  }
  return t;
}

}  // namespace l2hodge
