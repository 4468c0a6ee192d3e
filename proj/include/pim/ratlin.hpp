#pragma once

#include <algorithm>
#include <concepts>
#include <cstddef>
#include <vector>

#include "pim/errors.hpp"
#include "pim/matrix.hpp"
#include "pim/rational.hpp"

namespace pim {

/// Exact field arithmetic. Floating-point types satisfy the syntax but not
/// the semantics; rank decisions need exact zero tests.
template <class T>
concept ExactField = requires(T a, T b) {
  { a + b } -> std::convertible_to<T>;
  { a - b } -> std::convertible_to<T>;
  { a * b } -> std::convertible_to<T>;
  { a / b } -> std::convertible_to<T>;
  { a == b } -> std::convertible_to<bool>;
  T(0);
  T(1);
} && !std::floating_point<T>;

template <class T>
struct RrefResult {
  Matrix<T> rref;
  std::vector<std::size_t> pivot_cols;  // strictly increasing
  std::size_t rank = 0;
};

/// Gauss-Jordan elimination to reduced row echelon form.
///
/// The pivot in each column is the first nonzero entry at or below the
/// current pivot row; no other pivoting heuristic is applied, so the result
/// is fully determined by the input.
template <ExactField T>
RrefResult<T> rref(Matrix<T> m) {
  RrefResult<T> out;
  std::size_t pivot_row = 0;
  for (std::size_t c = 0; c < m.cols() && pivot_row < m.rows(); ++c) {
    std::size_t r = pivot_row;
    while (r < m.rows() && m(r, c) == 0) ++r;
    if (r == m.rows()) continue;
    m.swap_rows(r, pivot_row);

    const T inv = T(1) / m(pivot_row, c);
    for (std::size_t j = c; j < m.cols(); ++j) m(pivot_row, j) *= inv;

    for (std::size_t i = 0; i < m.rows(); ++i) {
      if (i == pivot_row || m(i, c) == 0) continue;
      const T factor = m(i, c);
      for (std::size_t j = c; j < m.cols(); ++j) m(i, j) -= factor * m(pivot_row, j);
    }
    out.pivot_cols.push_back(c);
    ++pivot_row;
  }
  out.rank = out.pivot_cols.size();
  out.rref = std::move(m);
  return out;
}

template <ExactField T>
std::size_t rank(const Matrix<T>& m) {
  return rref(m).rank;
}

/// Kernel basis read off the reduced echelon form: one column per free
/// variable, in increasing free-column order, without normalization.
template <ExactField T>
Matrix<T> kernel_basis(const Matrix<T>& m) {
  const auto r = rref(m);
  std::vector<bool> is_pivot(m.cols(), false);
  for (auto p : r.pivot_cols) is_pivot[p] = true;

  std::vector<std::vector<T>> columns;
  for (std::size_t f = 0; f < m.cols(); ++f) {
    if (is_pivot[f]) continue;
    std::vector<T> v(m.cols(), T(0));
    v[f] = T(1);
    for (std::size_t i = 0; i < r.rank; ++i) v[r.pivot_cols[i]] = -r.rref(i, f);
    columns.push_back(std::move(v));
  }
  return Matrix<T>::from_columns(columns, m.cols());
}

/// Scales a nonzero rational vector to the primitive integer vector on the
/// same line: integer entries with gcd 1, first nonzero entry positive.
inline IntVector normalize_primitive(const RatVector& v) {
  Integer den_lcm = 1;
  bool nonzero = false;
  for (const auto& x : v) {
    if (x == 0) continue;
    nonzero = true;
    den_lcm = lcm(den_lcm, denominator(x));
  }
  if (!nonzero) throw DomainError("cannot normalize zero vector");

  IntVector out;
  out.reserve(v.size());
  Integer g = 0;
  for (const auto& x : v) {
    out.push_back(numerator(x) * (den_lcm / denominator(x)));
    g = gcd(g, out.back());
  }
  const auto first = std::find_if(out.begin(), out.end(), [](const Integer& x) { return x != 0; });
  if (*first < 0) g = -g;
  for (auto& x : out) x /= g;
  return out;
}

inline RatVector to_rational(const IntVector& v) { return {v.begin(), v.end()}; }

/// Kernel basis whose columns are primitive integer vectors.
inline RatMatrix nullspace_basis(const RatMatrix& m) {
  const RatMatrix raw = kernel_basis(m);
  std::vector<RatVector> columns;
  columns.reserve(raw.cols());
  for (std::size_t j = 0; j < raw.cols(); ++j) columns.push_back(to_rational(normalize_primitive(raw.column(j))));
  return RatMatrix::from_columns(columns, m.cols());
}

/// dim(rowspace(a) ∩ rowspace(b)), by the Grassmann formula.
template <ExactField T>
std::size_t row_intersection_dim(const Matrix<T>& a, const Matrix<T>& b) {
  if (a.cols() != b.cols()) throw DimensionError("row_intersection_dim: column counts differ");
  return rank(a) + rank(b) - rank(vstack(a, b));
}

/// Solves X·(EᵀE) = B·E for X, i.e. X = B·E·(EᵀE)⁻¹, by eliminating the
/// Gram system directly. E must have full column rank.
template <ExactField T>
Matrix<T> gram_solve(const Matrix<T>& e, const Matrix<T>& b) {
  if (b.cols() != e.rows()) throw DimensionError("gram_solve: B and E shapes do not match");
  const std::size_t d = e.cols();
  const Matrix<T> gram = transpose(e) * e;  // symmetric, d×d
  const Matrix<T> rhs = b * e;              // ℓ×d
  // (EᵀE)·Xᵀ = (B·E)ᵀ
  const auto r = rref(hstack(gram, transpose(rhs)));
  if (r.rank < d || (d > 0 && r.pivot_cols[d - 1] != d - 1)) {
    throw DomainError("basis matrix not full column rank");
  }
  Matrix<T> x(b.rows(), d);
  for (std::size_t i = 0; i < d; ++i)
    for (std::size_t k = 0; k < b.rows(); ++k) x(k, i) = r.rref(i, d + k);
  return x;
}

}  // namespace pim
