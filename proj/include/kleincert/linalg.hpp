#pragma once

// Dense Gauss-Jordan elimination over any exact field type R (Rational or
// FieldElement). Used for ranks, row spaces and solving small systems; the
// 3x3 kernels live in matrix3.hpp and avoid division entirely.

#include "kleincert/ring.hpp"

#include <cstddef>
#include <optional>
#include <vector>

namespace kleincert {

template <class R>
using DenseMatrix = std::vector<std::vector<R>>;

template <class R>
struct Echelon {
  DenseMatrix<R> rows;  // reduced row echelon form, pivots equal to one
  std::vector<std::size_t> pivot_cols;
  std::size_t rank() const noexcept { return pivot_cols.size(); }
};

/// Reduced row echelon form; zero rows are dropped.
template <class R>
Echelon<R> row_reduce(DenseMatrix<R> m) {
  Echelon<R> out;
  if (m.empty()) return out;
  const std::size_t cols = m.front().size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < m.size(); ++c) {
    std::size_t p = r;
    while (p < m.size() && is_zero(m[p][c])) ++p;
    if (p == m.size()) continue;
    std::swap(m[p], m[r]);
    const R inv = one_like(m[r][c]) / m[r][c];
    for (std::size_t k = c; k < cols; ++k)
      if (!is_zero(m[r][k])) m[r][k] = m[r][k] * inv;
    for (std::size_t i = 0; i < m.size(); ++i) {
      if (i == r || is_zero(m[i][c])) continue;
      const R f = m[i][c];
      for (std::size_t k = c; k < cols; ++k)
        if (!is_zero(m[r][k])) m[i][k] = m[i][k] - f * m[r][k];
    }
    out.pivot_cols.push_back(c);
    ++r;
  }
  m.resize(r);
  out.rows = std::move(m);
  return out;
}

template <class R>
std::size_t rank_of(DenseMatrix<R> m) {
  return row_reduce(std::move(m)).rank();
}

/// Basis of {v : m v = 0}. `zero` supplies the field for the output entries.
template <class R>
std::vector<std::vector<R>> null_space(const DenseMatrix<R>& m, std::size_t cols, const R& zero) {
  const auto e = row_reduce(m);
  std::vector<bool> is_pivot(cols, false);
  for (auto c : e.pivot_cols) is_pivot[c] = true;
  std::vector<std::vector<R>> basis;
  for (std::size_t free = 0; free < cols; ++free) {
    if (is_pivot[free]) continue;
    std::vector<R> v(cols, zero_like(zero));
    v[free] = one_like(zero);
    for (std::size_t i = 0; i < e.rank(); ++i) v[e.pivot_cols[i]] = zero_like(zero) - e.rows[i][free];
    basis.push_back(std::move(v));
  }
  return basis;
}

/// Solves m x = b for a (any) solution, or nullopt if inconsistent.
template <class R>
std::optional<std::vector<R>> solve(const DenseMatrix<R>& m, const std::vector<R>& b, const R& zero) {
  DenseMatrix<R> aug = m;
  const std::size_t cols = m.empty() ? 0 : m.front().size();
  for (std::size_t i = 0; i < aug.size(); ++i) aug[i].push_back(b[i]);
  const auto e = row_reduce(std::move(aug));
  std::vector<R> x(cols, zero_like(zero));
  for (std::size_t i = 0; i < e.rank(); ++i) {
    if (e.pivot_cols[i] == cols) return std::nullopt;
    x[e.pivot_cols[i]] = e.rows[i][cols];
  }
  return x;
}

}  // namespace kleincert
