#pragma once

#include <cstddef>
#include <optional>
#include <utility>
#include <vector>

#include "kcert/field.hpp"
#include "kcert/polynomial.hpp"
#include "kcert/sparse_matrix.hpp"

namespace kcert {

/// Row-major dense square matrix; used by the honest Prover for the answers
/// the sparse protocols only check.
class DenseMatrix {
 public:
  explicit DenseMatrix(std::size_t n) : n_(n), a_(n * n) {}

  static DenseMatrix from_sparse(const SparseMatrix& s) {
    DenseMatrix d(s.dimension());
    for (const Entry& e : s.entries()) d(e.row, e.col) = e.value;
    return d;
  }

  std::size_t dimension() const { return n_; }
  Scalar& operator()(std::size_t i, std::size_t j) { return a_[i * n_ + j]; }
  Scalar operator()(std::size_t i, std::size_t j) const { return a_[i * n_ + j]; }

  void swap_rows(std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < n_; ++k) std::swap((*this)(i, k), (*this)(j, k));
  }
  void swap_cols(std::size_t i, std::size_t j) {
    for (std::size_t k = 0; k < n_; ++k) std::swap((*this)(k, i), (*this)(k, j));
  }

 private:
  std::size_t n_;
  Vector a_;
};

/// Determinant by Gaussian elimination with row swaps.
inline Scalar dense_determinant(const PrimeField& field, DenseMatrix m) {
  const std::size_t n = m.dimension();
  Scalar det = field.one();
  for (std::size_t c = 0; c < n; ++c) {
    std::size_t piv = c;
    while (piv < n && m(piv, c).value == 0) ++piv;
    if (piv == n) return field.zero();
    if (piv != c) {
      m.swap_rows(piv, c);
      det = field.neg(det);
    }
    det = field.mul(det, m(c, c));
    const Scalar inv = field.inv(m(c, c));
    for (std::size_t r = c + 1; r < n; ++r) {
      if (m(r, c).value == 0) continue;
      const Scalar f = field.mul(m(r, c), inv);
      for (std::size_t k = c; k < n; ++k) m(r, k) = field.sub(m(r, k), field.mul(f, m(c, k)));
    }
  }
  return det;
}

/// A nonzero w with M w = 0, if M is singular.
inline std::optional<Vector> dense_kernel_vector(const PrimeField& field, DenseMatrix m) {
  const std::size_t n = m.dimension();
  std::vector<std::size_t> pivot_col;
  std::vector<bool> is_pivot(n, false);
  std::size_t row = 0;
  for (std::size_t c = 0; c < n && row < n; ++c) {
    std::size_t piv = row;
    while (piv < n && m(piv, c).value == 0) ++piv;
    if (piv == n) continue;
    m.swap_rows(piv, row);
    const Scalar inv = field.inv(m(row, c));
    for (std::size_t k = 0; k < n; ++k) m(row, k) = field.mul(m(row, k), inv);
    for (std::size_t r = 0; r < n; ++r) {
      if (r == row || m(r, c).value == 0) continue;
      const Scalar f = m(r, c);
      for (std::size_t k = 0; k < n; ++k) m(r, k) = field.sub(m(r, k), field.mul(f, m(row, k)));
    }
    pivot_col.push_back(c);
    is_pivot[c] = true;
    ++row;
  }
  std::size_t free = 0;
  while (free < n && is_pivot[free]) ++free;
  if (free == n) return std::nullopt;
  Vector w(n);
  w[free] = field.one();
  for (std::size_t r = 0; r < pivot_col.size(); ++r) w[pivot_col[r]] = field.neg(m(r, free));
  return w;
}

/// Characteristic polynomial det(xI - M): similarity reduction to upper
/// Hessenberg form, then the standard column recurrence.
inline Polynomial dense_charpoly(const PrimeField& field, DenseMatrix m) {
  const std::size_t n = m.dimension();
  for (std::size_t c = 0; c + 2 <= n; ++c) {
    std::size_t piv = c + 1;
    while (piv < n && m(piv, c).value == 0) ++piv;
    if (piv == n) continue;
    if (piv != c + 1) {
      m.swap_rows(piv, c + 1);
      m.swap_cols(piv, c + 1);
    }
    const Scalar inv = field.inv(m(c + 1, c));
    for (std::size_t r = c + 2; r < n; ++r) {
      if (m(r, c).value == 0) continue;
      const Scalar f = field.mul(m(r, c), inv);
      for (std::size_t k = 0; k < n; ++k) m(r, k) = field.sub(m(r, k), field.mul(f, m(c + 1, k)));
      for (std::size_t k = 0; k < n; ++k) m(k, c + 1) = field.add(m(k, c + 1), field.mul(f, m(k, r)));
    }
  }
  // p_0 = 1; p_{k+1} = (x - h_kk) p_k - sum_{i<k} h_ik (prod_{j=i+1..k} h_{j,j-1}) p_i
  std::vector<Polynomial> p{Polynomial::constant(field.one())};
  const Polynomial x = Polynomial::monomial(1);
  for (std::size_t k = 0; k < n; ++k) {
    Polynomial next = poly_mul(field, poly_sub(field, x, Polynomial::constant(m(k, k))), p[k]);
    Scalar prod = field.one();
    for (std::size_t i = k; i-- > 0;) {
      prod = field.mul(prod, m(i + 1, i));
      if (prod.value == 0) break;
      next = poly_sub(field, next, poly_scale(field, p[i], field.mul(m(i, k), prod)));
    }
    p.push_back(std::move(next));
  }
  return p[n];
}

}  // namespace kcert
