#pragma once

#include <cstddef>
#include <vector>

#include "kcert/field.hpp"
#include "kcert/ledger.hpp"
#include "kcert/sparse_matrix.hpp"

namespace kcert {

/// s[i] = U^T op^i V0 for i = 0..delta: delta applications and delta+1 dots.
inline Vector compute_sequence(const PrimeField& field, const MatrixView& op, VectorView u, VectorView v0, u64 delta,
                               OpCounter counter = {}) {
  detail::require_length(u.size(), op.dimension(), "compute_sequence U");
  detail::require_length(v0.size(), op.dimension(), "compute_sequence V0");
  Vector s;
  s.reserve(delta + 1);
  Vector v(v0.begin(), v0.end());
  s.push_back(dot(field, u, v, counter));
  for (u64 i = 1; i <= delta; ++i) {
    v = op.apply(field, v, counter);
    s.push_back(dot(field, u, v, counter));
  }
  return s;
}

inline Vector compute_sequence(const PrimeField& field, const SparseMatrix& a, VectorView u, VectorView v0, u64 delta,
                               OpCounter counter = {}) {
  return compute_sequence(field, MatrixView(a), u, v0, delta, counter);
}

/// op^d V by d successive applications.
inline Vector compute_power(const PrimeField& field, const MatrixView& op, VectorView v, u64 d,
                            OpCounter counter = {}) {
  detail::require_length(v.size(), op.dimension(), "compute_power");
  Vector out(v.begin(), v.end());
  for (u64 i = 0; i < d; ++i) out = op.apply(field, out, counter);
  return out;
}

inline Vector compute_power(const PrimeField& field, const SparseMatrix& a, VectorView v, u64 d,
                            OpCounter counter = {}) {
  return compute_power(field, MatrixView(a), v, d, counter);
}

/// V_0..V_{d-1} with V_i = op V_{i-1}.
inline std::vector<Vector> krylov_list(const PrimeField& field, const MatrixView& op, VectorView v0, std::size_t d,
                                       OpCounter counter = {}) {
  std::vector<Vector> list;
  if (d == 0) return list;
  list.reserve(d);
  list.emplace_back(v0.begin(), v0.end());
  for (std::size_t i = 1; i < d; ++i) list.push_back(op.apply(field, list.back(), counter));
  return list;
}

/// Baseline Prover cost of 2n sequence terms: 2n mu + 4n^2.
inline u64 seq_cost(u64 n, u64 mu) { return 2 * n * mu + 4 * n * n; }

}  // namespace kcert
