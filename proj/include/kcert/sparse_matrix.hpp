#pragma once

#include <algorithm>
#include <cstddef>
#include <fstream>
#include <istream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "kcert/errors.hpp"
#include "kcert/field.hpp"
#include "kcert/ledger.hpp"

namespace kcert {

struct Entry {
  u64 row = 0;
  u64 col = 0;
  Scalar value;

  friend bool operator==(const Entry&, const Entry&) = default;
};

/// Square sparse matrix over GF(p) in coordinate form, normalized: entries
/// sorted by (row, col), no duplicates, no zero values. Immutable once built.
class SparseMatrix {
 public:
  SparseMatrix() = default;

  /// Normalizes `entries`: duplicates are summed mod p and zero results
  /// dropped. Values are reduced mod p; indices must lie in [0, n).
  SparseMatrix(std::size_t n, u64 modulus, std::vector<Entry> entries) : n_(n), modulus_(modulus) {
    for (Entry& e : entries) {
      if (e.row >= n || e.col >= n) throw DimensionError("matrix entry index out of range");
      e.value.value %= modulus;
    }
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.row != b.row ? a.row < b.row : a.col < b.col; });
    for (const Entry& e : entries) {
      if (!entries_.empty() && entries_.back().row == e.row && entries_.back().col == e.col) {
        u64 s = entries_.back().value.value + e.value.value;
        entries_.back().value.value = s >= modulus ? s - modulus : s;
      } else {
        entries_.push_back(e);
      }
    }
    std::erase_if(entries_, [](const Entry& e) { return e.value.value == 0; });

    row_start_.assign(n + 1, 0);
    for (const Entry& e : entries_) ++row_start_[e.row + 1];
    for (std::size_t i = 0; i < n; ++i) row_start_[i + 1] += row_start_[i];
    std::size_t nonempty = 0;
    for (std::size_t i = 0; i < n; ++i) nonempty += row_start_[i + 1] > row_start_[i] ? 1 : 0;
    mu_ = 2 * entries_.size() - nonempty;
  }

  static SparseMatrix identity(std::size_t n, u64 modulus) { return diagonal(Vector(n, Scalar{1}), modulus); }

  static SparseMatrix diagonal(const Vector& d, u64 modulus) {
    std::vector<Entry> e;
    for (std::size_t i = 0; i < d.size(); ++i) e.push_back({i, i, d[i]});
    return SparseMatrix(d.size(), modulus, std::move(e));
  }

  std::size_t dimension() const { return n_; }
  u64 modulus() const { return modulus_; }
  std::size_t nnz() const { return entries_.size(); }
  const std::vector<Entry>& entries() const { return entries_; }

  /// Operation count of one product with a vector: one multiplication per
  /// entry plus the additions combining each nonempty row.
  u64 mu() const { return mu_; }

  std::span<const Entry> row(std::size_t i) const {
    return std::span<const Entry>(entries_).subspan(row_start_[i], row_start_[i + 1] - row_start_[i]);
  }

  friend bool operator==(const SparseMatrix& a, const SparseMatrix& b) {
    return a.n_ == b.n_ && a.modulus_ == b.modulus_ && a.entries_ == b.entries_;
  }

 private:
  std::size_t n_ = 0;
  u64 modulus_ = 0;
  std::vector<Entry> entries_;
  std::vector<std::size_t> row_start_{0};
  u64 mu_ = 0;
};

namespace detail {

inline void require_length(std::size_t got, std::size_t want, const char* what) {
  if (got != want) {
    throw DimensionError(std::string(what) + ": length " + std::to_string(got) + ", expected " +
                         std::to_string(want));
  }
}

}  // namespace detail

/// A * v.
inline Vector matvec(const PrimeField& field, const SparseMatrix& a, VectorView v, OpCounter counter = {}) {
  detail::require_length(v.size(), a.dimension(), "matvec");
  Vector out(a.dimension());
  for (std::size_t i = 0; i < a.dimension(); ++i) {
    Scalar acc = field.zero();
    for (const Entry& e : a.row(i)) acc = field.add(acc, field.mul(e.value, v[e.col]));
    out[i] = acc;
  }
  counter.matvec(a.mu());
  return out;
}

/// u^T * A, scattered entry by entry (no transpose is materialized).
inline Vector vecmat(const PrimeField& field, VectorView u, const SparseMatrix& a, OpCounter counter = {}) {
  detail::require_length(u.size(), a.dimension(), "vecmat");
  Vector out(a.dimension());
  for (const Entry& e : a.entries()) out[e.col] = field.add(out[e.col], field.mul(u[e.row], e.value));
  counter.row_product(a.mu());
  return out;
}

/// sum u_i v_i; charged 2n-1 operations.
inline Scalar dot(const PrimeField& field, VectorView u, VectorView v, OpCounter counter = {}) {
  detail::require_length(v.size(), u.size(), "dot");
  Scalar acc = field.zero();
  for (std::size_t i = 0; i < u.size(); ++i) acc = field.add(acc, field.mul(u[i], v[i]));
  if (!u.empty()) counter.ops(2 * u.size() - 1);
  return acc;
}

/// y += a * x; charged 2n operations.
inline void axpy(const PrimeField& field, Scalar a, VectorView x, std::span<Scalar> y, OpCounter counter = {}) {
  detail::require_length(y.size(), x.size(), "axpy");
  for (std::size_t i = 0; i < x.size(); ++i) y[i] = field.add(y[i], field.mul(a, x[i]));
  counter.ops(2 * x.size());
}

/// The operator a protocol works with at some recursion depth: A itself or
/// A^T. Counting follows the protocol's own view, so `apply` is always a
/// matvec and `apply_left` always a row product, whichever physical kernel
/// the transposition selects.
class MatrixView {
 public:
  explicit MatrixView(const SparseMatrix& a, bool transposed = false) : a_(&a), transposed_(transposed) {}

  const SparseMatrix& matrix() const { return *a_; }
  bool is_transposed() const { return transposed_; }
  std::size_t dimension() const { return a_->dimension(); }
  u64 mu() const { return a_->mu(); }
  MatrixView transposed() const { return MatrixView(*a_, !transposed_); }

  /// op * v
  Vector apply(const PrimeField& field, VectorView v, OpCounter counter = {}) const {
    Vector out = transposed_ ? vecmat(field, v, *a_) : matvec(field, *a_, v);
    counter.matvec(a_->mu());
    return out;
  }

  /// u^T * op
  Vector apply_left(const PrimeField& field, VectorView u, OpCounter counter = {}) const {
    Vector out = transposed_ ? matvec(field, *a_, u) : vecmat(field, u, *a_);
    counter.row_product(a_->mu());
    return out;
  }

 private:
  const SparseMatrix* a_;
  bool transposed_;
};

/// Uniform integer in [0, bound) from a 64-bit generator, by rejection, so
/// results do not depend on the standard library's distributions.
inline u64 uniform_below(std::mt19937_64& rng, u64 bound) {
  if (bound <= 1) return 0;
  const u64 limit = (~u64{0} / bound) * bound;
  u64 x;
  do {
    x = rng();
  } while (x >= limit);
  return x % bound;
}

/// Matrix with exactly `nnz_per_row` distinct columns per row and uniform
/// nonzero values. Deterministic for a given seed.
inline SparseMatrix random_sparse(std::size_t n, std::size_t nnz_per_row, const PrimeField& field,
                                  std::uint64_t seed) {
  if (nnz_per_row < 1 || nnz_per_row > n) throw std::invalid_argument("nnz_per_row must be in [1, n]");
  std::mt19937_64 rng(seed);
  std::vector<Entry> entries;
  entries.reserve(n * nnz_per_row);
  std::vector<u64> cols;
  std::vector<u64> pool;
  for (std::size_t i = 0; i < n; ++i) {
    cols.clear();
    if (2 * nnz_per_row <= n) {
      while (cols.size() < nnz_per_row) {
        u64 c = uniform_below(rng, n);
        if (std::find(cols.begin(), cols.end(), c) == cols.end()) cols.push_back(c);
      }
    } else {
      pool.resize(n);
      for (std::size_t j = 0; j < n; ++j) pool[j] = j;
      for (std::size_t j = 0; j < nnz_per_row; ++j) {
        std::swap(pool[j], pool[j + uniform_below(rng, n - j)]);
        cols.push_back(pool[j]);
      }
    }
    for (u64 c : cols) entries.push_back({i, c, Scalar{1 + uniform_below(rng, field.modulus() - 1)}});
  }
  return SparseMatrix(n, field.modulus(), std::move(entries));
}

inline constexpr const char* kMatrixBanner = "%%MatrixMarket matrix coordinate integer general";

inline void write_matrix(std::ostream& os, const SparseMatrix& a) {
  os << kMatrixBanner << '\n'
     << "% modulus " << a.modulus() << '\n'
     << a.dimension() << ' ' << a.dimension() << ' ' << a.nnz() << '\n';
  for (const Entry& e : a.entries()) os << e.row + 1 << ' ' << e.col + 1 << ' ' << e.value.value << '\n';
}

inline SparseMatrix read_matrix(std::istream& is) {
  std::string line;
  std::size_t lineno = 0;
  auto next_line = [&]() -> bool {
    if (!std::getline(is, line)) return false;
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return true;
  };

  if (!next_line() || line != kMatrixBanner) throw ParseError(1, "expected MatrixMarket coordinate banner");

  if (!next_line()) throw ParseError(2, "missing modulus line");
  u64 modulus = 0;
  {
    std::istringstream ls(line);
    std::string pct, key, extra;
    if (!(ls >> pct >> key >> modulus) || pct != "%" || key != "modulus" || (ls >> extra)) {
      throw ParseError(lineno, "expected '% modulus <p>'");
    }
    if (modulus <= 2 || modulus >= (u64{1} << 62) || !is_prime_u64(modulus)) {
      throw ParseError(lineno, "modulus must be a prime in (2, 2^62)");
    }
  }

  if (!next_line()) throw ParseError(3, "missing size line");
  u64 rows = 0, cols = 0, nnz = 0;
  {
    std::istringstream ls(line);
    std::string extra;
    if (!(ls >> rows >> cols >> nnz) || (ls >> extra)) throw ParseError(lineno, "expected '<n> <n> <nnz>'");
    if (rows != cols) throw ParseError(lineno, "matrix must be square");
    if (rows > (u64{1} << 31) || (rows > 0 && nnz > rows * rows)) throw ParseError(lineno, "nnz exceeds n^2");
  }

  std::vector<Entry> entries;
  entries.reserve(std::min<u64>(nnz, u64{1} << 20));
  const std::size_t first_entry_line = lineno + 1;
  for (u64 k = 0; k < nnz; ++k) {
    if (!next_line()) throw ParseError(lineno + 1, "unexpected end of file");
    std::istringstream ls(line);
    std::string extra;
    std::int64_t r = 0, c = 0;
    std::string value_text;
    if (!(ls >> r >> c >> value_text) || (ls >> extra)) throw ParseError(lineno, "expected '<row> <col> <value>'");
    if (r < 1 || c < 1 || static_cast<u64>(r) > rows || static_cast<u64>(c) > rows) {
      throw ParseError(lineno, "index out of range");
    }
    if (value_text.empty() || value_text.find_first_not_of("0123456789") != std::string::npos ||
        value_text.size() > 19) {
      throw ParseError(lineno, "value must be a canonical residue");
    }
    u64 v = std::stoull(value_text);
    if (v >= modulus) throw ParseError(lineno, "value not reduced modulo p");
    if (v == 0) throw ParseError(lineno, "explicit zero entry");
    entries.push_back({static_cast<u64>(r - 1), static_cast<u64>(c - 1), Scalar{v}});
  }
  while (next_line()) {
    if (line.find_first_not_of(" \t") != std::string::npos) throw ParseError(lineno, "trailing data after entries");
  }

  std::vector<std::size_t> order(entries.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    const Entry& x = entries[a];
    const Entry& y = entries[b];
    return x.row != y.row ? x.row < y.row : (x.col != y.col ? x.col < y.col : a < b);
  });
  for (std::size_t i = 1; i < order.size(); ++i) {
    const Entry& x = entries[order[i - 1]];
    const Entry& y = entries[order[i]];
    if (x.row == y.row && x.col == y.col) throw ParseError(first_entry_line + order[i], "duplicate entry");
  }
  return SparseMatrix(static_cast<std::size_t>(rows), modulus, std::move(entries));
}

inline SparseMatrix load_matrix(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return read_matrix(in);
}

inline void store_matrix(const std::string& path, const SparseMatrix& a) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  write_matrix(out, a);
  if (!out) throw std::runtime_error("write failed for " + path);
}

}  // namespace kcert
