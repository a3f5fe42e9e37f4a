#pragma once

#include <algorithm>
#include <cstddef>
#include <initializer_list>
#include <stdexcept>
#include <utility>
#include <vector>

#include "kcert/field.hpp"

namespace kcert {

/// Dense univariate polynomial over GF(p); coefficients()[i] is the
/// coefficient of x^i. Trailing zeros are trimmed, so the zero polynomial has
/// no coefficients and degree -1.
class Polynomial {
 public:
  Polynomial() = default;

  explicit Polynomial(Vector coeffs) : coeffs_(std::move(coeffs)) { trim(); }

  static Polynomial from_u64(const PrimeField& field, std::initializer_list<u64> coeffs) {
    Vector c;
    c.reserve(coeffs.size());
    for (u64 v : coeffs) c.push_back(field.from_u64(v));
    return Polynomial(std::move(c));
  }

  static Polynomial from_i64(const PrimeField& field, std::initializer_list<std::int64_t> coeffs) {
    Vector c;
    c.reserve(coeffs.size());
    for (std::int64_t v : coeffs) c.push_back(field.from_i64(v));
    return Polynomial(std::move(c));
  }

  static Polynomial constant(Scalar c) { return Polynomial(Vector{c}); }

  /// x^k
  static Polynomial monomial(std::size_t k) {
    Vector c(k + 1);
    c[k] = Scalar{1};
    return Polynomial(std::move(c));
  }

  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  const Vector& coefficients() const { return coeffs_; }

  Scalar coefficient(std::size_t i) const { return i < coeffs_.size() ? coeffs_[i] : Scalar{}; }
  Scalar leading() const { return coeffs_.empty() ? Scalar{} : coeffs_.back(); }
  bool is_monic() const { return !coeffs_.empty() && coeffs_.back() == Scalar{1}; }

  friend bool operator==(const Polynomial&, const Polynomial&) = default;

 private:
  void trim() {
    while (!coeffs_.empty() && coeffs_.back().value == 0) coeffs_.pop_back();
  }

  Vector coeffs_;
};

inline std::ostream& operator<<(std::ostream& os, const Polynomial& f) {
  os << '[';
  for (std::size_t i = 0; i < f.coefficients().size(); ++i) {
    if (i) os << ' ';
    os << f.coefficients()[i];
  }
  return os << ']';
}

/// Horner evaluation.
inline Scalar poly_eval(const PrimeField& field, const Polynomial& f, Scalar x) {
  Scalar acc = field.zero();
  const Vector& c = f.coefficients();
  for (auto it = c.rbegin(); it != c.rend(); ++it) acc = field.add(field.mul(acc, x), *it);
  return acc;
}

inline Polynomial poly_add(const PrimeField& field, const Polynomial& f, const Polynomial& g) {
  std::size_t len = std::max(f.coefficients().size(), g.coefficients().size());
  Vector c(len);
  for (std::size_t i = 0; i < len; ++i) c[i] = field.add(f.coefficient(i), g.coefficient(i));
  return Polynomial(std::move(c));
}

inline Polynomial poly_sub(const PrimeField& field, const Polynomial& f, const Polynomial& g) {
  std::size_t len = std::max(f.coefficients().size(), g.coefficients().size());
  Vector c(len);
  for (std::size_t i = 0; i < len; ++i) c[i] = field.sub(f.coefficient(i), g.coefficient(i));
  return Polynomial(std::move(c));
}

inline Polynomial poly_scale(const PrimeField& field, const Polynomial& f, Scalar a) {
  Vector c = f.coefficients();
  for (Scalar& v : c) v = field.mul(v, a);
  return Polynomial(std::move(c));
}

inline Polynomial poly_mul(const PrimeField& field, const Polynomial& f, const Polynomial& g) {
  if (f.is_zero() || g.is_zero()) return {};
  const Vector& a = f.coefficients();
  const Vector& b = g.coefficients();
  Vector c(a.size() + b.size() - 1);
  for (std::size_t i = 0; i < a.size(); ++i) {
    if (a[i].value == 0) continue;
    for (std::size_t j = 0; j < b.size(); ++j) c[i + j] = field.add(c[i + j], field.mul(a[i], b[j]));
  }
  return Polynomial(std::move(c));
}

inline Polynomial make_monic(const PrimeField& field, const Polynomial& f) {
  if (f.is_zero()) return f;
  return poly_scale(field, f, field.inv(f.leading()));
}

/// Euclidean division g = q*f + r with deg r < deg f.
inline std::pair<Polynomial, Polynomial> poly_divmod(const PrimeField& field, const Polynomial& g,
                                                     const Polynomial& f) {
  if (f.is_zero()) throw DivisionByZero();
  if (g.degree() < f.degree()) return {Polynomial{}, g};
  Vector rem = g.coefficients();
  const Vector& d = f.coefficients();
  const std::size_t df = d.size() - 1;
  const Scalar lead_inv = field.inv(d.back());
  Vector quot(rem.size() - df);
  for (std::size_t k = quot.size(); k-- > 0;) {
    Scalar q = field.mul(rem[k + df], lead_inv);
    quot[k] = q;
    if (q.value == 0) continue;
    for (std::size_t j = 0; j <= df; ++j) rem[k + j] = field.sub(rem[k + j], field.mul(q, d[j]));
  }
  rem.resize(df);
  return {Polynomial(std::move(quot)), Polynomial(std::move(rem))};
}

inline bool poly_divides(const PrimeField& field, const Polynomial& f, const Polynomial& g) {
  if (f.is_zero()) throw std::invalid_argument("poly_divides: divisor is zero");
  return poly_divmod(field, g, f).second.is_zero();
}

/// Monic gcd; gcd(0, 0) = 0.
inline Polynomial poly_gcd(const PrimeField& field, Polynomial a, Polynomial b) {
  while (!b.is_zero()) {
    Polynomial r = poly_divmod(field, a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return make_monic(field, a);
}

/// Monic lcm of two nonzero polynomials.
inline Polynomial poly_lcm(const PrimeField& field, const Polynomial& a, const Polynomial& b) {
  Polynomial g = poly_gcd(field, a, b);
  return make_monic(field, poly_mul(field, poly_divmod(field, a, g).first, b));
}

/// True iff f (of degree e) annihilates the sequence: sum_i f_i s[j+i] = 0
/// for every j with j + e < len(s).
inline bool annihilates(const PrimeField& field, const Polynomial& f, VectorView s) {
  if (f.is_zero()) return true;
  const std::size_t e = static_cast<std::size_t>(f.degree());
  for (std::size_t j = 0; j + e < s.size(); ++j) {
    Scalar acc = field.zero();
    for (std::size_t i = 0; i <= e; ++i) acc = field.add(acc, field.mul(f.coefficient(i), s[j + i]));
    if (acc.value != 0) return false;
  }
  return true;
}

namespace detail {

inline void require_even_sequence(VectorView s) {
  if (s.size() < 2 || s.size() % 2 != 0) {
    throw std::invalid_argument("minimal polynomial needs an even number (>= 2) of terms");
  }
}

}  // namespace detail

/// Monic minimal generating polynomial of a linearly recurrent sequence of
/// 2d terms, by Berlekamp-Massey. The all-zero sequence yields 1.
inline Polynomial minpoly_of_sequence(const PrimeField& field, VectorView s) {
  detail::require_even_sequence(s);
  Vector conn{field.one()};  // connection polynomial C, C[0] = 1
  Vector prev{field.one()};
  std::size_t length = 0;
  std::size_t shift = 1;
  Scalar prev_disc = field.one();

  for (std::size_t i = 0; i < s.size(); ++i) {
    Scalar disc = s[i];
    for (std::size_t j = 1; j <= length && j < conn.size(); ++j) {
      disc = field.add(disc, field.mul(conn[j], s[i - j]));
    }
    if (disc.value == 0) {
      ++shift;
      continue;
    }
    const Scalar coef = field.div(disc, prev_disc);
    Vector updated = conn;
    if (updated.size() < prev.size() + shift) updated.resize(prev.size() + shift);
    for (std::size_t j = 0; j < prev.size(); ++j) {
      updated[j + shift] = field.sub(updated[j + shift], field.mul(coef, prev[j]));
    }
    if (2 * length <= i) {
      prev = std::move(conn);
      length = i + 1 - length;
      prev_disc = disc;
      shift = 1;
    } else {
      ++shift;
    }
    conn = std::move(updated);
  }

  // f(x) = x^L C(1/x)
  Vector f(length + 1);
  for (std::size_t j = 0; j <= length; ++j) f[length - j] = j < conn.size() ? conn[j] : Scalar{};
  return Polynomial(std::move(f));
}

/// Same result as minpoly_of_sequence, through the extended Euclidean
/// algorithm on x^{2d} and the reversed generating polynomial of the sequence,
/// stopped at the first remainder of degree < d.
inline Polynomial minpoly_by_euclid(const PrimeField& field, VectorView s) {
  detail::require_even_sequence(s);
  const std::size_t len = s.size();
  const int half = static_cast<int>(len / 2);

  Vector h(len);
  for (std::size_t i = 0; i < len; ++i) h[len - 1 - i] = s[i];

  Polynomial r0 = Polynomial::monomial(len);
  Polynomial r1{std::move(h)};
  Polynomial t0;
  Polynomial t1 = Polynomial::constant(field.one());
  while (r1.degree() >= half) {
    auto [q, r2] = poly_divmod(field, r0, r1);
    Polynomial t2 = poly_sub(field, t0, poly_mul(field, q, t1));
    r0 = std::move(r1);
    r1 = std::move(r2);
    t0 = std::move(t1);
    t1 = std::move(t2);
  }
  Polynomial f = t1;
  const int target = std::max(t1.degree(), 1 + r1.degree());
  if (target > t1.degree()) f = poly_mul(field, f, Polynomial::monomial(target - t1.degree()));
  return make_monic(field, f);
}

}  // namespace kcert
