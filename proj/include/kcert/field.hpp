#pragma once

#include <compare>
#include <cstdint>
#include <ostream>
#include <span>
#include <stdexcept>
#include <vector>

#include "kcert/errors.hpp"

#if !defined(__SIZEOF_INT128__)
#error "kcert requires unsigned __int128 (GCC/Clang)."
#endif

namespace kcert {

using u64 = std::uint64_t;
using u128 = unsigned __int128;

/// Element of GF(p). Always holds the canonical residue in [0, p); only a
/// PrimeField produces values, so the invariant is maintained there.
struct Scalar {
  u64 value = 0;

  friend constexpr bool operator==(Scalar, Scalar) = default;
  friend constexpr auto operator<=>(Scalar, Scalar) = default;
};

inline std::ostream& operator<<(std::ostream& os, Scalar s) { return os << s.value; }

using Vector = std::vector<Scalar>;
using VectorView = std::span<const Scalar>;

namespace detail {

inline u64 mulmod_generic(u64 a, u64 b, u64 m) {
  return static_cast<u64>((static_cast<u128>(a) * b) % m);
}

inline u64 powmod_generic(u64 base, u64 exp, u64 m) {
  u64 result = 1 % m;
  base %= m;
  while (exp != 0) {
    if (exp & 1U) result = mulmod_generic(result, base, m);
    base = mulmod_generic(base, base, m);
    exp >>= 1U;
  }
  return result;
}

}  // namespace detail

/// Miller-Rabin with the first twelve prime bases, which is exact for every
/// 64-bit input.
inline bool is_prime_u64(u64 n) {
  if (n < 2) return false;
  constexpr u64 kBases[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37};
  for (u64 q : kBases) {
    if (n % q == 0) return n == q;
  }
  u64 d = n - 1;
  unsigned s = 0;
  while ((d & 1U) == 0) {
    d >>= 1U;
    ++s;
  }
  for (u64 a : kBases) {
    u64 x = detail::powmod_generic(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool composite = true;
    for (unsigned r = 1; r < s; ++r) {
      x = detail::mulmod_generic(x, x, n);
      if (x == n - 1) {
        composite = false;
        break;
      }
    }
    if (composite) return false;
  }
  return true;
}

inline constexpr u64 kMersenne61 = (u64{1} << 61) - 1;

/// GF(p) for a word-sized prime 2 < p < 2^62, together with the sample set
/// {0, ..., sample_set_size-1} that challenges are drawn from.
class PrimeField {
 public:
  explicit PrimeField(u64 p, u64 sample_set_size = 0)
      : p_(p), sample_set_size_(sample_set_size == 0 ? p : sample_set_size) {
    if (p <= 2 || p >= (u64{1} << 62)) {
      throw std::invalid_argument("modulus must satisfy 2 < p < 2^62");
    }
    if (!is_prime_u64(p)) throw std::invalid_argument("modulus is not prime");
    if (sample_set_size_ > p) throw std::invalid_argument("sample set larger than the field");
    mersenne61_ = (p == kMersenne61);
  }

  u64 modulus() const { return p_; }
  u64 sample_set_size() const { return sample_set_size_; }

  PrimeField with_sample_set(u64 size) const { return PrimeField(p_, size); }

  Scalar zero() const { return Scalar{0}; }
  Scalar one() const { return Scalar{1}; }

  Scalar from_u64(u64 v) const { return Scalar{v % p_}; }

  Scalar from_i64(std::int64_t v) const {
    if (v >= 0) return from_u64(static_cast<u64>(v));
    u64 mag = static_cast<u64>(-(v + 1)) + 1;
    return neg(from_u64(mag));
  }

  Scalar add(Scalar a, Scalar b) const {
    u64 s = a.value + b.value;
    return Scalar{s >= p_ ? s - p_ : s};
  }

  Scalar sub(Scalar a, Scalar b) const {
    return Scalar{a.value >= b.value ? a.value - b.value : a.value + p_ - b.value};
  }

  Scalar neg(Scalar a) const { return Scalar{a.value == 0 ? 0 : p_ - a.value}; }

  Scalar mul(Scalar a, Scalar b) const {
    u128 t = static_cast<u128>(a.value) * b.value;
    if (mersenne61_) {
      u64 r = (static_cast<u64>(t) & kMersenne61) + static_cast<u64>(t >> 61);
      r = (r & kMersenne61) + (r >> 61);
      return Scalar{r >= kMersenne61 ? r - kMersenne61 : r};
    }
    return Scalar{static_cast<u64>(t % p_)};
  }

  Scalar inv(Scalar a) const {
    if (a.value == 0) throw DivisionByZero();
    // Extended Euclid on (a, p); coefficients tracked mod p.
    std::int64_t t0 = 0, t1 = 1;
    u64 r0 = p_, r1 = a.value;
    while (r1 != 0) {
      u64 q = r0 / r1;
      u64 r2 = r0 - q * r1;
      r0 = r1;
      r1 = r2;
      std::int64_t t2 = t0 - static_cast<std::int64_t>(q) * t1;
      t0 = t1;
      t1 = t2;
    }
    return from_i64(t0);
  }

  Scalar div(Scalar a, Scalar b) const { return mul(a, inv(b)); }

  Scalar pow(Scalar base, u64 exp) const {
    Scalar result = one();
    while (exp != 0) {
      if (exp & 1U) result = mul(result, base);
      base = mul(base, base);
      exp >>= 1U;
    }
    return result;
  }

  bool contains(u64 v) const { return v < p_; }

  friend bool operator==(const PrimeField& a, const PrimeField& b) {
    return a.p_ == b.p_ && a.sample_set_size_ == b.sample_set_size_;
  }

 private:
  u64 p_;
  u64 sample_set_size_;
  bool mersenne61_ = false;
};

}  // namespace kcert
