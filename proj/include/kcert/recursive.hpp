#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <span>
#include <stdexcept>
#include <vector>

#include "kcert/checkpoint.hpp"
#include "kcert/session.hpp"

namespace kcert {

/// Checks V_i = op V_{i-1} along a committed list with one secret Y:
/// H = Y^T op once, then H V_{i-1} == Y^T V_i for each link.
/// Cost mu + (d-1)(4n-2).
inline void check_krylov_space(Session& session, const MatrixView& op, std::span<const Vector> list,
                               const char* check_id = "krylov-link", u64 depth = 0) {
  if (list.size() < 2) return;
  const PrimeField& field = session.field();
  const OpCounter vc = session.verifier();
  const Vector y = session.challenge(op.dimension());
  const Vector h = op.apply_left(field, y, vc);
  for (std::size_t i = 1; i < list.size(); ++i) {
    session.test(dot(field, h, list[i - 1], vc) == dot(field, y, list[i], vc), Reject{check_id, {depth, i}});
  }
}

/// Session-level wrapper returning an outcome.
inline VerifierOutcome verify_krylov_space(Session& session, const MatrixView& op, std::span<const Vector> list) {
  return session.run([&] { check_krylov_space(session, op, list); });
}

/// Stride for the delegated variant, whose Verifier cost is
/// 2mu + 10Kn + (delta/K)(2K+6n): round(sqrt(0.6 delta)) clamped to [1, delta].
inline u64 choose_K_dense(u64 delta) {
  if (delta == 0) return 1;
  const u64 k = static_cast<u64>(std::llround(std::sqrt(0.6L * static_cast<long double>(delta))));
  return std::clamp<u64>(k, 1, delta);
}

/// Exact fraction with signed components, for the exponent system.
struct Fraction {
  std::int64_t num = 0;
  std::int64_t den = 1;

  Fraction() = default;
  Fraction(std::int64_t n, std::int64_t d = 1) : num(n), den(d) {
    if (den == 0) throw DivisionByZero();
    if (den < 0) {
      num = -num;
      den = -den;
    }
    const std::int64_t g = std::gcd(num < 0 ? -num : num, den);
    if (g > 1) {
      num /= g;
      den /= g;
    }
  }

  friend Fraction operator+(Fraction a, Fraction b) { return {a.num * b.den + b.num * a.den, a.den * b.den}; }
  friend Fraction operator-(Fraction a, Fraction b) { return {a.num * b.den - b.num * a.den, a.den * b.den}; }
  friend Fraction operator*(Fraction a, Fraction b) { return {a.num * b.num, a.den * b.den}; }
  friend Fraction operator/(Fraction a, Fraction b) { return {a.num * b.den, a.den * b.num}; }
  friend bool operator==(const Fraction&, const Fraction&) = default;
  double to_double() const { return static_cast<double>(num) / static_cast<double>(den); }
};

inline std::ostream& operator<<(std::ostream& os, const Fraction& f) { return os << f.num << '/' << f.den; }

/// Stride exponents of a k-level scheme and the strides for a given n.
struct LevelSchedule {
  u64 k = 2;
  std::vector<Fraction> exponents;  // increasing: innermost level first
  std::vector<u64> strides;         // increasing, each dividing the next
  std::vector<Fraction> residual;   // of the balancing system at `exponents`
};

namespace detail {

/// Balancing system for exponents e_1 < ... < e_{k-1}:
///   2e_1 - e_2 = 0,  -e_{i-1} + 2e_i - e_{i+1} = 0,  -e_{k-2} + 2e_{k-1} = 1.
inline std::vector<Fraction> exponent_residual(const std::vector<Fraction>& e) {
  const std::size_t m = e.size();
  std::vector<Fraction> res(m);
  for (std::size_t i = 0; i < m; ++i) {
    Fraction lhs = Fraction(2) * e[i];
    if (i > 0) lhs = lhs - e[i - 1];
    if (i + 1 < m) lhs = lhs - e[i + 1];
    res[i] = lhs - Fraction(i + 1 == m ? 1 : 0);
  }
  return res;
}

/// Thomas algorithm on the system above, in exact arithmetic.
inline std::vector<Fraction> solve_exponents(std::size_t m) {
  std::vector<Fraction> c(m), d(m), x(m);
  for (std::size_t i = 0; i < m; ++i) {
    const Fraction a = i == 0 ? Fraction(0) : Fraction(-1);
    const Fraction b = 2;
    const Fraction cc = i + 1 < m ? Fraction(-1) : Fraction(0);
    const Fraction rhs = i + 1 == m ? Fraction(1) : Fraction(0);
    const Fraction denom = i == 0 ? b : b - a * c[i - 1];
    c[i] = cc / denom;
    d[i] = (i == 0 ? rhs : rhs - a * d[i - 1]) / denom;
  }
  for (std::size_t i = m; i-- > 0;) x[i] = i + 1 == m ? d[i] : d[i] - c[i] * x[i + 1];
  return x;
}

}  // namespace detail

/// Exponents j/k and strides K_j ~ n^{j/k}, rounded so that each stride is a
/// multiple of the previous one (K_1 = round(n^{1/k}),
/// K_j = K_{j-1} * max(1, round(n^{j/k} / K_{j-1}))).
inline LevelSchedule level_schedule(u64 k, u64 n) {
  if (k < 2) throw std::invalid_argument("level_schedule needs k >= 2");
  if (n < 2) throw std::invalid_argument("level_schedule needs n >= 2");
  LevelSchedule s;
  s.k = k;
  s.exponents = detail::solve_exponents(k - 1);
  s.residual = detail::exponent_residual(s.exponents);
  u64 prev = 1;
  for (const Fraction& e : s.exponents) {
    const double target = std::pow(static_cast<double>(n), e.to_double());
    const u64 factor = std::max<u64>(1, static_cast<u64>(std::llround(target / static_cast<double>(prev))));
    prev *= factor;
    s.strides.push_back(prev);
  }
  return s;
}

enum class LevelMode { Direct, Dense, Auto };

/// Strides at or below this are checked directly; delegating them costs more
/// than it saves.
inline constexpr u64 kDirectStrideLimit = 4;

inline CheckpointCertificate certify_level(Session& session, const MatrixView& op, VectorView u, VectorView v0,
                                           u64 delta, std::span<const u64> strides, u64 depth,
                                           LevelMode mode = LevelMode::Auto);

/// Z and T come from Prover-supplied Krylov lists of op^T, each checked
/// with one row product.
inline CheckpointCertificate checkpoint_dense(Session& session, const MatrixView& op, VectorView u, VectorView v0,
                                              u64 delta, u64 stride, u64 depth = 0) {
  const PrimeField& field = session.field();
  const OpCounter vc = session.verifier();
  const std::size_t n = op.dimension();
  CheckpointCertificate cert = request_checkpoints(session, op, u, v0, delta, stride);

  const Vector x = session.challenge_avoiding(u);
  session.send(MessageTag::Giant, {x});
  const MatrixView opt = op.transposed();

  std::vector<Vector> zl{x};
  for (Vector& v : session.ask(KrylovListRequest{opt, x, stride, MessageTag::ZList},
                               std::vector<std::size_t>(stride, n))) {
    zl.push_back(std::move(v));
  }
  check_krylov_space(session, opt, zl, "z-list", depth);

  std::vector<Vector> tl{Vector(u.begin(), u.end())};
  for (Vector& v : session.ask(KrylovListRequest{opt, tl.front(), stride - 1, MessageTag::TList},
                               std::vector<std::size_t>(stride - 1, n))) {
    tl.push_back(std::move(v));
  }
  check_krylov_space(session, opt, tl, "t-list", depth);

  const Vector r = session.challenge(stride);
  CombinationAccumulator acc(field, r, n, tail_length(delta, stride), vc);
  for (const Vector& row : tl) acc.add(row);
  checkpoint_checks(session, cert, x, zl.back(), r, acc.full(), acc.tail(), depth);
  return cert;
}

/// Z is certified as the last checkpoint of a sub-level run on
/// (op^T, U', X); T is committed, then its product with a fresh Psi is
/// certified through a sub-level run on (op, U, Psi). Requires K | delta+1.
inline CheckpointCertificate checkpoint_delegated(Session& session, const MatrixView& op, VectorView u, VectorView v0,
                                                  u64 delta, std::span<const u64> strides, u64 depth) {
  const PrimeField& field = session.field();
  const OpCounter vc = session.verifier();
  const std::size_t n = op.dimension();
  const u64 stride = strides[0];
  const u64 sub = strides[1];
  if ((delta + 1) % stride != 0) throw std::invalid_argument("delegated level needs K | delta+1");
  if (stride % sub != 0) throw std::invalid_argument("delegated level needs nested strides");
  CheckpointCertificate cert = request_checkpoints(session, op, u, v0, delta, stride);

  const Vector x = session.challenge_avoiding(u);
  const Vector u2 = session.challenge(n);
  session.send(MessageTag::Giant, {x, u2});
  // Last checkpoint lands exactly on (op^T)^K X.
  const u64 z_delta = sub == 1 ? stride : stride - 1;
  const CheckpointCertificate zcert = certify_level(session, op.transposed(), u2, x, z_delta, strides.subspan(1),
                                                    depth + 1);
  const Vector& z = zcert.w.back();

  const Vector r = session.challenge(stride);
  session.send(MessageTag::Baby, {r});
  Vector t = session.ask(CombinationRequest{op, Vector(u.begin(), u.end()), r, stride - 1}, {n}).front();

  const Vector psi = session.challenge(n);
  session.send(MessageTag::Psi, {psi});
  const CheckpointCertificate gcert = certify_level(session, op, u, psi, stride - 1, strides.subspan(1), depth + 1);
  session.test(dot(field, r, gcert.s, vc) == dot(field, t, psi, vc), Reject{"combination", {depth}});

  checkpoint_checks(session, cert, x, z, r, t, t, depth);
  return cert;
}

inline CheckpointCertificate certify_level(Session& session, const MatrixView& op, VectorView u, VectorView v0,
                                           u64 delta, std::span<const u64> strides, u64 depth, LevelMode mode) {
  if (strides.empty()) throw std::invalid_argument("certify_level needs a stride");
  const u64 k = strides[0];
  if (mode == LevelMode::Auto) {
    mode = k <= kDirectStrideLimit ? LevelMode::Direct : strides.size() == 1 ? LevelMode::Dense : LevelMode::Auto;
  }
  switch (mode) {
    case LevelMode::Direct: return checkpoint_direct(session, op, u, v0, delta, k, depth);
    case LevelMode::Dense: return checkpoint_dense(session, op, u, v0, delta, k, depth);
    case LevelMode::Auto: break;
  }
  return checkpoint_delegated(session, op, u, v0, delta, strides, depth);
}

/// Sequence length actually certified by a k-level run: padded so that a
/// delegated top stride divides it.
inline u64 klevel_delta(u64 delta, std::span<const u64> strides_decreasing) {
  const u64 k = strides_decreasing[0];
  if (k <= kDirectStrideLimit || strides_decreasing.size() == 1) return delta;
  return ceil_div(delta + 1, k) * k - 1;
}

/// Dense variant: Verifier picks U, V0, then one delegated level.
inline VerifierOutcome verify_dense(Session& session, const MatrixView& op, u64 delta, u64 stride) {
  return session.run([&] {
    const std::size_t n = op.dimension();
    Vector u = session.challenge(n);
    Vector v0 = session.challenge(n);
    session.send(MessageTag::Projections, {u, v0});
    const u64 strides[] = {stride};
    certify_level(session, op, u, v0, delta, strides, 0, LevelMode::Dense);
  });
}

/// k-level recursion over the schedule's strides, largest at the top.
inline VerifierOutcome verify_klevel(Session& session, const MatrixView& op, u64 delta, const LevelSchedule& schedule) {
  return session.run([&] {
    const std::size_t n = op.dimension();
    std::vector<u64> strides(schedule.strides.rbegin(), schedule.strides.rend());
    Vector u = session.challenge(n);
    Vector v0 = session.challenge(n);
    session.send(MessageTag::Projections, {u, v0});
    certify_level(session, op, u, v0, klevel_delta(delta, strides), strides, 0);
  });
}

}  // namespace kcert
