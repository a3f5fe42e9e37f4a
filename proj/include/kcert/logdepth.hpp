#pragma once

#include <bit>
#include <cstddef>
#include <string>
#include <vector>

#include "kcert/field.hpp"
#include "kcert/ledger.hpp"
#include "kcert/session.hpp"
#include "kcert/sparse_matrix.hpp"

namespace kcert {

enum class PowerVariant { Log, Single };

inline std::string to_string(PowerVariant v) { return v == PowerVariant::Log ? "log" : "single"; }

/// ceil(log2 d) for d >= 1.
inline u64 ceil_log2(u64 d) { return d <= 1 ? 0 : static_cast<u64>(std::bit_width(d - 1)); }

/// Exponent used for a single-matvec power certificate of A^d: max(1, ceil(log2 d)).
inline u64 power_single_exponent(u64 d) { return std::max<u64>(1, ceil_log2(d)); }

// Honest Prover side.

struct PowerLogCert {
  Vector z;       // op^d V
  Vector z_half;  // op^{floor(d/2)} V
};

struct PowerSingleCert {
  Vector z_t;       // op^{2^t} V
  Vector z;         // op^d V
  Vector z_t_prev;  // op^{2^{t-1}} V
};

struct SequenceCert {
  Vector w;       // op^d V
  Vector w_half;  // op^{d/2} V
  Vector s;       // U^T op^i V, i = 0..d
};

inline PowerLogCert prove_power_log(const PrimeField& field, const MatrixView& op, VectorView v, u64 d,
                                    OpCounter counter = {}) {
  PowerLogCert c;
  Vector x(v.begin(), v.end());
  for (u64 i = 1; i <= d; ++i) {
    if (i - 1 == d / 2) c.z_half = x;
    x = op.apply(field, x, counter);
  }
  if (d / 2 == d) c.z_half = x;
  c.z = std::move(x);
  return c;
}

inline PowerSingleCert prove_power_single(const PrimeField& field, const MatrixView& op, VectorView v, u64 d, u64 t,
                                          OpCounter counter = {}) {
  PowerSingleCert c;
  const u64 top = u64{1} << t;
  const u64 half = top >> 1;
  const u64 last = std::max(top, d);
  Vector x(v.begin(), v.end());
  for (u64 i = 0;; ++i) {
    if (i == half) c.z_t_prev = x;
    if (i == d) c.z = x;
    if (i == top) c.z_t = x;
    if (i == last) break;
    x = op.apply(field, x, counter);
  }
  return c;
}

inline SequenceCert prove_sequence(const PrimeField& field, const MatrixView& op, VectorView u, VectorView v, u64 d,
                                   OpCounter counter = {}) {
  SequenceCert c;
  Vector x(v.begin(), v.end());
  c.s.reserve(d + 1);
  c.s.push_back(dot(field, u, x, counter));
  for (u64 i = 1; i <= d; ++i) {
    x = op.apply(field, x, counter);
    c.s.push_back(dot(field, u, x, counter));
    if (i == d / 2) c.w_half = x;
  }
  if (d == 0) c.w_half = x;
  c.w = std::move(x);
  return c;
}

/// T with T^T = sum_{i=0}^{d} r[i] U^T op^i.
inline Vector prove_combination(const PrimeField& field, const MatrixView& op, VectorView u, VectorView r, u64 d,
                                OpCounter counter = {}) {
  detail::require_length(r.size(), d + 1, "prove_combination R");
  Vector t(u.size());
  Vector row(u.begin(), u.end());
  axpy(field, r[0], row, t, counter);
  for (u64 i = 1; i <= d; ++i) {
    row = op.apply_left(field, row, counter);
    axpy(field, r[i], row, t, counter);
  }
  return t;
}

// Verifier side. Each check_* assumes the Prover's claim for this level is
// already committed and throws CheckFailed on the first failing test.

/// Z = op^d V and Z_half = op^{floor(d/2)} V, halving d through op^T.
inline void check_power_log(Session& session, const MatrixView& op, VectorView v, u64 d, VectorView z,
                            VectorView z_half, u64 depth = 0) {
  const PrimeField& field = session.field();
  const OpCounter vc = session.verifier();
  const std::size_t n = op.dimension();
  if (d == 1) {
    Session::require(std::equal(z_half.begin(), z_half.end(), v.begin(), v.end()), Reject{"power-log", {depth, 0}});
    const Vector av = op.apply(field, v, vc);
    Session::require(std::equal(z.begin(), z.end(), av.begin(), av.end()), Reject{"power-log", {depth, 1}});
    return;
  }
  const Vector w = session.challenge(n);
  session.send(MessageTag::PowerChallenge, {w});
  const MatrixView opt = op.transposed();
  Payload y = session.ask(PowerLogRequest{opt, w, d / 2}, {n, n});
  check_power_log(session, opt, w, d / 2, y[0], y[1], depth + 1);
  session.test(dot(field, w, z_half, vc) == dot(field, y[0], v, vc), Reject{"power-log", {depth, 1}});
  if (d % 2 == 0) {
    session.test(dot(field, w, z, vc) == dot(field, y[0], z_half, vc), Reject{"power-log", {depth, 2}});
  } else {
    const Vector az = op.apply(field, z_half, vc);
    session.test(dot(field, w, z, vc) == dot(field, y[0], az, vc), Reject{"power-log", {depth, 2}});
  }
}

/// Z_t = op^{2^t} V, Z = op^d V, Z_{t-1} = op^{2^{t-1}} V with 2^t >= d, using
/// a single application of op in total.
inline void check_power_single(Session& session, const MatrixView& op, VectorView v, u64 d, u64 t, VectorView z_t,
                               VectorView z, VectorView z_t_prev, u64 depth = 0) {
  const PrimeField& field = session.field();
  const OpCounter vc = session.verifier();
  const std::size_t n = op.dimension();
  if (t == 1) {
    const Vector w = session.challenge(n);
    const Vector y = op.transposed().apply(field, w, vc);
    session.test(dot(field, w, z_t_prev, vc) == dot(field, y, v, vc), Reject{"power-single", {depth, 1}});
    session.test(dot(field, w, z_t, vc) == dot(field, y, z_t_prev, vc), Reject{"power-single", {depth, 3}});
    VectorView expect = d == 2 ? z_t : z_t_prev;
    Session::require(std::equal(z.begin(), z.end(), expect.begin(), expect.end()), Reject{"power-single", {depth, 2}});
    return;
  }
  const u64 half = u64{1} << (t - 1);
  const bool split = d > half;
  const u64 sub_d = split ? d - half : d;
  const Vector w = session.challenge(n);
  session.send(MessageTag::PowerChallenge, {w});
  const MatrixView opt = op.transposed();
  Payload y = session.ask(PowerSingleRequest{opt, w, sub_d, t - 1}, {n, n, n});
  check_power_single(session, opt, w, sub_d, t - 1, y[0], y[1], y[2], depth + 1);
  // y[0] = (op^T)^{2^{t-1}} W, y[1] = (op^T)^{sub_d} W.
  session.test(dot(field, w, z_t_prev, vc) == dot(field, y[0], v, vc), Reject{"power-single", {depth, 1}});
  session.test(dot(field, w, z, vc) == dot(field, y[1], split ? z_t_prev : v, vc), Reject{"power-single", {depth, 2}});
  session.test(dot(field, w, z_t, vc) == dot(field, y[0], z_t_prev, vc), Reject{"power-single", {depth, 3}});
}

/// Asks for and checks a certificate of op^d V; returns op^d V.
inline Vector certified_power(Session& session, const MatrixView& op, VectorView v, u64 d, PowerVariant variant,
                              u64 depth) {
  const std::size_t n = op.dimension();
  Vector vv(v.begin(), v.end());
  if (variant == PowerVariant::Log) {
    Payload c = session.ask(PowerLogRequest{op, vv, d}, {n, n});
    check_power_log(session, op, v, d, c[0], c[1], depth);
    return std::move(c[0]);
  }
  const u64 t = power_single_exponent(d);
  Payload c = session.ask(PowerSingleRequest{op, vv, d, t}, {n, n, n});
  check_power_single(session, op, v, d, t, c[0], c[1], c[2], depth);
  return std::move(c[1]);
}

inline Vector check_combination(Session& session, const MatrixView& op, VectorView u, VectorView r, u64 d,
                                PowerVariant variant, u64 depth);

/// (W, W_half, s) = (op^d V, op^{d/2} V, (U^T op^i V)_{i<=d}) for even d >= 2.
inline void check_sequence(Session& session, const MatrixView& op, VectorView u, VectorView v, u64 d,
                           VectorView w, VectorView w_half, VectorView s, PowerVariant variant, u64 depth = 0) {
  const PrimeField& field = session.field();
  const OpCounter vc = session.verifier();
  const std::size_t n = op.dimension();
  if (d < 2 || d % 2 != 0) throw std::invalid_argument("sequence certificate needs even d >= 2");
  if (d == 2) {
    auto same = [](VectorView a, VectorView b) { return std::equal(a.begin(), a.end(), b.begin(), b.end()); };
    Session::require(s[0] == dot(field, u, v, vc), Reject{"seq-base", {depth, 0}});
    const Vector av = op.apply(field, v, vc);
    Session::require(same(w_half, av), Reject{"seq-base", {depth, 1}});
    Session::require(s[1] == dot(field, u, w_half, vc), Reject{"seq-base", {depth, 2}});
    const Vector aw = op.apply(field, w_half, vc);
    Session::require(same(w, aw), Reject{"seq-base", {depth, 3}});
    Session::require(s[2] == dot(field, u, w, vc), Reject{"seq-base", {depth, 4}});
    return;
  }
  const u64 h = d / 2;
  const Vector x = session.challenge(n);
  session.send(MessageTag::Giant, {x});
  const Vector z = certified_power(session, op.transposed(), x, h, variant, depth + 1);
  session.test(dot(field, x, w_half, vc) == dot(field, z, v, vc), Reject{"seq", {depth, d, 1}});
  session.test(dot(field, x, w, vc) == dot(field, z, w_half, vc), Reject{"seq", {depth, d, 2}});

  const Vector r = session.challenge(h + 1);
  session.send(MessageTag::Baby, {r});
  const Vector t = check_combination(session, op, u, r, h, variant, depth + 1);
  session.test(dot(field, r, s.first(h + 1), vc) == dot(field, t, v, vc), Reject{"seq", {depth, d, 3}});
  session.test(dot(field, r, s.subspan(h, h + 1), vc) == dot(field, t, w_half, vc), Reject{"seq", {depth, d, 4}});
}

/// Asks for T = sum r[i] U^T op^i, certifies it against a fresh Psi through a
/// sequence certificate of (U, op, Psi), and returns it.
inline Vector check_combination(Session& session, const MatrixView& op, VectorView u, VectorView r, u64 d,
                                PowerVariant variant, u64 depth) {
  const PrimeField& field = session.field();
  const OpCounter vc = session.verifier();
  const std::size_t n = op.dimension();
  detail::require_length(r.size(), d + 1, "check_combination R");
  Vector t = session.ask(CombinationRequest{op, Vector(u.begin(), u.end()), Vector(r.begin(), r.end()), d}, {n})
                 .front();
  const Vector psi = session.challenge(n);
  session.send(MessageTag::Psi, {psi});
  Scalar lhs;
  if (d == 0) {
    lhs = field.mul(r[0], dot(field, u, psi, vc));
    vc.ops(1);
  } else {
    const u64 de = d + (d % 2);
    Payload c = session.ask(SequenceRequest{op, Vector(u.begin(), u.end()), psi, de}, {n, n, de + 1});
    check_sequence(session, op, u, psi, de, c[0], c[1], c[2], variant, depth + 1);
    lhs = dot(field, r, VectorView(c[2]).first(d + 1), vc);
  }
  session.test(lhs == dot(field, t, psi, vc), Reject{"combination", {depth, d}});
  return t;
}

/// Even length actually certified for a requested delta.
inline u64 sequence_degree(u64 delta) { return std::max<u64>(2, delta + (delta % 2)); }

/// Standalone protocols: the Verifier picks the starting vectors, the Prover
/// commits, the Verifier checks.
inline VerifierOutcome verify_power_log(Session& session, const MatrixView& op, u64 d) {
  return session.run([&] {
    const Vector v = session.challenge(op.dimension());
    session.send(MessageTag::Projections, {v});
    certified_power(session, op, v, d, PowerVariant::Log, 0);
  });
}

inline VerifierOutcome verify_power_single(Session& session, const MatrixView& op, u64 d) {
  return session.run([&] {
    const Vector v = session.challenge(op.dimension());
    session.send(MessageTag::Projections, {v});
    certified_power(session, op, v, d, PowerVariant::Single, 0);
  });
}

inline VerifierOutcome verify_sequence_cert(Session& session, const MatrixView& op, u64 delta, PowerVariant variant) {
  return session.run([&] {
    const std::size_t n = op.dimension();
    const Vector u = session.challenge(n);
    const Vector v = session.challenge(n);
    session.send(MessageTag::Projections, {u, v});
    const u64 d = sequence_degree(delta);
    Payload c = session.ask(SequenceRequest{op, u, v, d}, {n, n, d + 1});
    check_sequence(session, op, u, v, d, c[0], c[1], c[2], variant);
  });
}

inline VerifierOutcome verify_combination_cert(Session& session, const MatrixView& op, u64 d, PowerVariant variant) {
  return session.run([&] {
    const Vector u = session.challenge(op.dimension());
    session.send(MessageTag::Projections, {u});
    const Vector r = session.challenge(d + 1);
    session.send(MessageTag::Baby, {r});
    check_combination(session, op, u, r, d, variant, 0);
  });
}

}  // namespace kcert
