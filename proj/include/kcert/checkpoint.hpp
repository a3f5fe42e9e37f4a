#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <vector>

#include "kcert/field.hpp"
#include "kcert/ledger.hpp"
#include "kcert/session.hpp"
#include "kcert/sparse_matrix.hpp"

namespace kcert {

/// Checkpoint stride minimizing the Verifier cost 2K(mu+n) + (delta/K)(2K+6n):
/// round(sqrt(3 n delta / (mu + n))) clamped to [1, min(n, delta)].
inline u64 choose_K(u64 n, u64 delta, u64 mu) {
  if (n == 0 || delta == 0) return 1;
  const long double x = 3.0L * static_cast<long double>(n) * static_cast<long double>(delta) /
                        (static_cast<long double>(mu) + static_cast<long double>(n));
  const u64 k = static_cast<u64>(std::llround(std::sqrt(x)));
  return std::clamp<u64>(k, 1, std::min(n, delta));
}

/// Verifier cost bound of the checkpoint protocol for stride K.
inline u64 checkpoint_cost_bound(u64 n, u64 delta, u64 mu, u64 k) {
  return 2 * k * (mu + n) + ((delta + k - 1) / k) * (2 * k + 6 * n);
}

inline u64 ceil_div(u64 a, u64 b) { return (a + b - 1) / b; }

/// Committed sequence with checkpoints every `stride` steps. w[0] is V0
/// (known to both sides, never sent); the last checkpoint may lie past delta.
struct CheckpointCertificate {
  u64 stride = 1;
  std::vector<Vector> w;  // w[j] = op^{jK} V0, j = 0..ceil(delta/K)
  Vector s;               // s[i] = U^T op^i V0, i = 0..delta

  u64 delta() const { return s.empty() ? 0 : s.size() - 1; }

  Payload to_payload() const {
    Payload p(w.begin() + (w.empty() ? 0 : 1), w.end());
    p.push_back(s);
    return p;
  }

  static CheckpointCertificate from_payload(VectorView v0, u64 stride, Payload payload) {
    CheckpointCertificate c;
    c.stride = stride;
    c.s = std::move(payload.back());
    payload.pop_back();
    c.w.reserve(payload.size() + 1);
    c.w.emplace_back(v0.begin(), v0.end());
    for (Vector& v : payload) c.w.push_back(std::move(v));
    return c;
  }

  /// Message shape for the given dimensions.
  static std::vector<std::size_t> shape(std::size_t n, u64 delta, u64 stride) {
    std::vector<std::size_t> sh(ceil_div(delta, stride), n);
    sh.push_back(delta + 1);
    return sh;
  }
};

/// Honest commitment: one pass over V_i up to the last checkpoint.
inline CheckpointCertificate prove_checkpoint(const PrimeField& field, const MatrixView& op, VectorView u,
                                              VectorView v0, u64 delta, u64 stride, OpCounter counter = {}) {
  if (stride == 0) throw std::invalid_argument("checkpoint stride must be positive");
  detail::require_length(u.size(), op.dimension(), "prove_checkpoint U");
  detail::require_length(v0.size(), op.dimension(), "prove_checkpoint V0");
  CheckpointCertificate c;
  c.stride = stride;
  const u64 last = ceil_div(delta, stride) * stride;
  Vector v(v0.begin(), v0.end());
  c.w.push_back(v);
  c.s.reserve(delta + 1);
  c.s.push_back(dot(field, u, v, counter));
  for (u64 i = 1; i <= std::max(last, delta); ++i) {
    v = op.apply(field, v, counter);
    if (i <= delta) c.s.push_back(dot(field, u, v, counter));
    if (i % stride == 0 && i <= last) c.w.push_back(v);
  }
  return c;
}

/// Accumulates T = sum_i r[i] row_i and remembers the partial sum over the
/// first `tail` rows, which is what a shorter final block is checked against.
class CombinationAccumulator {
 public:
  CombinationAccumulator(const PrimeField& field, VectorView r, std::size_t n, std::size_t tail, OpCounter counter)
      : field_(&field), r_(r), t_(n), tail_(tail), counter_(counter) {
    if (tail_ == 0) tail_t_ = t_;
  }

  void add(VectorView row) {
    axpy(*field_, r_[used_], row, t_, counter_);
    if (++used_ == tail_) tail_t_ = t_;
  }

  const Vector& full() const { return t_; }
  const Vector& tail() const { return tail_t_; }

 private:
  const PrimeField* field_;
  VectorView r_;
  Vector t_;
  Vector tail_t_;
  std::size_t used_ = 0;
  std::size_t tail_;
  OpCounter counter_;
};

/// Length of the final block of s[0..delta] cut into strides of K.
inline u64 tail_length(u64 delta, u64 stride) { return delta + 1 - (delta / stride) * stride; }

/// Giant-step and baby-step checks, given Z = X^T op^K as a vector, the
/// secret R and the combinations T (full) and T_tail (first tail_length rows).
///   checkpoint j:     X^T W_j  == Z^T W_{j-1},                 j = 1..ceil(delta/K)
///   sequence-block j: sum_i r[i] s[jK+i] == T W_j (T_tail if short), j = 0..floor(delta/K)
inline void checkpoint_checks(Session& session, const CheckpointCertificate& cert, VectorView x, VectorView z,
                              VectorView r, VectorView t, VectorView t_tail, u64 depth) {
  const PrimeField& field = session.field();
  const OpCounter vc = session.verifier();
  const u64 k = cert.stride;
  const u64 delta = cert.delta();
  for (u64 j = 1; j < cert.w.size(); ++j) {
    session.test(dot(field, x, cert.w[j], vc) == dot(field, z, cert.w[j - 1], vc), Reject{"checkpoint", {depth, j}});
  }
  for (u64 j = 0; j * k <= delta; ++j) {
    const u64 len = std::min<u64>(k, delta + 1 - j * k);
    const Scalar lhs = dot(field, r.first(len), VectorView(cert.s).subspan(j * k, len), vc);
    const Scalar rhs = dot(field, len == k ? t : t_tail, cert.w[j], vc);
    session.test(lhs == rhs, Reject{"sequence-block", {depth, j}});
  }
}

/// Asks for the checkpoint commitment of (op, U, V0, delta, K).
inline CheckpointCertificate request_checkpoints(Session& session, const MatrixView& op, VectorView u, VectorView v0,
                                                 u64 delta, u64 stride) {
  Payload reply = session.ask(CheckpointRequest{op, Vector(u.begin(), u.end()), Vector(v0.begin(), v0.end()), delta,
                                                stride},
                              CheckpointCertificate::shape(op.dimension(), delta, stride));
  return CheckpointCertificate::from_payload(v0, stride, std::move(reply));
}

/// The Verifier computes Z and T itself: K row products for Z, K-1 for T.
inline CheckpointCertificate checkpoint_direct(Session& session, const MatrixView& op, VectorView u, VectorView v0,
                                               u64 delta, u64 stride, u64 depth = 0) {
  const PrimeField& field = session.field();
  const OpCounter vc = session.verifier();
  CheckpointCertificate cert = request_checkpoints(session, op, u, v0, delta, stride);

  const Vector x = session.challenge_avoiding(u);
  const Vector r = session.challenge(stride);

  Vector z = x;
  for (u64 i = 0; i < stride; ++i) z = op.apply_left(field, z, vc);

  CombinationAccumulator acc(field, r, op.dimension(), tail_length(delta, stride), vc);
  Vector row(u.begin(), u.end());
  acc.add(row);
  for (u64 i = 1; i < stride; ++i) {
    row = op.apply_left(field, row, vc);
    acc.add(row);
  }
  checkpoint_checks(session, cert, x, z, r, acc.full(), acc.tail(), depth);
  return cert;
}

/// Full checkpoint protocol: the Verifier picks U and V0, then runs the
/// direct variant.
inline VerifierOutcome verify_checkpoint(Session& session, const MatrixView& op, u64 delta, u64 stride) {
  return session.run([&] {
    const std::size_t n = op.dimension();
    Vector u = session.challenge(n);
    Vector v0 = session.challenge(n);
    session.send(MessageTag::Projections, {u, v0});
    checkpoint_direct(session, op, u, v0, delta, stride);
  });
}

}  // namespace kcert
