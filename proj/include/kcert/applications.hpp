#pragma once

#include <algorithm>
#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "kcert/checkpoint.hpp"
#include "kcert/logdepth.hpp"
#include "kcert/polynomial.hpp"
#include "kcert/recursive.hpp"
#include "kcert/session.hpp"
#include "kcert/sparse_matrix.hpp"

namespace kcert {

/// Which certificate vouches for a Krylov sequence inside an application.
enum class SequenceKind : u64 { Checkpoint = 1, Dense = 2, KLevel = 3, SeqLog = 4, SeqSingle = 5 };

struct SequenceProtocol {
  SequenceKind kind = SequenceKind::SeqSingle;
  u64 param = 0;  // stride K (0 = optimal) or depth k, by kind
};

/// Certified s[0..delta] (possibly longer) of (op, U, V0). U and V0 must
/// already be known to the Prover.
inline Vector certify_sequence(Session& session, const MatrixView& op, VectorView u, VectorView v0, u64 delta,
                               const SequenceProtocol& protocol, u64 depth = 0) {
  const std::size_t n = op.dimension();
  switch (protocol.kind) {
    case SequenceKind::Checkpoint: {
      const u64 k[] = {protocol.param ? protocol.param : choose_K(n, delta, op.mu())};
      return certify_level(session, op, u, v0, delta, k, depth, LevelMode::Direct).s;
    }
    case SequenceKind::Dense: {
      const u64 k[] = {protocol.param ? protocol.param : choose_K_dense(delta)};
      return certify_level(session, op, u, v0, delta, k, depth, LevelMode::Dense).s;
    }
    case SequenceKind::KLevel: {
      const LevelSchedule schedule = level_schedule(protocol.param, std::max<u64>(n, 2));
      std::vector<u64> strides(schedule.strides.rbegin(), schedule.strides.rend());
      return certify_level(session, op, u, v0, klevel_delta(delta, strides), strides, depth).s;
    }
    case SequenceKind::SeqLog:
    case SequenceKind::SeqSingle: {
      const PowerVariant variant = protocol.kind == SequenceKind::SeqLog ? PowerVariant::Log : PowerVariant::Single;
      const u64 d = sequence_degree(delta);
      Payload c = session.ask(SequenceRequest{op, Vector(u.begin(), u.end()), Vector(v0.begin(), v0.end()), d},
                              {n, n, d + 1});
      check_sequence(session, op, u, v0, d, c[0], c[1], c[2], variant, depth);
      return std::move(c[2]);
    }
  }
  throw std::invalid_argument("unknown sequence protocol");
}

/// True when |S| is too small for the applications' failure probabilities
/// (below 100 n^2) to be negligible.
inline bool sample_set_too_small(const PrimeField& field, std::size_t n) {
  return static_cast<long double>(field.sample_set_size()) < 100.0L * n * n;
}

/// One projection: Verifier sends U, V0; the Prover claims the minimal
/// polynomial of the projected sequence; the Verifier certifies 2n terms and
/// recomputes it.
inline Polynomial minpoly_projection(Session& session, const MatrixView& op, const SequenceProtocol& protocol,
                                     u64 index) {
  const std::size_t n = op.dimension();
  const Vector u = session.challenge(n);
  const Vector v0 = session.challenge(n);
  session.send(MessageTag::Projections, {u, v0});
  Polynomial claim(session.ask(MinPolyClaimRequest{op, u, v0, 2 * n}, {kUpToDegreeN}).front());
  Session::require(claim.is_monic(), Reject{"minpoly-shape", {index}});
  const Vector s = certify_sequence(session, op, u, v0, 2 * n, protocol);
  const Polynomial f = minpoly_of_sequence(session.field(), VectorView(s).first(2 * n));
  Session::require(claim == f, Reject{"minpoly-claim", {index}});
  return f;
}

/// Least common multiple over `projections` certified projections. Divides
/// the minimal polynomial of op; equal to it with high probability.
inline Polynomial minpoly_certified(Session& session, const MatrixView& op, const SequenceProtocol& protocol,
                                    u64 projections = 1) {
  Polynomial result = Polynomial::constant(session.field().one());
  for (u64 j = 0; j < std::max<u64>(projections, 1); ++j) {
    result = poly_lcm(session.field(), result, minpoly_projection(session, op, protocol, j));
  }
  return result;
}

/// B = diag(d) A.
inline SparseMatrix scale_rows(const SparseMatrix& a, const PrimeField& field, VectorView d) {
  detail::require_length(d.size(), a.dimension(), "scale_rows");
  std::vector<Entry> entries = a.entries();
  for (Entry& e : entries) e.value = field.mul(d[e.row], e.value);
  return SparseMatrix(a.dimension(), a.modulus(), std::move(entries));
}

/// lambda I - A.
inline SparseMatrix shifted_negation(const SparseMatrix& a, const PrimeField& field, Scalar lambda) {
  std::vector<Entry> entries;
  entries.reserve(a.nnz() + a.dimension());
  for (const Entry& e : a.entries()) entries.push_back({e.row, e.col, field.neg(e.value)});
  for (std::size_t i = 0; i < a.dimension(); ++i) entries.push_back({i, i, lambda});
  return SparseMatrix(a.dimension(), a.modulus(), std::move(entries));
}

/// Verifier's diagonal preconditioner: B = D A with d_i uniform in S \ {0}.
inline std::pair<SparseMatrix, Vector> precondition_diagonal(Session& session, const SparseMatrix& a) {
  Vector d = session.challenge(a.dimension(), 1);
  session.send(MessageTag::Preconditioner, {d});
  SparseMatrix b = scale_rows(a, session.field(), d);
  return {std::move(b), std::move(d)};
}

/// Fresh preconditioners tried before giving up on a full-degree minimal polynomial.
inline constexpr u64 kPreconditionAttempts = 3;

inline Scalar det_certified(Session& session, const SparseMatrix& a, const SequenceProtocol& protocol) {
  const PrimeField& field = session.field();
  const std::size_t n = a.dimension();
  if (field.sample_set_size() < 2) throw std::invalid_argument("determinant certificate needs |S| >= 2");
  const Scalar claim = session.ask(DetClaimRequest{&a}, {1}).front().front();
  if (claim.value == 0) {
    const Vector w = session.ask(KernelRequest{&a}, {n}).front();
    Session::require(std::any_of(w.begin(), w.end(), [](Scalar x) { return x.value != 0; }),
                     Reject{"kernel-witness", {0}});
    const Vector aw = matvec(field, a, w, session.verifier());
    Session::require(std::all_of(aw.begin(), aw.end(), [](Scalar x) { return x.value == 0; }),
                     Reject{"kernel-witness", {1}});
    return claim;
  }
  for (u64 attempt = 0; attempt < kPreconditionAttempts; ++attempt) {
    auto [b, d] = precondition_diagonal(session, a);
    const Polynomial f = minpoly_projection(session, MatrixView(b), protocol, attempt);
    if (f.degree() != static_cast<int>(n)) continue;
    Scalar prod = field.one();
    for (Scalar di : d) prod = field.mul(prod, di);
    Scalar det = field.div(f.coefficient(0), prod);
    if (n % 2 == 1) det = field.neg(det);
    session.verifier().ops(n + 2);
    Session::require(det == claim, Reject{"det-claim", {attempt}});
    return det;
  }
  throw CheckFailed(Reject{"degree-deficient", {kPreconditionAttempts}});
}

inline Polynomial charpoly_certified(Session& session, const SparseMatrix& a, const SequenceProtocol& protocol) {
  const PrimeField& field = session.field();
  const std::size_t n = a.dimension();
  Polynomial g(session.ask(CharPolyClaimRequest{&a}, {n + 1}).front());
  Session::require(g.degree() == static_cast<int>(n) && g.is_monic(), Reject{"charpoly-shape", {}});
  const Scalar lambda = session.challenge_scalar();
  session.send(MessageTag::Lambda, {{lambda}});
  const SparseMatrix c = shifted_negation(a, field, lambda);
  const Scalar det = det_certified(session, c, protocol);
  session.verifier().ops(2 * n);
  session.test(poly_eval(field, g, lambda) == det, Reject{"charpoly-eval", {}}, n);
  return g;
}

template <class T>
struct Certified {
  T value;
  VerifierOutcome outcome;
};

namespace detail {

template <class T, class F>
Certified<T> certified(Session& session, F&& body) {
  T value{};
  VerifierOutcome outcome = session.run([&] { value = body(); });
  return {std::move(value), std::move(outcome)};
}

}  // namespace detail

inline Certified<Polynomial> certify_minpoly(Session& session, const SparseMatrix& a, const SequenceProtocol& protocol,
                                             u64 projections = 1) {
  return detail::certified<Polynomial>(session,
                                       [&] { return minpoly_certified(session, MatrixView(a), protocol, projections); });
}

inline Certified<Scalar> certify_det(Session& session, const SparseMatrix& a, const SequenceProtocol& protocol) {
  return detail::certified<Scalar>(session, [&] { return det_certified(session, a, protocol); });
}

inline Certified<Polynomial> certify_charpoly(Session& session, const SparseMatrix& a,
                                              const SequenceProtocol& protocol) {
  return detail::certified<Polynomial>(session, [&] { return charpoly_certified(session, a, protocol); });
}

}  // namespace kcert
