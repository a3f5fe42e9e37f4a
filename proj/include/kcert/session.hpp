#pragma once

#include <cstddef>
#include <limits>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "kcert/challenge.hpp"
#include "kcert/errors.hpp"
#include "kcert/field.hpp"
#include "kcert/ledger.hpp"
#include "kcert/outcome.hpp"
#include "kcert/sparse_matrix.hpp"
#include "kcert/transcript.hpp"

namespace kcert {

// What the Verifier can ask of the Prover. Every request is answered by
// exactly one Prover message whose tag is fixed by the request type.

/// W_j = op^{jK} V0 for j = 1..ceil(delta/K), then s[0..delta].
struct CheckpointRequest {
  MatrixView op;
  Vector u;
  Vector v0;
  u64 delta = 0;
  u64 stride = 1;
};

/// op^i start for i = 1..count.
struct KrylovListRequest {
  MatrixView op;
  Vector start;
  u64 count = 0;
  MessageTag tag = MessageTag::ZList;
};

/// T with T^T = sum_{i=0}^{d} r[i] u^T op^i.
struct CombinationRequest {
  MatrixView op;
  Vector u;
  Vector r;
  u64 d = 0;
};

/// (op^d v, op^{floor(d/2)} v).
struct PowerLogRequest {
  MatrixView op;
  Vector v;
  u64 d = 1;
};

/// (op^{2^t} v, op^d v, op^{2^{t-1}} v).
struct PowerSingleRequest {
  MatrixView op;
  Vector v;
  u64 d = 1;
  u64 t = 1;
};

/// (op^d v, op^{d/2} v, s[0..d]) for even d.
struct SequenceRequest {
  MatrixView op;
  Vector u;
  Vector v;
  u64 d = 2;
};

/// Minimal generating polynomial of u^T op^i v0, i < terms.
struct MinPolyClaimRequest {
  MatrixView op;
  Vector u;
  Vector v0;
  u64 terms = 2;
};

struct DetClaimRequest {
  const SparseMatrix* a = nullptr;
};

struct KernelRequest {
  const SparseMatrix* a = nullptr;
};

struct CharPolyClaimRequest {
  const SparseMatrix* a = nullptr;
};

using Request = std::variant<CheckpointRequest, KrylovListRequest, CombinationRequest, PowerLogRequest,
                             PowerSingleRequest, SequenceRequest, MinPolyClaimRequest, DetClaimRequest,
                             KernelRequest, CharPolyClaimRequest>;

inline MessageTag response_tag(const Request& request) {
  struct Visitor {
    MessageTag operator()(const CheckpointRequest&) const { return MessageTag::Checkpoints; }
    MessageTag operator()(const KrylovListRequest& r) const { return r.tag; }
    MessageTag operator()(const CombinationRequest&) const { return MessageTag::Combination; }
    MessageTag operator()(const PowerLogRequest&) const { return MessageTag::PowerLog; }
    MessageTag operator()(const PowerSingleRequest&) const { return MessageTag::PowerSingle; }
    MessageTag operator()(const SequenceRequest&) const { return MessageTag::Sequence; }
    MessageTag operator()(const MinPolyClaimRequest&) const { return MessageTag::MinPolyClaim; }
    MessageTag operator()(const DetClaimRequest&) const { return MessageTag::DetClaim; }
    MessageTag operator()(const KernelRequest&) const { return MessageTag::KernelWitness; }
    MessageTag operator()(const CharPolyClaimRequest&) const { return MessageTag::CharPolyClaim; }
  };
  return std::visit(Visitor{}, request);
}

/// The Prover side of a session. Implementations answer requests and are
/// told about every challenge the Verifier sends.
class Prover {
 public:
  virtual ~Prover() = default;
  virtual Payload respond(const Request& request, const PrimeField& field, OpCounter cost) = 0;
  virtual void receive(MessageTag /*tag*/, const Payload& /*payload*/) {}
};

/// Length of a variable-size vector in an expected shape (a polynomial of
/// degree at most n).
inline constexpr std::size_t kUpToDegreeN = std::numeric_limits<std::size_t>::max();

/// Verifier-side state of one protocol run: transcript, challenge source,
/// ledger and the Prover being questioned. Single-threaded.
class Session {
 public:
  Session(PrimeField field, TranscriptHeader header, ChallengeSource source, Prover& prover)
      : field_(std::move(field)), transcript_(std::move(header)), source_(std::move(source)), prover_(&prover) {}

  const PrimeField& field() const { return field_; }
  const Transcript& transcript() const { return transcript_; }
  const CostLedger& ledger() const { return ledger_; }
  std::size_t n() const { return transcript_.header().n; }

  OpCounter verifier() { return OpCounter(ledger_, Role::Verifier); }

  /// Secret challenge; drawn after everything committed so far.
  Vector challenge(std::size_t len, u64 lo = 0) { return source_.draw(field_, transcript_, len, lo); }

  Scalar challenge_scalar(u64 lo = 0) { return challenge(1, lo).front(); }

  /// Challenge vector different from `avoid`, by resampling.
  Vector challenge_avoiding(VectorView avoid) {
    for (;;) {
      Vector x = challenge(avoid.size());
      if (!std::equal(x.begin(), x.end(), avoid.begin(), avoid.end()) || field_.sample_set_size() == 1) return x;
    }
  }

  /// Verifier -> Prover message.
  void send(MessageTag tag, const Payload& payload) {
    transcript_.append(Direction::VerifierToProver, tag, payload);
    ledger_.comm_field_elements += scalar_count(payload);
    ledger_.rounds = transcript_.rounds();
    prover_->receive(tag, payload);
  }

  /// Prover -> Verifier message answering `request`; its shape is checked
  /// against `shape` (one length per vector) before anything else sees it.
  Payload ask(const Request& request, const std::vector<std::size_t>& shape) {
    Payload reply = prover_->respond(request, field_, OpCounter(ledger_, Role::Prover));
    const MessageTag tag = response_tag(request);
    if (reply.size() != shape.size()) {
      throw MalformedCertificate(to_string(tag) + ": expected " + std::to_string(shape.size()) + " vectors, got " +
                                 std::to_string(reply.size()));
    }
    for (std::size_t i = 0; i < shape.size(); ++i) {
      const std::size_t len = reply[i].size();
      const bool ok = shape[i] == kUpToDegreeN ? (len >= 1 && len <= n() + 1) : len == shape[i];
      if (!ok) throw MalformedCertificate(to_string(tag) + ": vector " + std::to_string(i) + " has bad length");
      for (Scalar s : reply[i]) {
        if (!field_.contains(s.value)) throw MalformedCertificate(to_string(tag) + ": scalar out of range");
      }
    }
    transcript_.append(Direction::ProverToVerifier, tag, reply);
    ledger_.comm_field_elements += scalar_count(reply);
    ledger_.rounds = transcript_.rounds();
    return reply;
  }

  /// Probabilistic test; fooled with probability at most weight / |S|.
  void test(bool ok, Reject failure, u64 weight = 1) {
    ledger_.tests += weight;
    if (ok) return;
    ++ledger_.failed_tests;
    if (!audit_) throw CheckFailed(std::move(failure));
    if (!first_failure_) first_failure_ = std::move(failure);
  }

  /// In audit mode a failed probabilistic test is counted and the run goes
  /// on, so the ledger shows every test a corruption trips.
  void set_audit(bool on) { audit_ = on; }

  /// Deterministic check.
  static void require(bool ok, Reject failure) {
    if (!ok) throw CheckFailed(std::move(failure));
  }

  Accept accept() const { return Accept{soundness_bound(ledger_.tests, field_)}; }

  /// Runs a protocol body, mapping a failed check to Reject.
  template <class Body>
  VerifierOutcome run(Body&& body) {
    try {
      std::forward<Body>(body)();
    } catch (const CheckFailed& failed) {
      return failed.reject();
    }
    if (first_failure_) return *first_failure_;
    return accept();
  }

 private:
  PrimeField field_;
  Transcript transcript_;
  ChallengeSource source_;
  Prover* prover_;
  CostLedger ledger_;
  bool audit_ = false;
  std::optional<Reject> first_failure_;
};

}  // namespace kcert
