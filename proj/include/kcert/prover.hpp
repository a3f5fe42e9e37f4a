#pragma once

#include <cstddef>
#include <stdexcept>
#include <variant>

#include "kcert/checkpoint.hpp"
#include "kcert/dense.hpp"
#include "kcert/logdepth.hpp"
#include "kcert/polynomial.hpp"
#include "kcert/sequence.hpp"
#include "kcert/session.hpp"
#include "kcert/transcript.hpp"

namespace kcert {

/// Answers every request truthfully. Sparse answers are computed with the
/// Prover's ledger charged; dense claims (determinant, kernel vector,
/// characteristic polynomial) come from cubic-time dense elimination.
class HonestProver : public Prover {
 public:
  Payload respond(const Request& request, const PrimeField& field, OpCounter cost) override {
    return std::visit([&](const auto& r) { return answer(r, field, cost); }, request);
  }

 private:
  static Payload answer(const CheckpointRequest& r, const PrimeField& f, OpCounter c) {
    return prove_checkpoint(f, r.op, r.u, r.v0, r.delta, r.stride, c).to_payload();
  }

  static Payload answer(const KrylovListRequest& r, const PrimeField& f, OpCounter c) {
    std::vector<Vector> list = krylov_list(f, r.op, r.start, r.count + 1, c);
    return Payload(list.begin() + 1, list.end());
  }

  static Payload answer(const CombinationRequest& r, const PrimeField& f, OpCounter c) {
    return {prove_combination(f, r.op, r.u, r.r, r.d, c)};
  }

  static Payload answer(const PowerLogRequest& r, const PrimeField& f, OpCounter c) {
    PowerLogCert p = prove_power_log(f, r.op, r.v, r.d, c);
    return {std::move(p.z), std::move(p.z_half)};
  }

  static Payload answer(const PowerSingleRequest& r, const PrimeField& f, OpCounter c) {
    PowerSingleCert p = prove_power_single(f, r.op, r.v, r.d, r.t, c);
    return {std::move(p.z_t), std::move(p.z), std::move(p.z_t_prev)};
  }

  static Payload answer(const SequenceRequest& r, const PrimeField& f, OpCounter c) {
    SequenceCert p = prove_sequence(f, r.op, r.u, r.v, r.d, c);
    return {std::move(p.w), std::move(p.w_half), std::move(p.s)};
  }

  static Payload answer(const MinPolyClaimRequest& r, const PrimeField& f, OpCounter c) {
    const Vector s = compute_sequence(f, r.op, r.u, r.v0, r.terms - 1, c);
    return {minpoly_of_sequence(f, s).coefficients()};
  }

  static Payload answer(const DetClaimRequest& r, const PrimeField& f, OpCounter) {
    return {{dense_determinant(f, DenseMatrix::from_sparse(*r.a))}};
  }

  static Payload answer(const KernelRequest& r, const PrimeField& f, OpCounter) {
    auto w = dense_kernel_vector(f, DenseMatrix::from_sparse(*r.a));
    if (!w) throw std::logic_error("kernel witness requested for a nonsingular matrix");
    return {std::move(*w)};
  }

  static Payload answer(const CharPolyClaimRequest& r, const PrimeField& f, OpCounter) {
    return {dense_charpoly(f, DenseMatrix::from_sparse(*r.a)).coefficients()};
  }
};

/// Replays the Prover side of a recorded transcript: each request is answered
/// with the next recorded Prover message, and each challenge the Verifier
/// sends must equal the next recorded one byte for byte.
class TranscriptProver : public Prover {
 public:
  explicit TranscriptProver(const Transcript& recorded) : recorded_(&recorded) {}

  Payload respond(const Request& request, const PrimeField& field, OpCounter) override {
    const Message& m = next(Direction::ProverToVerifier, response_tag(request));
    return decode_payload(m.payload, field.modulus());
  }

  void receive(MessageTag tag, const Payload& payload) override {
    const Message& m = next(Direction::VerifierToProver, tag);
    if (m.payload != encode_payload(payload)) {
      throw TranscriptError("recorded " + to_string(tag) + " challenge differs from the derived one");
    }
  }

  bool exhausted() const { return cursor_ == recorded_->messages().size(); }

 private:
  const Message& next(Direction direction, MessageTag tag) {
    if (cursor_ >= recorded_->messages().size()) throw TranscriptError("transcript ends before the protocol does");
    const Message& m = recorded_->messages()[cursor_++];
    if (m.direction != direction || m.tag != tag) {
      throw TranscriptError("expected " + to_string(tag) + " message, found " + to_string(m.tag));
    }
    return m;
  }

  const Transcript* recorded_;
  std::size_t cursor_ = 0;
};

}  // namespace kcert
