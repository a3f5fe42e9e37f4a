#pragma once

#include <array>
#include <cstddef>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "kcert/applications.hpp"
#include "kcert/checkpoint.hpp"
#include "kcert/logdepth.hpp"
#include "kcert/prover.hpp"
#include "kcert/recursive.hpp"
#include "kcert/session.hpp"
#include "kcert/sha256.hpp"
#include "kcert/transcript.hpp"

namespace kcert {

/// Everything that fixes a protocol run apart from the matrix and the
/// randomness. Zero-valued tunables mean "choose the default".
struct ProtocolConfig {
  ProtocolTag protocol = ProtocolTag::Sequence;
  u64 delta = 0;                               // 0: 2n
  u64 param = 0;                               // K (checkpoint, dense) or k (klevel)
  PowerVariant variant = PowerVariant::Single;  // sequence, combination
  SequenceProtocol inner;                       // applications
  u64 projections = 1;                          // minpoly
  u64 sample_set_size = 0;                      // 0: all of GF(p)
  u64 nonce = 0;
};

/// Outcome of one protocol run together with its transcript and costs.
struct RunResult {
  Transcript transcript;
  CostLedger ledger;
  VerifierOutcome outcome;
  std::optional<Polynomial> polynomial;  // minpoly, charpoly
  std::optional<Scalar> value;           // det
};

/// Upper limits on header parameters, so a corrupted transcript cannot make
/// the Verifier allocate without bound.
inline constexpr u64 kMaxDelta = u64{1} << 24;
inline constexpr u64 kMaxLevels = 16;
inline constexpr u64 kMaxProjections = 64;

inline std::array<u64, 4> matrix_digest(const SparseMatrix& a) {
  std::ostringstream os;
  write_matrix(os, a);
  const std::string text = os.str();
  const Digest d = Sha256::of(std::span(reinterpret_cast<const std::uint8_t*>(text.data()), text.size()));
  std::array<u64, 4> words{};
  for (std::size_t w = 0; w < 4; ++w) {
    for (std::size_t b = 0; b < 8; ++b) words[w] |= static_cast<u64>(d[8 * w + b]) << (8 * b);
  }
  return words;
}

/// Fills in defaults (delta = 2n, optimal strides) for a given matrix.
inline ProtocolConfig resolve(ProtocolConfig c, const SparseMatrix& a) {
  const u64 n = a.dimension();
  if (c.delta == 0) c.delta = std::max<u64>(2 * n, 1);
  switch (c.protocol) {
    case ProtocolTag::Checkpoint:
      if (c.param == 0) c.param = choose_K(n, c.delta, a.mu());
      break;
    case ProtocolTag::Dense:
      if (c.param == 0) c.param = choose_K_dense(c.delta);
      break;
    case ProtocolTag::KLevel:
      if (c.param == 0) c.param = 2;
      break;
    default: break;
  }
  if (c.inner.kind == SequenceKind::KLevel && c.inner.param == 0) c.inner.param = 2;
  return c;
}

inline void validate(const ProtocolConfig& c, u64 n) {
  auto fail = [](const std::string& what) { throw std::invalid_argument(what); };
  if (n == 0) fail("matrix must be nonempty");
  if (c.delta == 0 || c.delta > kMaxDelta) fail("delta out of range");
  switch (c.protocol) {
    case ProtocolTag::Checkpoint:
    case ProtocolTag::Dense:
      if (c.param == 0 || c.param > c.delta) fail("stride K must be in [1, delta]");
      break;
    case ProtocolTag::KLevel:
      if (c.param < 2 || c.param > kMaxLevels) fail("levels must be in [2, 16]");
      if (n < 2) fail("k-level protocol needs n >= 2");
      break;
    default: break;
  }
  if (c.protocol == ProtocolTag::MinPoly || c.protocol == ProtocolTag::Det || c.protocol == ProtocolTag::CharPoly) {
    const u64 kind = static_cast<u64>(c.inner.kind);
    if (kind < 1 || kind > 5) fail("unknown inner protocol");
    if (c.inner.kind == SequenceKind::KLevel && (c.inner.param < 2 || c.inner.param > kMaxLevels || n < 2)) {
      fail("inner k-level protocol needs levels in [2, 16] and n >= 2");
    }
    if ((c.inner.kind == SequenceKind::Checkpoint || c.inner.kind == SequenceKind::Dense) && c.inner.param > 2 * n) {
      fail("inner stride exceeds 2n");
    }
    if (c.projections == 0 || c.projections > kMaxProjections) fail("projections must be in [1, 64]");
  }
}

inline TranscriptHeader make_header(const ProtocolConfig& c, const SparseMatrix& a) {
  TranscriptHeader h;
  h.protocol = c.protocol;
  h.p = a.modulus();
  h.n = a.dimension();
  switch (c.protocol) {
    case ProtocolTag::Checkpoint:
    case ProtocolTag::Dense:
    case ProtocolTag::KLevel: h.params = {c.delta, c.param}; break;
    case ProtocolTag::PowerLog: h.params = {c.delta}; break;
    case ProtocolTag::PowerSingle: h.params = {c.delta, power_single_exponent(c.delta)}; break;
    case ProtocolTag::Sequence:
    case ProtocolTag::Combination: h.params = {c.delta, static_cast<u64>(c.variant)}; break;
    case ProtocolTag::MinPoly: h.params = {static_cast<u64>(c.inner.kind), c.inner.param, c.projections}; break;
    case ProtocolTag::Det:
    case ProtocolTag::CharPoly: h.params = {static_cast<u64>(c.inner.kind), c.inner.param}; break;
  }
  h.params.push_back(c.sample_set_size);
  h.params.push_back(c.nonce);
  for (u64 w : matrix_digest(a)) h.params.push_back(w);
  return h;
}

/// Inverse of make_header; anything inconsistent is a TranscriptError.
inline ProtocolConfig config_from_header(const TranscriptHeader& h, const SparseMatrix& a) {
  auto fail = [](const std::string& what) { throw TranscriptError("transcript header: " + what); };
  if (h.p != a.modulus()) fail("modulus differs from the matrix file");
  if (h.n != a.dimension()) fail("dimension differs from the matrix file");
  std::size_t lead = 0;
  switch (h.protocol) {
    case ProtocolTag::PowerLog: lead = 1; break;
    case ProtocolTag::MinPoly: lead = 3; break;
    default: lead = 2; break;
  }
  if (h.params.size() != lead + 6) fail("wrong parameter count");
  const std::array<u64, 4> digest = matrix_digest(a);
  if (!std::equal(digest.begin(), digest.end(), h.params.begin() + lead + 2)) fail("matrix digest mismatch");

  ProtocolConfig c;
  c.protocol = h.protocol;
  c.sample_set_size = h.params[lead];
  c.nonce = h.params[lead + 1];
  if (c.sample_set_size > h.p) fail("sample set larger than the field");
  switch (h.protocol) {
    case ProtocolTag::Checkpoint:
    case ProtocolTag::Dense:
    case ProtocolTag::KLevel:
      c.delta = h.params[0];
      c.param = h.params[1];
      break;
    case ProtocolTag::PowerLog: c.delta = h.params[0]; break;
    case ProtocolTag::PowerSingle:
      c.delta = h.params[0];
      if (h.params[1] != power_single_exponent(c.delta)) fail("power exponent inconsistent with d");
      break;
    case ProtocolTag::Sequence:
    case ProtocolTag::Combination:
      c.delta = h.params[0];
      if (h.params[1] > 1) fail("unknown power variant");
      c.variant = static_cast<PowerVariant>(h.params[1]);
      break;
    case ProtocolTag::MinPoly:
    case ProtocolTag::Det:
    case ProtocolTag::CharPoly:
      c.inner.kind = static_cast<SequenceKind>(h.params[0]);
      c.inner.param = h.params[1];
      if (h.protocol == ProtocolTag::MinPoly) c.projections = h.params[2];
      c.delta = 2 * h.n;
      break;
  }
  try {
    validate(c, h.n);
  } catch (const std::invalid_argument& e) {
    fail(e.what());
  }
  if (make_header(c, a) != h) fail("non-canonical parameters");
  return c;
}

/// Runs the Verifier of `config` against `prover`, recording the transcript.
inline RunResult run_protocol(const SparseMatrix& a, ProtocolConfig config, Prover& prover,
                              ChallengeSource source = ChallengeSource::fiat_shamir()) {
  config = resolve(config, a);
  validate(config, a.dimension());
  const PrimeField field(a.modulus(), config.sample_set_size);
  Session session(field, make_header(config, a), std::move(source), prover);
  const MatrixView op(a);
  std::optional<Polynomial> poly;
  std::optional<Scalar> value;

  auto outcome = [&]() -> VerifierOutcome {
    switch (config.protocol) {
      case ProtocolTag::Checkpoint: return verify_checkpoint(session, op, config.delta, config.param);
      case ProtocolTag::Dense: return verify_dense(session, op, config.delta, config.param);
      case ProtocolTag::KLevel:
        return verify_klevel(session, op, config.delta, level_schedule(config.param, a.dimension()));
      case ProtocolTag::PowerLog: return verify_power_log(session, op, config.delta);
      case ProtocolTag::PowerSingle: return verify_power_single(session, op, config.delta);
      case ProtocolTag::Sequence: return verify_sequence_cert(session, op, config.delta, config.variant);
      case ProtocolTag::Combination: return verify_combination_cert(session, op, config.delta, config.variant);
      case ProtocolTag::MinPoly: {
        auto r = certify_minpoly(session, a, config.inner, config.projections);
        if (r.outcome.accepted()) poly = r.value;
        return r.outcome;
      }
      case ProtocolTag::Det: {
        auto r = certify_det(session, a, config.inner);
        if (r.outcome.accepted()) value = r.value;
        return r.outcome;
      }
      case ProtocolTag::CharPoly: {
        auto r = certify_charpoly(session, a, config.inner);
        if (r.outcome.accepted()) poly = r.value;
        return r.outcome;
      }
    }
    throw std::invalid_argument("unknown protocol");
  }();
  return RunResult{session.transcript(), session.ledger(), std::move(outcome), std::move(poly), value};
}

/// Honest Fiat-Shamir run: the non-interactive certificate for `config`.
inline RunResult prove(const SparseMatrix& a, const ProtocolConfig& config) {
  HonestProver prover;
  return run_protocol(a, config, prover);
}

/// Re-derives every challenge of a serialized Fiat-Shamir transcript and
/// re-runs the Verifier on the recorded Prover messages. Structural problems
/// (parse errors, header or challenge mismatches, leftover or missing
/// messages, malformed certificates) throw; failed checks yield Reject.
inline RunResult verify_transcript(const SparseMatrix& a, std::span<const std::uint8_t> bytes) {
  const Transcript recorded = Transcript::parse(bytes);
  const ProtocolConfig config = config_from_header(recorded.header(), a);
  TranscriptProver prover(recorded);
  RunResult result = [&] {
    try {
      return run_protocol(a, config, prover);
    } catch (const MalformedCertificate& e) {
      throw TranscriptError(std::string("malformed certificate: ") + e.what());
    }
  }();
  if (result.outcome.accepted()) {
    if (!prover.exhausted()) throw TranscriptError("transcript has messages past the end of the protocol");
    if (result.transcript.serialize() != Bytes(bytes.begin(), bytes.end())) {
      throw TranscriptError("transcript is not canonical");
    }
  }
  return result;
}

inline std::string protocol_name(ProtocolTag t) {
  switch (t) {
    case ProtocolTag::Checkpoint: return "checkpoint";
    case ProtocolTag::Dense: return "dense";
    case ProtocolTag::KLevel: return "klevel";
    case ProtocolTag::PowerLog: return "power-log";
    case ProtocolTag::PowerSingle: return "power-single";
    case ProtocolTag::Sequence: return "sequence";
    case ProtocolTag::Combination: return "combination";
    case ProtocolTag::MinPoly: return "minpoly";
    case ProtocolTag::Det: return "det";
    case ProtocolTag::CharPoly: return "charpoly";
  }
  return "unknown";
}

}  // namespace kcert
