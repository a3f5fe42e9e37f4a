#pragma once

#include <algorithm>
#include <cstddef>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "kcert/errors.hpp"
#include "kcert/field.hpp"
#include "kcert/sha256.hpp"

namespace kcert {

using Bytes = std::vector<std::uint8_t>;

/// A message body: an ordered list of vectors. Scalars, polynomials and
/// single vectors are all carried as vectors.
using Payload = std::vector<Vector>;

enum class Direction : std::uint8_t { ProverToVerifier = 0, VerifierToProver = 1 };

enum class ProtocolTag : std::uint8_t {
  Checkpoint = 0x01,
  Dense = 0x02,
  KLevel = 0x03,
  PowerLog = 0x04,
  PowerSingle = 0x05,
  Sequence = 0x06,
  Combination = 0x07,
  MinPoly = 0x10,
  Det = 0x11,
  CharPoly = 0x12,
};

/// Message tags. Values >= 0x80 travel from Verifier to Prover.
enum class MessageTag : std::uint8_t {
  Checkpoints = 0x01,  // W_1..W_m then s
  ZList = 0x03,
  TList = 0x04,
  Combination = 0x05,  // T
  PowerLog = 0x06,     // Z, Z/2
  PowerSingle = 0x07,  // Z_t, Z, Z_{t-1}
  Sequence = 0x08,     // W, W/2, s
  MinPolyClaim = 0x09,
  DetClaim = 0x0A,
  KernelWitness = 0x0B,
  CharPolyClaim = 0x0C,

  Projections = 0x81,  // U, V0
  Giant = 0x82,        // X (and U' when delegated)
  Baby = 0x83,         // R
  Psi = 0x84,
  PowerChallenge = 0x85,
  Preconditioner = 0x86,
  Lambda = 0x87,
};

inline std::string to_string(MessageTag tag) {
  switch (tag) {
    case MessageTag::Checkpoints: return "checkpoints";
    case MessageTag::ZList: return "z-list";
    case MessageTag::TList: return "t-list";
    case MessageTag::Combination: return "combination";
    case MessageTag::PowerLog: return "power-log";
    case MessageTag::PowerSingle: return "power-single";
    case MessageTag::Sequence: return "sequence";
    case MessageTag::MinPolyClaim: return "minpoly-claim";
    case MessageTag::DetClaim: return "det-claim";
    case MessageTag::KernelWitness: return "kernel-witness";
    case MessageTag::CharPolyClaim: return "charpoly-claim";
    case MessageTag::Projections: return "projections";
    case MessageTag::Giant: return "giant-step";
    case MessageTag::Baby: return "baby-step";
    case MessageTag::Psi: return "psi";
    case MessageTag::PowerChallenge: return "power-challenge";
    case MessageTag::Preconditioner: return "preconditioner";
    case MessageTag::Lambda: return "lambda";
  }
  return "tag-" + std::to_string(static_cast<unsigned>(tag));
}

struct TranscriptHeader {
  ProtocolTag protocol = ProtocolTag::Checkpoint;
  u64 p = 0;
  u64 n = 0;
  std::vector<u64> params;

  friend bool operator==(const TranscriptHeader&, const TranscriptHeader&) = default;
};

struct Message {
  u64 round = 0;
  Direction direction = Direction::ProverToVerifier;
  MessageTag tag = MessageTag::Checkpoints;
  Bytes payload;

  friend bool operator==(const Message&, const Message&) = default;
};

inline constexpr char kTranscriptMagic[4] = {'K', 'C', 'T', '1'};

namespace detail {

inline void put_u64(Bytes& out, u64 v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

/// Bounds-checked little-endian reader; every overrun is a TranscriptError.
class ByteReader {
 public:
  explicit ByteReader(std::span<const std::uint8_t> bytes) : bytes_(bytes) {}

  bool done() const { return pos_ == bytes_.size(); }
  std::size_t remaining() const { return bytes_.size() - pos_; }

  std::uint8_t u8() {
    need(1);
    return bytes_[pos_++];
  }

  u64 u64le() {
    need(8);
    u64 v = 0;
    for (int i = 0; i < 8; ++i) v |= static_cast<u64>(bytes_[pos_ + i]) << (8 * i);
    pos_ += 8;
    return v;
  }

  std::span<const std::uint8_t> take(std::size_t k) {
    need(k);
    auto s = bytes_.subspan(pos_, k);
    pos_ += k;
    return s;
  }

 private:
  void need(std::size_t k) const {
    if (k > remaining()) throw TranscriptError("transcript truncated at byte " + std::to_string(pos_));
  }

  std::span<const std::uint8_t> bytes_;
  std::size_t pos_ = 0;
};

inline bool known_protocol(std::uint8_t t) {
  return (t >= 0x01 && t <= 0x07) || (t >= 0x10 && t <= 0x12);
}

inline bool known_message(std::uint8_t t) { return (t >= 0x01 && t <= 0x0C && t != 0x02) || (t >= 0x81 && t <= 0x87); }

}  // namespace detail

/// Canonical encoding: per vector, its length then its residues, all 8-byte LE.
inline Bytes encode_payload(const Payload& payload) {
  Bytes out;
  for (const Vector& v : payload) {
    detail::put_u64(out, v.size());
    for (Scalar s : v) detail::put_u64(out, s.value);
  }
  return out;
}

/// Inverse of encode_payload; every residue must be < p.
inline Payload decode_payload(std::span<const std::uint8_t> bytes, u64 p) {
  detail::ByteReader in(bytes);
  Payload out;
  while (!in.done()) {
    const u64 len = in.u64le();
    if (len > in.remaining() / 8) throw TranscriptError("vector length exceeds payload");
    Vector v(len);
    for (Scalar& s : v) {
      s.value = in.u64le();
      if (s.value >= p) throw TranscriptError("payload scalar out of range");
    }
    out.push_back(std::move(v));
  }
  return out;
}

inline std::size_t scalar_count(const Payload& payload) {
  std::size_t k = 0;
  for (const Vector& v : payload) k += v.size();
  return k;
}

/// Append-only message log with a running SHA-256 over its canonical bytes.
/// A round starts with each Prover turn, so `rounds()` counts Prover turns.
class Transcript {
 public:
  explicit Transcript(TranscriptHeader header) : header_(std::move(header)) {
    Bytes h = header_bytes();
    hash_.update(h);
  }

  const TranscriptHeader& header() const { return header_; }
  const std::vector<Message>& messages() const { return messages_; }
  u64 rounds() const { return round_; }

  void append(Direction direction, MessageTag tag, const Payload& payload) {
    append_bytes(direction, tag, encode_payload(payload));
  }

  void append_bytes(Direction direction, MessageTag tag, Bytes payload) {
    if (direction == Direction::ProverToVerifier &&
        (messages_.empty() || messages_.back().direction == Direction::VerifierToProver)) {
      ++round_;
    }
    Bytes framed = frame(direction, tag, payload);
    hash_.update(framed);
    messages_.push_back(Message{round_, direction, tag, std::move(payload)});
  }

  /// Hash state over the header and every message so far.
  const Sha256& hash_state() const { return hash_; }

  Bytes serialize() const {
    Bytes out = header_bytes();
    for (const Message& m : messages_) {
      Bytes framed = frame(m.direction, m.tag, m.payload);
      out.insert(out.end(), framed.begin(), framed.end());
    }
    return out;
  }

  static Transcript parse(std::span<const std::uint8_t> bytes) {
    detail::ByteReader in(bytes);
    auto magic = in.take(4);
    if (!std::equal(magic.begin(), magic.end(), kTranscriptMagic)) throw TranscriptError("bad transcript magic");
    TranscriptHeader header;
    const std::uint8_t proto = in.u8();
    if (!detail::known_protocol(proto)) throw TranscriptError("unknown protocol tag");
    header.protocol = static_cast<ProtocolTag>(proto);
    header.p = in.u64le();
    header.n = in.u64le();
    const u64 count = in.u64le();
    if (count > in.remaining() / 8) throw TranscriptError("parameter count exceeds transcript");
    for (u64 i = 0; i < count; ++i) header.params.push_back(in.u64le());

    Transcript t(std::move(header));
    while (!in.done()) {
      const std::uint8_t dir = in.u8();
      if (dir > 1) throw TranscriptError("bad message direction");
      const std::uint8_t tag = in.u8();
      if (!detail::known_message(tag)) throw TranscriptError("unknown message tag");
      const bool to_prover = tag >= 0x80;
      if (to_prover != (dir == 1)) throw TranscriptError("message tag does not match its direction");
      const u64 len = in.u64le();
      if (len > in.remaining()) throw TranscriptError("payload length exceeds transcript");
      auto body = in.take(len);
      t.append_bytes(static_cast<Direction>(dir), static_cast<MessageTag>(tag), Bytes(body.begin(), body.end()));
    }
    return t;
  }

 private:
  Bytes header_bytes() const {
    Bytes out(kTranscriptMagic, kTranscriptMagic + 4);
    out.push_back(static_cast<std::uint8_t>(header_.protocol));
    detail::put_u64(out, header_.p);
    detail::put_u64(out, header_.n);
    detail::put_u64(out, header_.params.size());
    for (u64 v : header_.params) detail::put_u64(out, v);
    return out;
  }

  static Bytes frame(Direction direction, MessageTag tag, const Bytes& payload) {
    Bytes out;
    out.reserve(payload.size() + 10);
    out.push_back(static_cast<std::uint8_t>(direction));
    out.push_back(static_cast<std::uint8_t>(tag));
    detail::put_u64(out, payload.size());
    out.insert(out.end(), payload.begin(), payload.end());
    return out;
  }

  TranscriptHeader header_;
  std::vector<Message> messages_;
  u64 round_ = 0;
  Sha256 hash_;
};

}  // namespace kcert
