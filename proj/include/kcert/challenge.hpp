#pragma once

#include <cstddef>
#include <optional>
#include <random>

#include "kcert/field.hpp"
#include "kcert/sha256.hpp"
#include "kcert/sparse_matrix.hpp"
#include "kcert/transcript.hpp"

namespace kcert {

/// Where Verifier randomness comes from. Interactive sources draw from a
/// seeded generator the Prover never sees; Fiat-Shamir sources hash the
/// transcript so far, so anyone holding the transcript derives the same
/// challenges.
class ChallengeSource {
 public:
  static ChallengeSource interactive(u64 seed) { return ChallengeSource(std::mt19937_64(seed)); }
  static ChallengeSource fiat_shamir() { return ChallengeSource(std::nullopt); }

  bool is_fiat_shamir() const { return !rng_.has_value(); }

  /// `len` scalars uniform over {lo, ..., |S|-1}.
  Vector draw(const PrimeField& field, const Transcript& transcript, std::size_t len, u64 lo = 0) {
    const u64 size = field.sample_set_size();
    if (lo >= size) throw std::invalid_argument("sample range is empty");
    const u64 range = size - lo;
    Vector out;
    out.reserve(len);
    if (rng_) {
      for (std::size_t i = 0; i < len; ++i) out.push_back(Scalar{lo + uniform_below(*rng_, range)});
      return out;
    }
    Digest seed = Sha256(transcript.hash_state()).update_u64(counter_++).finish();
    // Chunks at or above floor(2^64 / range) * range are rejected.
    const u128 limit = ((u128{1} << 64) / range) * range;
    for (u64 block = 0; out.size() < len; ++block) {
      Digest chunk = Sha256().update(seed).update_u64(block).finish();
      for (std::size_t off = 0; off < chunk.size() && out.size() < len; off += 8) {
        u64 x = 0;
        for (int b = 0; b < 8; ++b) x |= static_cast<u64>(chunk[off + b]) << (8 * b);
        if (x >= limit) continue;
        out.push_back(Scalar{lo + x % range});
      }
    }
    return out;
  }

 private:
  explicit ChallengeSource(std::optional<std::mt19937_64> rng) : rng_(std::move(rng)) {}

  std::optional<std::mt19937_64> rng_;
  u64 counter_ = 0;
};

inline Vector derive_challenge_vector(ChallengeSource& source, const PrimeField& field, const Transcript& transcript,
                                      std::size_t len) {
  return source.draw(field, transcript, len);
}

inline Scalar sample_scalar(const PrimeField& field, ChallengeSource& source, const Transcript& transcript) {
  return source.draw(field, transcript, 1).front();
}

}  // namespace kcert
