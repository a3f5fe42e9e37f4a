#pragma once

#include <cmath>
#include <functional>
#include <random>
#include <utility>

#include "kcert/kcert.hpp"

namespace kcert::testing {

/// Honest answers, optionally rewritten by `mutate` before they are sent.
/// `call` counts requests of the same type, starting at 0.
class CorruptingProver : public Prover {
 public:
  using Mutation = std::function<void(const Request&, Payload&, std::size_t call)>;

  explicit CorruptingProver(Mutation mutate) : mutate_(std::move(mutate)) {}

  Payload respond(const Request& request, const PrimeField& field, OpCounter cost) override {
    Payload p = honest_.respond(request, field, cost);
    const std::size_t call = calls_[request.index()]++;
    mutate_(request, p, call);
    return p;
  }

 private:
  HonestProver honest_;
  Mutation mutate_;
  std::array<std::size_t, std::variant_size_v<Request>> calls_{};
};

template <class R>
bool is(const Request& r) {
  return std::holds_alternative<R>(r);
}

inline void bump(const PrimeField& f, Vector& v, std::size_t i) { v[i] = f.add(v[i], f.one()); }

inline Vector random_vector(const PrimeField& f, std::size_t n, std::mt19937_64& rng) {
  Vector v(n);
  for (Scalar& s : v) s = Scalar{uniform_below(rng, f.modulus())};
  return v;
}

inline TranscriptHeader test_header(ProtocolTag tag, const SparseMatrix& a) {
  TranscriptHeader h;
  h.protocol = tag;
  h.p = a.modulus();
  h.n = a.dimension();
  return h;
}

/// Interactive session with a seeded challenge source.
inline Session interactive_session(ProtocolTag tag, const SparseMatrix& a, Prover& prover, u64 seed,
                                   u64 sample_set = 0) {
  return Session(PrimeField(a.modulus(), sample_set), test_header(tag, a), ChallengeSource::interactive(seed), prover);
}

/// k/|S| plus three binomial standard deviations over `trials`.
inline double acceptance_threshold(double k, double s, double trials) {
  const double q = std::min(1.0, k / s);
  return q + 3.0 * std::sqrt(q * (1.0 - q) / trials);
}

}  // namespace kcert::testing
