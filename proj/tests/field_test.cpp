#include <gtest/gtest.h>

#include <array>
#include <boost/multiprecision/cpp_int.hpp>
#include <random>

#include "kcert/challenge.hpp"
#include "kcert/field.hpp"
#include "kcert/sparse_matrix.hpp"

namespace kcert {
namespace {

using boost::multiprecision::cpp_int;

u64 big_mod(const cpp_int& x, u64 p) { return static_cast<u64>(((x % p) + p) % p); }

class FieldOracle : public ::testing::TestWithParam<u64> {};

TEST_P(FieldOracle, ArithmeticMatchesBigIntegers) {
  const u64 p = GetParam();
  const PrimeField f(p);
  std::mt19937_64 rng(p);
  std::array<u64, 6> edge{0, 1, 2, p - 1, p - 2, p / 2};
  for (int trial = 0; trial < 4000; ++trial) {
    const u64 a = trial < 36 ? edge[trial % 6] : uniform_below(rng, p);
    const u64 b = trial < 36 ? edge[trial / 6] : uniform_below(rng, p);
    const cpp_int A = a, B = b;
    EXPECT_EQ(f.add(Scalar{a}, Scalar{b}).value, big_mod(A + B, p));
    EXPECT_EQ(f.sub(Scalar{a}, Scalar{b}).value, big_mod(A - B, p));
    EXPECT_EQ(f.mul(Scalar{a}, Scalar{b}).value, big_mod(A * B, p));
    EXPECT_EQ(f.neg(Scalar{a}).value, big_mod(-A, p));
    if (b != 0) {
      const Scalar inv = f.inv(Scalar{b});
      EXPECT_EQ(big_mod(cpp_int(inv.value) * B, p), 1u);
    }
  }
}

TEST_P(FieldOracle, PowerMatchesBigIntegers) {
  const u64 p = GetParam();
  const PrimeField f(p);
  std::mt19937_64 rng(p + 1);
  for (int trial = 0; trial < 200; ++trial) {
    const u64 a = uniform_below(rng, p);
    const u64 e = rng() % 5000;
    EXPECT_EQ(f.pow(Scalar{a}, e).value, static_cast<u64>(boost::multiprecision::powm(cpp_int(a), cpp_int(e), cpp_int(p))));
  }
}

TEST_P(FieldOracle, SignedEmbedding) {
  const u64 p = GetParam();
  const PrimeField f(p);
  for (std::int64_t v : {std::int64_t{0}, std::int64_t{-1}, std::int64_t{5}, std::int64_t{-12345},
                         std::numeric_limits<std::int64_t>::min(), std::numeric_limits<std::int64_t>::max()}) {
    EXPECT_EQ(f.from_i64(v).value, big_mod(cpp_int(v), p)) << v;
  }
}

INSTANTIATE_TEST_SUITE_P(Moduli, FieldOracle,
                         ::testing::Values(u64{3}, u64{101}, u64{1000000007}, kMersenne61,
                                           (u64{1} << 62) - 57));

TEST(PrimeField, RejectsBadModuli) {
  EXPECT_THROW(PrimeField(2), std::invalid_argument);
  EXPECT_THROW(PrimeField(1), std::invalid_argument);
  EXPECT_THROW(PrimeField(100), std::invalid_argument);
  EXPECT_THROW(PrimeField(u64{1} << 62), std::invalid_argument);
  EXPECT_THROW(PrimeField(101, 102), std::invalid_argument);
  EXPECT_NO_THROW(PrimeField(101, 101));
}

TEST(PrimeField, InverseOfZeroThrows) {
  const PrimeField f(101);
  EXPECT_THROW(f.inv(Scalar{0}), DivisionByZero);
  EXPECT_THROW(f.div(Scalar{3}, Scalar{0}), DivisionByZero);
}

TEST(PrimeField, SmallExamples) {
  const PrimeField f7(7);
  EXPECT_EQ(f7.mul(Scalar{3}, Scalar{5}).value, 1u);
  EXPECT_EQ(f7.inv(Scalar{3}).value, 5u);
  const PrimeField f(101);
  EXPECT_EQ(f.add(Scalar{100}, Scalar{1}).value, 0u);
  EXPECT_EQ(f.mul(Scalar{50}, Scalar{3}).value, 49u);
  EXPECT_EQ(f.inv(Scalar{2}).value, 51u);
  EXPECT_EQ(f.sub(Scalar{0}, Scalar{1}).value, 100u);
  const PrimeField m(kMersenne61);
  EXPECT_EQ(m.mul(Scalar{kMersenne61 - 1}, Scalar{kMersenne61 - 1}).value, 1u);
}

TEST(PrimeField, PrimalityAgreesWithTrialDivision) {
  for (u64 n = 0; n < 5000; ++n) {
    bool prime = n >= 2;
    for (u64 d = 2; d * d <= n && prime; ++d) prime = n % d != 0;
    EXPECT_EQ(is_prime_u64(n), prime) << n;
  }
  EXPECT_TRUE(is_prime_u64(kMersenne61));
  EXPECT_FALSE(is_prime_u64(kMersenne61 - 2));
}

TEST(PrimeField, SampleSetDefaultsToWholeField) {
  EXPECT_EQ(PrimeField(101).sample_set_size(), 101u);
  EXPECT_EQ(PrimeField(101, 7).sample_set_size(), 7u);
  EXPECT_EQ(PrimeField(101).with_sample_set(13).sample_set_size(), 13u);
}

// Chi-square goodness of fit for Fiat-Shamir challenges over GF(101):
// 100 degrees of freedom, critical value 149.449 at the 0.001 level.
TEST(Sampling, FiatShamirChallengesAreUniform) {
  const PrimeField f(101);
  TranscriptHeader h;
  h.protocol = ProtocolTag::Checkpoint;
  h.p = 101;
  h.n = 4;
  Transcript t(h);
  ChallengeSource source = ChallengeSource::fiat_shamir();
  std::array<double, 101> counts{};
  const int draws = 100000;
  for (int i = 0; i < draws / 100; ++i) {
    for (Scalar s : source.draw(f, t, 100)) counts[s.value] += 1;
    t.append(Direction::ProverToVerifier, MessageTag::Checkpoints, {{Scalar{static_cast<u64>(i % 101)}}});
  }
  const double expected = draws / 101.0;
  double chi2 = 0;
  for (double c : counts) chi2 += (c - expected) * (c - expected) / expected;
  EXPECT_LT(chi2, 149.449);
}

TEST(Sampling, DeterministicForAFixedSeedOrTranscript) {
  const PrimeField f(101);
  TranscriptHeader h;
  h.p = 101;
  h.n = 3;
  const Transcript t(h);
  ChallengeSource i1 = ChallengeSource::interactive(42);
  ChallengeSource i2 = ChallengeSource::interactive(42);
  EXPECT_EQ(sample_scalar(f, i1, t), sample_scalar(f, i2, t));

  ChallengeSource a = ChallengeSource::fiat_shamir();
  ChallengeSource b = ChallengeSource::fiat_shamir();
  const Vector first = a.draw(f, t, 16);
  EXPECT_EQ(first, b.draw(f, t, 16));
  // A second draw from the same transcript state is a fresh challenge.
  EXPECT_NE(a.draw(f, t, 16), first);
}

TEST(Sampling, SingletonSampleSetAlwaysGivesZero) {
  const PrimeField f(101, 1);
  TranscriptHeader h;
  h.p = 101;
  h.n = 1;
  const Transcript t(h);
  ChallengeSource source = ChallengeSource::fiat_shamir();
  for (Scalar s : source.draw(f, t, 50)) EXPECT_EQ(s.value, 0u);
}

TEST(Sampling, RestrictedSampleSetAndLowerBound) {
  const PrimeField f(kMersenne61, 10);
  TranscriptHeader h;
  h.p = kMersenne61;
  h.n = 1;
  Transcript t(h);
  ChallengeSource source = ChallengeSource::interactive(7);
  for (Scalar s : source.draw(f, t, 1000, 3)) {
    EXPECT_GE(s.value, 3u);
    EXPECT_LT(s.value, 10u);
  }
}

}  // namespace
}  // namespace kcert
