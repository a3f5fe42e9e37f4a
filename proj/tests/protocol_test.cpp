#include <gtest/gtest.h>

#include <random>

#include "support.hpp"

namespace kcert {
namespace {

struct Named {
  const char* name;
  ProtocolConfig config;
};

void PrintTo(const Named& n, std::ostream* os) { *os << n.name; }

std::vector<Named> all_protocols() {
  auto make = [](ProtocolTag tag, u64 param = 0, PowerVariant variant = PowerVariant::Single,
                 SequenceProtocol inner = {}) {
    ProtocolConfig c;
    c.protocol = tag;
    c.param = param;
    c.variant = variant;
    c.inner = inner;
    return c;
  };
  return {
      {"checkpoint", make(ProtocolTag::Checkpoint)},
      {"dense", make(ProtocolTag::Dense)},
      {"klevel2", make(ProtocolTag::KLevel, 2)},
      {"klevel3", make(ProtocolTag::KLevel, 3)},
      {"power_log", make(ProtocolTag::PowerLog)},
      {"power_single", make(ProtocolTag::PowerSingle)},
      {"sequence_log", make(ProtocolTag::Sequence, 0, PowerVariant::Log)},
      {"sequence_single", make(ProtocolTag::Sequence)},
      {"combination", make(ProtocolTag::Combination, 0, PowerVariant::Log)},
      {"minpoly", make(ProtocolTag::MinPoly, 0, PowerVariant::Single, {SequenceKind::Checkpoint, 0})},
      {"det", make(ProtocolTag::Det, 0, PowerVariant::Single, {SequenceKind::KLevel, 3})},
      {"charpoly", make(ProtocolTag::CharPoly, 0, PowerVariant::Single, {SequenceKind::SeqLog, 0})},
  };
}

class EveryProtocol : public ::testing::TestWithParam<Named> {};

TEST_P(EveryProtocol, HeaderRoundTrip) {
  const PrimeField f(kMersenne61);
  const SparseMatrix a = random_sparse(20, 3, f, 1);
  const ProtocolConfig c = resolve(GetParam().config, a);
  const TranscriptHeader h = make_header(c, a);
  const ProtocolConfig back = config_from_header(h, a);
  EXPECT_EQ(make_header(back, a), h);
  EXPECT_EQ(back.protocol, c.protocol);
  EXPECT_EQ(back.delta, c.delta);
}

TEST_P(EveryProtocol, ReplayIsBitIdentical) {
  const PrimeField f(kMersenne61);
  const SparseMatrix a = random_sparse(24, 3, f, 2);
  const RunResult live = prove(a, GetParam().config);
  ASSERT_TRUE(live.outcome.accepted()) << live.outcome;
  const Bytes bytes = live.transcript.serialize();
  const RunResult replay = verify_transcript(a, bytes);
  EXPECT_TRUE(replay.outcome.accepted());
  EXPECT_EQ(replay.transcript.serialize(), bytes);
  EXPECT_EQ(replay.ledger.verifier, live.ledger.verifier);
  EXPECT_EQ(replay.polynomial, live.polynomial);
  EXPECT_EQ(replay.value, live.value);
  EXPECT_EQ(prove(a, GetParam().config).transcript.serialize(), bytes);
}

TEST_P(EveryProtocol, SingleByteFlipsNeverVerify) {
  const PrimeField f(kMersenne61);
  const SparseMatrix a = random_sparse(12, 3, f, 3);
  const Bytes good = prove(a, GetParam().config).transcript.serialize();
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    Bytes bad = good;
    const std::size_t at = rng() % bad.size();
    bad[at] ^= static_cast<std::uint8_t>(1 + rng() % 255);
    try {
      EXPECT_FALSE(verify_transcript(a, bad).outcome.accepted()) << "byte " << at;
    } catch (const TranscriptError&) {
    }
  }
}

TEST_P(EveryProtocol, TranscriptIsBoundToTheMatrix) {
  const PrimeField f(kMersenne61);
  const SparseMatrix a = random_sparse(12, 3, f, 5);
  const SparseMatrix b = random_sparse(12, 3, f, 6);
  const Bytes bytes = prove(a, GetParam().config).transcript.serialize();
  EXPECT_THROW(verify_transcript(b, bytes), TranscriptError);
}

INSTANTIATE_TEST_SUITE_P(Protocols, EveryProtocol, ::testing::ValuesIn(all_protocols()),
                         [](const ::testing::TestParamInfo<Named>& info) { return std::string(info.param.name); });

TEST(Protocol, ResolveFillsDefaults) {
  const PrimeField f(kMersenne61);
  const SparseMatrix a = random_sparse(100, 3, f, 1);
  ProtocolConfig c;
  c.protocol = ProtocolTag::Checkpoint;
  c = resolve(c, a);
  EXPECT_EQ(c.delta, 200u);
  EXPECT_EQ(c.param, choose_K(100, 200, a.mu()));
  c = ProtocolConfig{};
  c.protocol = ProtocolTag::Dense;
  EXPECT_EQ(resolve(c, a).param, choose_K_dense(200));
  c.protocol = ProtocolTag::KLevel;
  EXPECT_EQ(resolve(c, a).param, 2u);
}

TEST(Protocol, ValidateRejectsBadParameters) {
  ProtocolConfig c;
  c.protocol = ProtocolTag::Checkpoint;
  c.delta = 10;
  c.param = 11;
  EXPECT_THROW(validate(c, 5), std::invalid_argument);
  c.param = 0;
  EXPECT_THROW(validate(c, 5), std::invalid_argument);
  c.param = 3;
  EXPECT_NO_THROW(validate(c, 5));
  EXPECT_THROW(validate(c, 0), std::invalid_argument);
  c.delta = 0;
  EXPECT_THROW(validate(c, 5), std::invalid_argument);

  ProtocolConfig k;
  k.protocol = ProtocolTag::KLevel;
  k.delta = 10;
  k.param = 1;
  EXPECT_THROW(validate(k, 5), std::invalid_argument);
  k.param = 17;
  EXPECT_THROW(validate(k, 5), std::invalid_argument);
  k.param = 3;
  EXPECT_THROW(validate(k, 1), std::invalid_argument);

  ProtocolConfig m;
  m.protocol = ProtocolTag::MinPoly;
  m.delta = 10;
  m.projections = 0;
  EXPECT_THROW(validate(m, 5), std::invalid_argument);
  m.projections = 1;
  m.inner = {SequenceKind::Checkpoint, 11};
  EXPECT_THROW(validate(m, 5), std::invalid_argument);
  m.inner = {static_cast<SequenceKind>(9), 0};
  EXPECT_THROW(validate(m, 5), std::invalid_argument);
}

TEST(Protocol, HeaderRejectsInconsistentFields) {
  const PrimeField f(kMersenne61);
  const SparseMatrix a = random_sparse(10, 3, f, 1);
  ProtocolConfig c;
  c.protocol = ProtocolTag::Sequence;
  const TranscriptHeader good = make_header(resolve(c, a), a);

  TranscriptHeader h = good;
  h.p = 101;
  EXPECT_THROW(config_from_header(h, a), TranscriptError);
  h = good;
  h.n = 11;
  EXPECT_THROW(config_from_header(h, a), TranscriptError);
  h = good;
  h.params.pop_back();
  EXPECT_THROW(config_from_header(h, a), TranscriptError);
  h = good;
  h.params[1] = 2;  // power variant
  EXPECT_THROW(config_from_header(h, a), TranscriptError);
  h = good;
  h.params[2] = kMersenne61 + 1;  // sample set larger than the field
  EXPECT_THROW(config_from_header(h, a), TranscriptError);
  h = good;
  h.params.back() ^= 1;  // digest
  EXPECT_THROW(config_from_header(h, a), TranscriptError);

  ProtocolConfig ps;
  ps.protocol = ProtocolTag::PowerSingle;
  TranscriptHeader hs = make_header(resolve(ps, a), a);
  hs.params[1] += 1;
  EXPECT_THROW(config_from_header(hs, a), TranscriptError);
}

TEST(Protocol, NonceAndSampleSetChangeTheTranscript) {
  const PrimeField f(kMersenne61);
  const SparseMatrix a = random_sparse(16, 3, f, 1);
  ProtocolConfig c;
  const Bytes plain = prove(a, c).transcript.serialize();
  c.nonce = 1;
  const RunResult salted = prove(a, c);
  EXPECT_NE(salted.transcript.serialize(), plain);
  EXPECT_TRUE(verify_transcript(a, salted.transcript.serialize()).outcome.accepted());
  c.nonce = 0;
  c.sample_set_size = 1000;
  const RunResult small = prove(a, c);
  EXPECT_TRUE(small.outcome.accepted());
  EXPECT_EQ(small.outcome.accept().soundness_error_bound, soundness_bound(small.ledger.tests, PrimeField(kMersenne61, 1000)));
  EXPECT_TRUE(verify_transcript(a, small.transcript.serialize()).outcome.accepted());
}

TEST(Protocol, TrailingMessagesAreRejected) {
  const PrimeField f(kMersenne61);
  const SparseMatrix a = random_sparse(10, 3, f, 1);
  const RunResult r = prove(a, ProtocolConfig{});
  Transcript extended = r.transcript;
  extended.append(Direction::ProverToVerifier, MessageTag::Sequence, {{Scalar{1}}});
  EXPECT_THROW(verify_transcript(a, extended.serialize()), TranscriptError);
}

TEST(Protocol, Names) {
  EXPECT_EQ(protocol_name(ProtocolTag::Checkpoint), "checkpoint");
  EXPECT_EQ(protocol_name(ProtocolTag::CharPoly), "charpoly");
}

}  // namespace
}  // namespace kcert
