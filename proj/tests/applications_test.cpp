#include <gtest/gtest.h>

#include <random>

#include "oracles.hpp"
#include "support.hpp"

namespace kcert {
namespace {

using testing::acceptance_threshold;
using testing::CorruptingProver;
using testing::interactive_session;
using testing::is;

Vector vec(std::initializer_list<u64> xs) {
  Vector v;
  for (u64 x : xs) v.push_back(Scalar{x});
  return v;
}

SparseMatrix diagonal(u64 p, std::initializer_list<u64> d) {
  std::vector<Entry> e;
  std::size_t i = 0;
  for (u64 x : d) {
    e.push_back({i, i, Scalar{x}});
    ++i;
  }
  return SparseMatrix(d.size(), p, std::move(e));
}

Polynomial poly(const oracle::Vec& c) {
  Vector v;
  for (u64 x : c) v.push_back(Scalar{x});
  return Polynomial(v);
}

/// Sparse instance with a dense diagonal, nonsingular with high probability.
SparseMatrix random_instance(const PrimeField& f, std::size_t n, std::mt19937_64& rng) {
  std::vector<Entry> e = random_sparse(n, std::min<std::size_t>(2, n), f, rng()).entries();
  for (std::size_t i = 0; i < n; ++i) e.push_back({i, i, Scalar{1 + uniform_below(rng, f.modulus() - 1)}});
  return SparseMatrix(n, f.modulus(), std::move(e));
}

RunResult run_app(const SparseMatrix& a, ProtocolTag tag, SequenceProtocol inner = {}, u64 projections = 1,
                  u64 nonce = 0) {
  ProtocolConfig cfg;
  cfg.protocol = tag;
  cfg.inner = inner;
  cfg.projections = projections;
  cfg.nonce = nonce;
  return prove(a, cfg);
}

TEST(MinPoly, SmallExamples) {
  const RunResult id = run_app(SparseMatrix::identity(4, kMersenne61), ProtocolTag::MinPoly);
  ASSERT_TRUE(id.outcome.accepted());
  EXPECT_EQ(*id.polynomial, Polynomial(vec({kMersenne61 - 1, 1})));

  // (x - 1)(x - 2) = x^2 - 3x + 2 over GF(101).
  const RunResult d = run_app(diagonal(101, {1, 1, 2}), ProtocolTag::MinPoly, {}, 4);
  ASSERT_TRUE(d.outcome.accepted());
  EXPECT_EQ(*d.polynomial, Polynomial(vec({2, 98, 1})));
}

TEST(MinPoly, CompanionMatrixRecoversItsPolynomial) {
  const oracle::Mod m{kMersenne61};
  std::mt19937_64 rng(1);
  for (std::size_t n = 1; n <= 8; ++n) {
    oracle::Vec f(n + 1);
    for (std::size_t i = 0; i < n; ++i) f[i] = uniform_below(rng, kMersenne61);
    f[n] = 1;
    const SparseMatrix c = oracle::companion(m, f);
    EXPECT_EQ(oracle::minpoly(m, oracle::dense(c)), f);
    const RunResult r = run_app(c, ProtocolTag::MinPoly);
    ASSERT_TRUE(r.outcome.accepted()) << r.outcome;
    EXPECT_EQ(*r.polynomial, poly(f)) << n;
  }
}

TEST(MinPoly, DividesTheMatrixMinimalPolynomial) {
  const PrimeField f(kMersenne61);
  const oracle::Mod m{kMersenne61};
  std::mt19937_64 rng(2);
  int equal = 0;
  const int trials = 500;
  for (int trial = 0; trial < trials; ++trial) {
    const std::size_t n = 1 + rng() % 16;
    // Sparse instances with few entries often have small minimal polynomials.
    const SparseMatrix a = random_sparse(n, 1 + rng() % std::min<std::size_t>(n, 3), f, rng());
    const RunResult r = run_app(a, ProtocolTag::MinPoly, {}, 1, trial);
    ASSERT_TRUE(r.outcome.accepted());
    const Polynomial full = poly(oracle::minpoly(m, oracle::dense(a)));
    EXPECT_TRUE(poly_divides(f, *r.polynomial, full));
    equal += *r.polynomial == full;
  }
  EXPECT_GE(equal, trials * 99 / 100);
}

TEST(MinPoly, WrongClaimIsRejected) {
  const PrimeField f(kMersenne61);
  const SparseMatrix a = random_sparse(10, 3, f, 3);
  CorruptingProver bad([&](const Request& r, Payload& p, std::size_t) {
    if (is<MinPolyClaimRequest>(r)) testing::bump(f, p[0], 0);
  });
  Session s = interactive_session(ProtocolTag::MinPoly, a, bad, 1);
  const auto r = certify_minpoly(s, a, {});
  ASSERT_FALSE(r.outcome.accepted());
  EXPECT_EQ(r.outcome.reject().check_id, "minpoly-claim");

  CorruptingProver not_monic([&](const Request& r, Payload& p, std::size_t) {
    if (is<MinPolyClaimRequest>(r)) p[0].back() = Scalar{2};
  });
  Session s2 = interactive_session(ProtocolTag::MinPoly, a, not_monic, 1);
  EXPECT_EQ(certify_minpoly(s2, a, {}).outcome.reject().check_id, "minpoly-shape");
}

TEST(Precondition, ScalesRows) {
  const PrimeField f(kMersenne61);
  const oracle::Mod m{kMersenne61};
  std::mt19937_64 rng(4);
  HonestProver honest;
  const SparseMatrix id = SparseMatrix::identity(5, kMersenne61);
  Session s = interactive_session(ProtocolTag::Det, id, honest, 1);
  const auto [b, d] = precondition_diagonal(s, id);
  Scalar prod = f.one();
  for (std::size_t i = 0; i < 5; ++i) {
    EXPECT_NE(d[i].value, 0u);
    EXPECT_EQ(b.row(i).size(), 1u);
    prod = f.mul(prod, d[i]);
  }
  EXPECT_EQ(oracle::det(m, oracle::dense(b)), prod.value);

  for (std::size_t n = 1; n <= 8; ++n) {
    const SparseMatrix a = random_sparse(n, 1 + rng() % n, f, rng());
    Session sa = interactive_session(ProtocolTag::Det, a, honest, n);
    const auto [ba, da] = precondition_diagonal(sa, a);
    Scalar pa = f.one();
    for (Scalar x : da) pa = f.mul(pa, x);
    EXPECT_EQ(oracle::det(m, oracle::dense(ba)), m.mul(oracle::det(m, oracle::dense(a)), pa.value));
    EXPECT_EQ(ba.mu(), a.mu());
    const Vector v = testing::random_vector(f, n, rng);
    const Vector av = matvec(f, a, v);
    const Vector bv = matvec(f, ba, v);
    for (std::size_t i = 0; i < n; ++i) EXPECT_EQ(bv[i], f.mul(da[i], av[i]));
  }
}

TEST(Det, SmallExamples) {
  const RunResult id = run_app(SparseMatrix::identity(6, kMersenne61), ProtocolTag::Det);
  ASSERT_TRUE(id.outcome.accepted());
  EXPECT_EQ(id.value->value, 1u);

  const RunResult d = run_app(diagonal(101, {2, 3, 5}), ProtocolTag::Det);
  ASSERT_TRUE(d.outcome.accepted()) << d.outcome;
  EXPECT_EQ(d.value->value, 30u);
}

TEST(Det, MatchesOracleForEveryInnerProtocol) {
  const PrimeField f(kMersenne61);
  const oracle::Mod m{kMersenne61};
  std::mt19937_64 rng(5);
  const SequenceProtocol inners[] = {{SequenceKind::Checkpoint, 0}, {SequenceKind::Dense, 0},
                                     {SequenceKind::KLevel, 2},     {SequenceKind::KLevel, 3},
                                     {SequenceKind::SeqLog, 0},     {SequenceKind::SeqSingle, 0}};
  for (int trial = 0; trial < 30; ++trial) {
    const std::size_t n = 2 + rng() % 40;
    const SparseMatrix a = random_instance(f, n, rng);
    const SequenceProtocol inner = inners[trial % 6];
    const RunResult r = run_app(a, ProtocolTag::Det, inner);
    ASSERT_TRUE(r.outcome.accepted()) << r.outcome << " n=" << n;
    EXPECT_EQ(r.value->value, oracle::det(m, oracle::dense(a)));
  }
}

TEST(Det, SingularMatricesUseAKernelWitness) {
  const PrimeField f(kMersenne61);
  // Row 2 duplicates row 0.
  const SparseMatrix a(3, kMersenne61, {{0, 0, Scalar{1}}, {0, 1, Scalar{2}}, {1, 2, Scalar{7}}, {2, 0, Scalar{1}},
                                        {2, 1, Scalar{2}}});
  const RunResult r = run_app(a, ProtocolTag::Det);
  ASSERT_TRUE(r.outcome.accepted());
  EXPECT_EQ(r.value->value, 0u);
  EXPECT_EQ(r.ledger.verifier.matvecs, 1u);

  CorruptingProver wrong([&](const Request& req, Payload& p, std::size_t) {
    if (is<KernelRequest>(req)) testing::bump(f, p[0], 0);
  });
  Session s1 = interactive_session(ProtocolTag::Det, a, wrong, 1);
  const auto r1 = certify_det(s1, a, {});
  ASSERT_FALSE(r1.outcome.accepted());
  EXPECT_EQ(r1.outcome.reject().check_id, "kernel-witness");
  EXPECT_EQ(r1.outcome.reject().location, (std::vector<u64>{1}));

  CorruptingProver zero([&](const Request& req, Payload& p, std::size_t) {
    if (is<KernelRequest>(req)) p[0] = Vector(3);
  });
  Session s2 = interactive_session(ProtocolTag::Det, a, zero, 1);
  EXPECT_EQ(certify_det(s2, a, {}).outcome.reject().location, (std::vector<u64>{0}));

}

TEST(Det, WrongNonzeroClaimIsRejected) {
  const PrimeField f(kMersenne61);
  std::mt19937_64 rng(6);
  const SparseMatrix a = random_instance(f, 12, rng);
  CorruptingProver bad([&](const Request& r, Payload& p, std::size_t) {
    if (is<DetClaimRequest>(r)) testing::bump(f, p[0], 0);
  });
  Session s = interactive_session(ProtocolTag::Det, a, bad, 1);
  const auto r = certify_det(s, a, {});
  ASSERT_FALSE(r.outcome.accepted());
  EXPECT_EQ(r.outcome.reject().check_id, "det-claim");
}

TEST(Det, TinySampleSetExhaustsPreconditioners) {
  // With S = {0, 1} every preconditioner is the identity, and the minimal
  // polynomial of the 2x2 identity has degree 1.
  HonestProver honest;
  const SparseMatrix id = SparseMatrix::identity(2, 101);
  Session s = interactive_session(ProtocolTag::Det, id, honest, 1, 2);
  const auto r = certify_det(s, id, {});
  ASSERT_FALSE(r.outcome.accepted());
  EXPECT_EQ(r.outcome.reject().check_id, "degree-deficient");
}

TEST(CharPoly, SmallExamples) {
  const RunResult zero = run_app(SparseMatrix(3, 101, {}), ProtocolTag::CharPoly);
  ASSERT_TRUE(zero.outcome.accepted()) << zero.outcome;
  EXPECT_EQ(*zero.polynomial, Polynomial(vec({0, 0, 0, 1})));

  const RunResult d = run_app(diagonal(101, {1, 2}), ProtocolTag::CharPoly);
  ASSERT_TRUE(d.outcome.accepted()) << d.outcome;
  EXPECT_EQ(*d.polynomial, Polynomial(vec({2, 98, 1})));
}

TEST(CharPoly, MatchesOracle) {
  const PrimeField f(kMersenne61);
  const oracle::Mod m{kMersenne61};
  std::mt19937_64 rng(7);
  for (int trial = 0; trial < 20; ++trial) {
    const std::size_t n = 1 + rng() % 32;
    const SparseMatrix a = random_sparse(n, 1 + rng() % std::min<std::size_t>(n, 3), f, rng());
    const RunResult r = run_app(a, ProtocolTag::CharPoly);
    ASSERT_TRUE(r.outcome.accepted()) << r.outcome;
    EXPECT_EQ(*r.polynomial, poly(oracle::charpoly(m, oracle::dense(a))));
  }
}

TEST(CharPoly, FlippedCoefficientIsCaught) {
  const PrimeField f(101);
  const std::size_t n = 8;
  const int trials = 2000;
  int accepted = 0;
  for (int trial = 0; trial < trials; ++trial) {
    const SparseMatrix a = random_sparse(n, 3, f, trial);
    CorruptingProver bad([&](const Request& r, Payload& p, std::size_t) {
      if (is<CharPolyClaimRequest>(r)) testing::bump(f, p[0], trial % n);
    });
    Session s = interactive_session(ProtocolTag::CharPoly, a, bad, 50 + trial);
    accepted += certify_charpoly(s, a, {}).outcome.accepted();
  }
  EXPECT_LE(accepted / double(trials), acceptance_threshold(n, 101, trials));
}

TEST(CharPoly, NonMonicClaimIsRejected) {
  const PrimeField f(kMersenne61);
  const SparseMatrix a = random_sparse(4, 2, f, 1);
  CorruptingProver bad([&](const Request& r, Payload& p, std::size_t) {
    if (is<CharPolyClaimRequest>(r)) p[0].back() = Scalar{3};
  });
  Session s = interactive_session(ProtocolTag::CharPoly, a, bad, 1);
  EXPECT_EQ(certify_charpoly(s, a, {}).outcome.reject().check_id, "charpoly-shape");
}

}  // namespace
}  // namespace kcert
