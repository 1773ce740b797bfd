#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "chanem/error.hpp"
#include "chanem/expfam.hpp"
#include "oracles.hpp"

namespace chanem {
namespace {

StateSequence seq(std::initializer_list<int> v) {
  StateSequence out;
  for (int x : v) out.push_back(static_cast<SlotState>(x));
  return out;
}

TEST(CountStatistics, Examples) {
  EXPECT_EQ(count_statistics(seq({0, 1, 0, 1, 0})), (SufficientStats{2, 2, 2, 2}));
  EXPECT_EQ(count_statistics(seq({0, 0, 0, 0})), (SufficientStats{0, 0, 3, 0}));
  EXPECT_EQ(count_statistics(seq({0, 0, 0, 0, 1})), (SufficientStats{1, 0, 4, 0}));
}

TEST(CountStatistics, PathProbabilityOfFirstGapCompletion) {
  // [0,0,0,0,1] has probability (1 - a)^3 a.
  const auto stats = count_statistics(seq({0, 0, 0, 0, 1}));
  for (double a : {0.2, 0.5, 0.8}) {
    EXPECT_NEAR(std::exp(complete_log_likelihood(stats, {a, 0.4})),
                std::pow(1 - a, 3) * a, 1e-14);
  }
}

TEST(CountStatistics, TooShort) {
  try {
    count_statistics(seq({1}));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::too_short_sequence);
  }
}

TEST(CountStatistics, TransitionTotalInvariant) {
  Rng rng(1);
  for (int i = 0; i < 200; ++i) {
    const auto T = 2 + static_cast<std::int64_t>(rng.below(300));
    const auto x = simulate_chain(testing::random_params(rng, 0.0, 1.0), T, rng.next());
    const auto s = count_statistics(x);
    EXPECT_EQ(s.T0 + s.T1, static_cast<double>(T - 1));
    EXPECT_LE(s.t01, s.T0);
    EXPECT_LE(s.t10, s.T1);
  }
}

TEST(MleComplete, Examples) {
  const auto a = mle_complete({8, 3, 10, 10});
  EXPECT_DOUBLE_EQ(a.alpha, 0.8);
  EXPECT_DOUBLE_EQ(a.beta, 0.3);
  EXPECT_EQ(mle_complete({2, 2, 2, 2}), (ChannelParams{1.0, 1.0}));
  EXPECT_EQ(mle_complete({0, 3, 5, 3}), (ChannelParams{0.0, 1.0}));
}

TEST(MleComplete, InsufficientData) {
  try {
    mle_complete({0, 0, 3, 0});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::insufficient_data);
  }
}

TEST(MleComplete, LargeSampleAccuracy) {
  const auto x = simulate_chain({0.8, 0.3}, 1000000, 314);
  const auto est = mle_complete(count_statistics(x));
  EXPECT_NEAR(est.alpha, 0.8, 0.005);
  EXPECT_NEAR(est.beta, 0.3, 0.005);
}

// Error at T = 1e6 beats error at T = 1e4 in at least 95 of 100 trials.
TEST(MleComplete, ErgodicConsistency) {
  const ChannelParams truth{0.8, 0.3};
  int better = 0;
  for (std::uint64_t trial = 0; trial < 100; ++trial) {
    auto err = [&](std::int64_t T, std::uint64_t stream) {
      const auto e = mle_complete(count_statistics(simulate_chain(truth, T, derive_seed(77, trial, stream))));
      return std::hypot(e.alpha - truth.alpha, e.beta - truth.beta);
    };
    better += err(1000000, 0) < err(10000, 1);
  }
  EXPECT_GE(better, 95);
}

TEST(MleComplete, GradientVanishesAtEstimate) {
  Rng rng(8);
  for (int i = 0; i < 100; ++i) {
    const double T0 = 1 + static_cast<double>(rng.below(50));
    const double T1 = 1 + static_cast<double>(rng.below(50));
    const SufficientStats s{static_cast<double>(rng.below(static_cast<std::uint64_t>(T0) + 1)),
                            static_cast<double>(rng.below(static_cast<std::uint64_t>(T1) + 1)),
                            T0, T1};
    const auto m = mle_complete(s);
    if (!is_interior(m)) continue;
    const double ga = testing::central_difference(
        [&](double a) { return complete_log_likelihood(s, {a, m.beta}); }, m.alpha,
        1e-4 * std::min(m.alpha, 1 - m.alpha));
    const double gb = testing::central_difference(
        [&](double b) { return complete_log_likelihood(s, {m.alpha, b}); }, m.beta,
        1e-4 * std::min(m.beta, 1 - m.beta));
    EXPECT_NEAR(ga, 0.0, 1e-6);
    EXPECT_NEAR(gb, 0.0, 1e-6);
  }
}

TEST(NaturalParams, Examples) {
  const auto n = to_natural({0.5, 0.5});
  EXPECT_DOUBLE_EQ(n.eta1, 0.0);
  EXPECT_DOUBLE_EQ(n.eta2, 0.0);
  const auto m = to_natural({0.8, 0.3});
  EXPECT_NEAR(m.eta1, 1.3862943611198906, 1e-12);
  EXPECT_NEAR(m.eta2, -0.8472978603872037, 1e-12);
  const auto back = from_natural({1.3863, -0.8473});
  EXPECT_NEAR(back.alpha, 0.8, 1e-4);
  EXPECT_NEAR(back.beta, 0.3, 1e-4);
  EXPECT_EQ(from_natural({0, 0}), (ChannelParams{0.5, 0.5}));
  EXPECT_NEAR(from_natural({40, -40}).alpha, 1.0, 1e-12);
}

TEST(NaturalParams, BoundaryRejected) {
  for (ChannelParams p : {ChannelParams{0.0, 0.5}, ChannelParams{0.5, 1.0}}) {
    try {
      to_natural(p);
      FAIL();
    } catch (const Error& e) {
      EXPECT_EQ(e.kind(), ErrorKind::boundary_parameter);
    }
  }
}

TEST(NaturalParams, RoundTripAndSaturation) {
  for (int i = 1; i <= 9; ++i) {
    for (int k = 1; k <= 9; ++k) {
      const ChannelParams p{i / 10.0, k / 10.0};
      const auto q = from_natural(to_natural(p));
      EXPECT_NEAR(q.alpha, p.alpha, 1e-12);
      EXPECT_NEAR(q.beta, p.beta, 1e-12);
    }
  }
  const auto hi = from_natural({700, -700});
  EXPECT_EQ(hi.alpha, 1.0);
  EXPECT_GE(hi.beta, 0.0);
  EXPECT_TRUE(std::isfinite(log_partition({700, -700}).A1));
  EXPECT_NEAR(log_partition({700, -700}).A1, 700.0, 1e-12);
}

TEST(LogPartition, ValueAndSlopeAtZero) {
  EXPECT_DOUBLE_EQ(log_partition({0, 0}).A1, std::log(2.0));
  const double d = testing::central_difference(
      [](double e) { return log_partition({e, 0}).A1; }, 0.0, 1e-5);
  EXPECT_NEAR(d, 0.5, 1e-8);
}

// dA/deta recovers the conventional parameter over the 19 x 19 grid.
TEST(LogPartition, GradientIdentity) {
  for (int i = 1; i <= 19; ++i) {
    for (int k = 1; k <= 19; ++k) {
      const ChannelParams p{0.05 * i, 0.05 * k};
      const auto n = to_natural(p);
      const double d1 = testing::central_difference(
          [&](double e) { return log_partition({e, n.eta2}).A1; }, n.eta1, 1e-5);
      const double d2 = testing::central_difference(
          [&](double e) { return log_partition({n.eta1, e}).A2; }, n.eta2, 1e-5);
      EXPECT_NEAR(d1, p.alpha, 1e-7);
      EXPECT_NEAR(d2, p.beta, 1e-7);
    }
  }
}

TEST(CompleteLogLikelihood, Examples) {
  EXPECT_NEAR(complete_log_likelihood({1, 0, 4, 0}, {0.8, 0.3}), -5.051457288616511, 1e-12);
  EXPECT_EQ(complete_log_likelihood({0, 0, 0, 0}, {0.4, 0.6}), 0.0);
  EXPECT_THROW(complete_log_likelihood({1, 0, 4, 0}, {1.0, 0.3}), Error);
}

TEST(CompleteLogLikelihood, NaturalFormAgrees) {
  Rng rng(21);
  for (int i = 0; i < 100; ++i) {
    const double T0 = static_cast<double>(rng.below(1000));
    const double T1 = static_cast<double>(rng.below(1000));
    const SufficientStats s{std::floor(T0 * rng.uniform()), std::floor(T1 * rng.uniform()), T0, T1};
    const ChannelParams p = testing::random_params(rng, 0.01, 0.99);
    EXPECT_NEAR(complete_log_likelihood(s, p),
                complete_log_likelihood_natural(s, to_natural(p)), 1e-10);
  }
}

}  // namespace
}  // namespace chanem
