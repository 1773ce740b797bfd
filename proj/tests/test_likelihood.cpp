#include <gtest/gtest.h>

#include <cmath>

#include "chanem/error.hpp"
#include "chanem/expfam.hpp"
#include "chanem/likelihood.hpp"
#include "oracles.hpp"

namespace chanem {
namespace {

using S = SlotState;

const ObservedDataset kGapExample{{1, 5}, {S::occupied, S::idle}};
constexpr double kGapExampleLikelihood = 0.7272;  // 8-path enumeration at (0.8, 0.3)

TEST(NStepMatrix, MemorylessChain) {
  for (std::int64_t n : {1, 2, 7, 1000}) {
    const auto m = n_step_matrix({0.5, 0.5}, n);
    for (auto& row : m.p)
      for (double x : row) EXPECT_DOUBLE_EQ(x, 0.5);
  }
}

TEST(NStepMatrix, FourStepEntry) {
  EXPECT_NEAR(n_step_matrix({0.8, 0.3}, 4).p[0][1], kGapExampleLikelihood, 1e-12);
  const auto two = n_step_matrix({0.8, 0.3}, 2);
  EXPECT_NEAR(two.p[0][0], 0.28, 1e-15);
  EXPECT_NEAR(two.p[1][1], 0.73, 1e-15);
}

TEST(NStepMatrix, OneStepIsTransitionMatrix) {
  EXPECT_EQ(n_step_matrix({0.37, 0.81}, 1).p, transition_matrix({0.37, 0.81}).p);
  EXPECT_THROW(n_step_matrix({0.3, 0.3}, 0), Error);
}

TEST(NStepMatrix, ChapmanKolmogorovAndStochastic) {
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const ChannelParams p{rng.uniform(), rng.uniform()};
    const auto a = 1 + static_cast<std::int64_t>(rng.below(40));
    const auto b = 1 + static_cast<std::int64_t>(rng.below(40));
    const auto ab = multiply(n_step_matrix(p, a).p, n_step_matrix(p, b).p);
    const auto direct = n_step_matrix(p, a + b).p;
    for (int r = 0; r < 2; ++r) {
      EXPECT_NEAR(direct[r][0] + direct[r][1], 1.0, 1e-10);
      for (int c = 0; c < 2; ++c) EXPECT_NEAR(direct[r][c], ab[r][c], 1e-10);
    }
  }
}

TEST(NStepMatrix, LongHorizonReachesStationarity) {
  const auto m = n_step_matrix({0.8, 0.3}, 10000000);
  EXPECT_NEAR(m.p[0][0], utilization({0.8, 0.3}), 1e-12);
  EXPECT_NEAR(m.p[1][0], utilization({0.8, 0.3}), 1e-12);
}

TEST(PowerTable, AgreesWithNStepMatrix) {
  const ChannelParams p{0.23, 0.71};
  const PowerTable table(transition_matrix(p), 30);
  for (std::int64_t n = 1; n <= 30; ++n)
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) EXPECT_NEAR(table[n][r][c], n_step_matrix(p, n).p[r][c], 1e-13);
}

TEST(IncompleteLogLikelihood, GapExample) {
  EXPECT_NEAR(incomplete_log_likelihood(kGapExample, {0.8, 0.3}),
              std::log(kGapExampleLikelihood), 1e-12);
}

TEST(IncompleteLogLikelihood, CompleteDataReduction) {
  Rng rng(4);
  for (int i = 0; i < 50; ++i) {
    const ChannelParams truth = testing::random_params(rng);
    const auto x = simulate_chain(truth, 2 + static_cast<std::int64_t>(rng.below(500)), rng.next());
    const auto d = observe(x, ObservationSchedule::fixed(0));
    const ChannelParams p = testing::random_params(rng);
    EXPECT_NEAR(incomplete_log_likelihood(d, p), complete_log_likelihood(count_statistics(x), p), 1e-10);
  }
}

TEST(IncompleteLogLikelihood, MemorylessChainGivesHalfPerGap) {
  Rng rng(5);
  for (int i = 0; i < 20; ++i) {
    const auto d = testing::random_small_dataset(rng, 50, 30);
    EXPECT_NEAR(incomplete_log_likelihood(d, {0.5, 0.5}),
                static_cast<double>(d.size() - 1) * std::log(0.5), 1e-10);
  }
}

TEST(IncompleteLogLikelihood, BoundaryParameters) {
  try {
    incomplete_log_likelihood(kGapExample, {0.0, 0.3});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::boundary_parameter);
  }
}

TEST(BruteForce, GapExampleThreeRoutes) {
  const double a = 0.8, b = 0.3;
  // The eight completions of [0, x2, x3, x4, 1]; the last is a (1 - b)^3.
  const double formula = std::pow(1 - a, 3) * a + std::pow(1 - a, 2) * a * (1 - b) +
                         (1 - a) * a * a * b + (1 - a) * a * std::pow(1 - b, 2) +
                         (1 - a) * a * a * b + a * a * (1 - b) * b + a * a * (1 - b) * b +
                         a * std::pow(1 - b, 3);
  EXPECT_NEAR(brute_force_likelihood(kGapExample, {a, b}), kGapExampleLikelihood, 1e-12);
  EXPECT_NEAR(formula, kGapExampleLikelihood, 1e-12);
  EXPECT_NEAR(n_step_matrix({a, b}, 4).p[0][1], kGapExampleLikelihood, 1e-12);
}

TEST(BruteForce, AllObservedIsPathProduct) {
  const ObservedDataset d{{1, 2, 3, 4}, {S::occupied, S::idle, S::idle, S::occupied}};
  EXPECT_NEAR(brute_force_likelihood(d, {0.8, 0.3}), 0.8 * 0.7 * 0.3, 1e-15);
}

TEST(BruteForce, TotalProbabilityOverLastState) {
  Rng rng(6);
  for (int i = 0; i < 50; ++i) {
    auto d = testing::random_small_dataset(rng, 10, 6);
    const ChannelParams p = testing::random_params(rng);
    ObservedDataset prefix = d;
    prefix.times.pop_back();
    prefix.states.pop_back();
    if (prefix.size() < 2) continue;
    d.states.back() = S::occupied;
    const double l0 = brute_force_likelihood(d, p);
    d.states.back() = S::idle;
    const double l1 = brute_force_likelihood(d, p);
    EXPECT_NEAR(l0 + l1, brute_force_likelihood(prefix, p), 1e-12);
  }
}

TEST(BruteForce, InstanceTooLarge) {
  try {
    brute_force_likelihood(ObservedDataset{{1, 23}, {S::idle, S::idle}}, {0.5, 0.5});
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::instance_too_large);
  }
}

TEST(IncompleteLogLikelihood, MatchesEnumeration) {
  Rng rng(7);
  for (int i = 0; i < 200; ++i) {
    const auto d = testing::random_small_dataset(rng, 12, 8);
    const ChannelParams p = testing::random_params(rng);
    const double oracle = brute_force_likelihood(d, p);
    EXPECT_NEAR(std::exp(incomplete_log_likelihood(d, p)) / oracle, 1.0, 1e-10);
  }
}

// Observing one more hidden slot splits the likelihood into its two states.
TEST(IncompleteLogLikelihood, FactorizesOverInsertedObservation) {
  Rng rng(8);
  int checked = 0;
  while (checked < 100) {
    const auto d = testing::random_small_dataset(rng, 20, 10);
    std::vector<std::int64_t> hidden;
    for (std::int64_t t = 1, k = 0; t <= d.times.back(); ++t) {
      if (t == d.times[static_cast<std::size_t>(k)]) ++k;
      else hidden.push_back(t);
    }
    if (hidden.empty()) continue;
    const std::int64_t slot = hidden[rng.below(hidden.size())];
    const ChannelParams p = testing::random_params(rng);
    double split = 0;
    for (S s : {S::occupied, S::idle}) {
      ObservedDataset e;
      for (std::size_t k = 0; k < d.size(); ++k) {
        if (d.times[k] > slot && (e.times.empty() || e.times.back() < slot)) {
          e.times.push_back(slot);
          e.states.push_back(s);
        }
        e.times.push_back(d.times[k]);
        e.states.push_back(d.states[k]);
      }
      split += std::exp(incomplete_log_likelihood(e, p));
    }
    EXPECT_NEAR(split / std::exp(incomplete_log_likelihood(d, p)), 1.0, 1e-10);
    ++checked;
  }
}

TEST(SquaredError, FloorWhenEqual) {
  Rng rng(9);
  const auto d = observe(simulate_chain({0.8, 0.3}, 2000, 1), ObservationSchedule::fixed(4));
  for (int i = 1; i <= 9; ++i)
    for (int k = 1; k <= 9; ++k) {
      const ChannelParams p{i / 10.0, k / 10.0};
      EXPECT_EQ(squared_error_db(d, p, p), kSeFloorDb);
      EXPECT_EQ(squared_error_db(d, p, p, SeScale::raw), kSeFloorDb);
    }
}

TEST(SquaredError, RawModeGapExample) {
  EXPECT_NEAR(squared_error_db(kGapExample, {0.5, 0.5}, {0.8, 0.3}, SeScale::raw),
              -12.871833459220381, 1e-9);
}

TEST(SquaredError, PerTransitionScale) {
  const auto d = observe(simulate_chain({0.8, 0.3}, 500001, 12), ObservationSchedule::fixed(4));
  const GapSummary summary(d);
  const double lt = mean_transition_likelihood(summary, {0.8, 0.3});
  const double le = mean_transition_likelihood(summary, {0.6, 0.5});
  EXPECT_GT(lt, 0.0);
  EXPECT_LT(lt, 1.0);
  EXPECT_NEAR(squared_error_db(d, {0.6, 0.5}, {0.8, 0.3}), 20.0 * std::log10(std::abs(le - lt)), 1e-9);
  // SE orders estimates by how closely their likelihood matches the reference.
  const double near = squared_error_db(d, {0.79, 0.297}, {0.8, 0.3});
  const double far = squared_error_db(d, {0.3, 0.7}, {0.8, 0.3});
  EXPECT_LT(near, far);
}

TEST(GapSummary, CountsEveryGap) {
  Rng rng(10);
  const auto d = testing::random_small_dataset(rng, 40, 30);
  const GapSummary s(d);
  std::uint64_t total = 0;
  for (const auto& c : s.classes())
    for (auto& row : c.count)
      for (auto n : row) total += n;
  EXPECT_EQ(total, d.size() - 1);
  EXPECT_EQ(s.transitions(), d.times.back() - 1);
}

}  // namespace
}  // namespace chanem
