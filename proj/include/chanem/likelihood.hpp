#pragma once

// Incomplete-data likelihood p(y | theta), conditioned on the first observed
// state. A gap with g hidden slots contributes [P^(g+1)]_{a,b}.

#include <cstdint>
#include <span>
#include <vector>

#include "chanem/markov.hpp"
#include "chanem/observation.hpp"

namespace chanem {

struct NStepMatrix {
  std::int64_t n = 1;
  Matrix2 p{};
};

/// P^n for n >= 1, rows renormalized after every product.
NStepMatrix n_step_matrix(const ChannelParams& params, std::int64_t n);

Matrix2 multiply(const Matrix2& a, const Matrix2& b) noexcept;

/// All gaps of one hidden length, counted by (start_state, end_state).
struct GapClass {
  std::int64_t hidden_len = 0;
  std::array<std::array<std::uint64_t, 2>, 2> count{};
};

/// A dataset reduced to gap counts. Likelihood and E-step depend on nothing
/// else, so per-iteration cost scales with the number of distinct gap lengths.
class GapSummary {
 public:
  explicit GapSummary(const ObservedDataset& dataset);

  std::span<const GapClass> classes() const noexcept { return classes_; }
  std::int64_t transitions() const noexcept { return transitions_; }
  std::int64_t max_hidden_len() const noexcept { return max_hidden_len_; }

 private:
  std::vector<GapClass> classes_;  // ascending hidden_len
  std::int64_t transitions_ = 0;
  std::int64_t max_hidden_len_ = 0;
};

/// P^0 .. P^max_power, built by repeated multiplication.
class PowerTable {
 public:
  PowerTable(const TransitionMatrix& step, std::int64_t max_power);

  const Matrix2& operator[](std::int64_t n) const {
    return powers_[static_cast<std::size_t>(n)];
  }
  std::int64_t max_power() const noexcept {
    return static_cast<std::int64_t>(powers_.size()) - 1;
  }

 private:
  std::vector<Matrix2> powers_;
};

double incomplete_log_likelihood(const ObservedDataset& dataset,
                                 const ChannelParams& params);
double incomplete_log_likelihood(const GapSummary& summary,
                                 const ChannelParams& params);

inline constexpr int kBruteForceMaxHidden = 20;

/// Linear-scale p(y | theta) by enumerating every completion of the hidden
/// slots. Test oracle; limited to kBruteForceMaxHidden hidden slots in total.
double brute_force_likelihood(const ObservedDataset& dataset,
                              const ChannelParams& params);

inline constexpr double kSeFloorDb = -320.0;

enum class SeScale {
  per_transition,  // geometric mean likelihood per transition
  raw,             // p(y | theta) itself; only for small instances
};

/// exp(loglik / transitions), the per-transition geometric-mean likelihood.
double mean_transition_likelihood(const GapSummary& summary,
                                  const ChannelParams& params);

/// 10 log10 |a - b|^2, floored at kSeFloorDb.
double squared_error_db(double value, double reference) noexcept;

double squared_error_db(const ObservedDataset& dataset,
                        const ChannelParams& estimate, const ChannelParams& truth,
                        SeScale scale = SeScale::per_transition);

}  // namespace chanem
