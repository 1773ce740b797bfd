#pragma once

// Sufficient statistics and the exponential-family form of the transition
// likelihood. The first-slot factor p(x_1) is not part of any likelihood here:
// everything is conditioned on the first state.

#include "chanem/markov.hpp"

namespace chanem {

/// Transition counts. Integers for complete data, expectations in the E-step.
struct SufficientStats {
  double t01 = 0.0;  // 0 -> 1 transitions
  double t10 = 0.0;  // 1 -> 0 transitions
  double T0 = 0.0;   // transitions leaving state 0
  double T1 = 0.0;   // transitions leaving state 1

  friend bool operator==(const SufficientStats&, const SufficientStats&) = default;
};

/// Log-odds of alpha and beta.
struct NaturalParams {
  double eta1 = 0.0;
  double eta2 = 0.0;
};

struct LogPartition {
  double A1 = 0.0;
  double A2 = 0.0;
};

SufficientStats count_statistics(const StateSequence& sequence);

/// Complete-data MLE (t01/T0, t10/T1). Boundary values 0 and 1 are returned
/// as-is.
ChannelParams mle_complete(const SufficientStats& stats);

NaturalParams to_natural(const ChannelParams& params);
ChannelParams from_natural(const NaturalParams& nat) noexcept;

/// A_i = log(1 + e^eta_i), overflow-safe.
LogPartition log_partition(const NaturalParams& nat) noexcept;

/// t01 log a + (T0 - t01) log(1 - a) + t10 log b + (T1 - t10) log(1 - b).
double complete_log_likelihood(const SufficientStats& stats,
                               const ChannelParams& params);

/// The same quantity written as eta1 t01 - T0 A1 + eta2 t10 - T1 A2.
double complete_log_likelihood_natural(const SufficientStats& stats,
                                       const NaturalParams& nat) noexcept;

}  // namespace chanem
