#pragma once

// E-M estimation of (alpha, beta) from an incomplete dataset.
//
// E-step: every gap (a, b, g) is a Markov bridge pinned at both ends. The
// posterior law of its j-th transition (j = 0..g) is
//     P(x_j = u, x_{j+1} = v | a, b) = [P^j]_{a,u} P_{u,v} [P^(g-j)]_{v,b} / [P^(g+1)]_{a,b}
// and summing these gives the expected transition counts.
// M-step: the complete-data ratio estimates applied to the expected counts.

#include <cstddef>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "chanem/expfam.hpp"
#include "chanem/likelihood.hpp"
#include "chanem/markov.hpp"
#include "chanem/observation.hpp"

namespace chanem {

struct EmConfig {
  int max_iterations = 100;
  double param_tolerance = 0.0;  // stop when max(|d alpha|, |d beta|) < tol; 0 disables
  double clamp_epsilon = 1e-9;   // iterates are kept in [eps, 1 - eps]
  bool record_trajectory = false;
};

void validate(const EmConfig& config);

struct EmStep {
  int p = 0;
  double alpha = 0.0;
  double beta = 0.0;
  double loglik = 0.0;
};

struct EmTrajectory {
  std::vector<EmStep> steps;  // p = 0 is the (clamped) start
  std::optional<int> converged_at;
};

struct EstimateReport {
  ChannelParams estimate;
  ChannelParams start;
  int iterations_run = 0;
  double se_db = kSeFloorDb;
  std::optional<double> gamma_percent;
  std::optional<EmTrajectory> trajectory;
  double log_likelihood = 0.0;  // incomplete-data loglik at the estimate
};

SufficientStats e_step(const ObservedDataset& dataset, const ChannelParams& params);
SufficientStats e_step(const GapSummary& summary, const ChannelParams& params);

ChannelParams m_step(const SufficientStats& expected, double clamp_epsilon);

/// Runs E-M from `start`. With `truth`, se_db and gamma_percent are measured
/// against it; without, se_db is the floor (a lone run is its own reference).
EstimateReport run_em(const ObservedDataset& dataset, const ChannelParams& start,
                      const EmConfig& config,
                      std::optional<ChannelParams> truth = std::nullopt);
EstimateReport run_em(const GapSummary& summary, const ChannelParams& start,
                      const EmConfig& config,
                      std::optional<ChannelParams> truth = std::nullopt);

struct MultiStartResult {
  std::size_t winner = 0;
  std::vector<EstimateReport> runs;  // runs[i] is meaningful iff errors[i] is empty
  std::vector<std::string> errors;

  const EstimateReport& best() const { return runs[winner]; }
};

/// One E-M run per start; the winner has the least squared error, then the
/// higher log-likelihood, then the lower start index.
///
/// The SE reference is the per-transition likelihood of `truth` when given.
/// Otherwise it is the largest per-transition likelihood reached by any run,
/// which amounts to choosing the most likely local maximum.
MultiStartResult multi_start(const ObservedDataset& dataset,
                             std::span<const ChannelParams> starts,
                             const EmConfig& config,
                             std::optional<ChannelParams> truth = std::nullopt);

/// Starting points on the line beta = m * alpha with m = u / (1 - u), where u
/// is the observed fraction of occupied slots.
std::vector<ChannelParams> heuristic_starts(const ObservedDataset& dataset,
                                            std::size_t count,
                                            double clamp_epsilon = 1e-9);

/// Average relative error in percent.
double relative_error(const ChannelParams& estimate, const ChannelParams& truth);

}  // namespace chanem
