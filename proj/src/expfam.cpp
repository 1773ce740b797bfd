#include "chanem/expfam.hpp"

#include <cmath>

#include "chanem/error.hpp"

namespace chanem {

namespace {

double log1p_exp(double x) noexcept {
  return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x));
}

double logistic(double x) noexcept {
  if (x >= 0.0) return 1.0 / (1.0 + std::exp(-x));
  const double e = std::exp(x);
  return e / (1.0 + e);
}

void require_interior(const ChannelParams& params, const char* op) {
  validate(params);
  if (!is_interior(params)) {
    throw Error(ErrorKind::boundary_parameter,
                std::string(op) + " requires alpha, beta strictly inside (0, 1)");
  }
}

}  // namespace

SufficientStats count_statistics(const StateSequence& sequence) {
  if (sequence.size() < 2) {
    throw Error(ErrorKind::too_short_sequence,
                "sufficient statistics need at least 2 slots");
  }
  std::int64_t t01 = 0, t10 = 0, T0 = 0;
  for (std::size_t t = 1; t < sequence.size(); ++t) {
    const SlotState prev = sequence[t - 1];
    const SlotState cur = sequence[t];
    if (prev == SlotState::occupied) {
      ++T0;
      if (cur == SlotState::idle) ++t01;
    } else if (cur == SlotState::occupied) {
      ++t10;
    }
  }
  const auto T1 = static_cast<std::int64_t>(sequence.size()) - 1 - T0;
  return {static_cast<double>(t01), static_cast<double>(t10),
          static_cast<double>(T0), static_cast<double>(T1)};
}

ChannelParams mle_complete(const SufficientStats& stats) {
  if (!(stats.T0 > 0.0) || !(stats.T1 > 0.0)) {
    throw Error(ErrorKind::insufficient_data,
                "complete-data MLE needs transitions out of both states (T0=" +
                    std::to_string(stats.T0) + ", T1=" + std::to_string(stats.T1) +
                    ")");
  }
  return {stats.t01 / stats.T0, stats.t10 / stats.T1};
}

NaturalParams to_natural(const ChannelParams& params) {
  require_interior(params, "to_natural");
  return {std::log(params.alpha) - std::log1p(-params.alpha),
          std::log(params.beta) - std::log1p(-params.beta)};
}

ChannelParams from_natural(const NaturalParams& nat) noexcept {
  return {logistic(nat.eta1), logistic(nat.eta2)};
}

LogPartition log_partition(const NaturalParams& nat) noexcept {
  return {log1p_exp(nat.eta1), log1p_exp(nat.eta2)};
}

double complete_log_likelihood(const SufficientStats& stats,
                               const ChannelParams& params) {
  require_interior(params, "complete_log_likelihood");
  return stats.t01 * std::log(params.alpha) +
         (stats.T0 - stats.t01) * std::log1p(-params.alpha) +
         stats.t10 * std::log(params.beta) +
         (stats.T1 - stats.t10) * std::log1p(-params.beta);
}

double complete_log_likelihood_natural(const SufficientStats& stats,
                                       const NaturalParams& nat) noexcept {
  const LogPartition a = log_partition(nat);
  return nat.eta1 * stats.t01 - stats.T0 * a.A1 + nat.eta2 * stats.t10 -
         stats.T1 * a.A2;
}

}  // namespace chanem
