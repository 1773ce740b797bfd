#include "chanem/em.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "chanem/error.hpp"

namespace chanem {

void validate(const EmConfig& config) {
  if (config.max_iterations < 1) {
    throw Error(ErrorKind::invalid_argument, "max_iterations must be >= 1");
  }
  if (!(config.param_tolerance >= 0.0)) {
    throw Error(ErrorKind::invalid_argument, "param_tolerance must be >= 0");
  }
  if (!(config.clamp_epsilon > 0.0 && config.clamp_epsilon <= 0.01)) {
    throw Error(ErrorKind::invalid_argument, "clamp_epsilon must lie in (0, 0.01]");
  }
}

SufficientStats e_step(const ObservedDataset& dataset, const ChannelParams& params) {
  return e_step(GapSummary(dataset), params);
}

SufficientStats e_step(const GapSummary& summary, const ChannelParams& params) {
  validate(params);
  const TransitionMatrix P = transition_matrix(params);
  const PowerTable powers(P, summary.max_hidden_len() + 1);

  double t01 = 0.0, t10 = 0.0, T0 = 0.0;
  for (const auto& cls : summary.classes()) {
    const std::int64_t g = cls.hidden_len;
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        const auto count = cls.count[a][b];
        if (count == 0) continue;
        double n01 = 0.0, n10 = 0.0, n0 = 0.0;
        for (std::int64_t j = 0; j <= g; ++j) {
          const Matrix2& left = powers[j];
          const Matrix2& right = powers[g - j];
          double w[2][2];
          double total = 0.0;
          for (int u = 0; u < 2; ++u) {
            for (int v = 0; v < 2; ++v) {
              w[u][v] = left[a][u] * P(u, v) * right[v][b];
              total += w[u][v];
            }
          }
          if (!(total > 0.0)) {
            throw Error(ErrorKind::zero_bridge,
                        "gap " + std::to_string(a) + "->" + std::to_string(b) +
                            " with " + std::to_string(g) +
                            " hidden slots has zero probability");
          }
          n01 += w[0][1] / total;
          n10 += w[1][0] / total;
          n0 += (w[0][0] + w[0][1]) / total;
        }
        const auto c = static_cast<double>(count);
        t01 += c * n01;
        t10 += c * n10;
        T0 += c * n0;
      }
    }
  }
  const auto transitions = static_cast<double>(summary.transitions());
  return {t01, t10, T0, transitions - T0};
}

ChannelParams m_step(const SufficientStats& expected, double clamp_epsilon) {
  if (!(expected.T0 > 0.0) || !(expected.T1 > 0.0)) {
    throw Error(ErrorKind::insufficient_data,
                "expected transitions out of a state are zero (T0=" +
                    std::to_string(expected.T0) +
                    ", T1=" + std::to_string(expected.T1) + ")");
  }
  return clamp({expected.t01 / expected.T0, expected.t10 / expected.T1},
               clamp_epsilon);
}

EstimateReport run_em(const ObservedDataset& dataset, const ChannelParams& start,
                      const EmConfig& config, std::optional<ChannelParams> truth) {
  return run_em(GapSummary(dataset), start, config, truth);
}

EstimateReport run_em(const GapSummary& summary, const ChannelParams& start,
                      const EmConfig& config, std::optional<ChannelParams> truth) {
  validate(config);
  validate(start);
  if (truth) validate(*truth);

  EstimateReport report;
  report.start = start;
  ChannelParams theta = clamp(start, config.clamp_epsilon);

  EmTrajectory trajectory;
  if (config.record_trajectory) {
    trajectory.steps.push_back(
        {0, theta.alpha, theta.beta, incomplete_log_likelihood(summary, theta)});
  }

  int p = 0;
  try {
    while (p < config.max_iterations) {
      ++p;
      const ChannelParams next = m_step(e_step(summary, theta), config.clamp_epsilon);
      const double change =
          std::max(std::abs(next.alpha - theta.alpha), std::abs(next.beta - theta.beta));
      theta = next;
      if (config.record_trajectory) {
        trajectory.steps.push_back(
            {p, theta.alpha, theta.beta, incomplete_log_likelihood(summary, theta)});
      }
      if (config.param_tolerance > 0.0 && change < config.param_tolerance) {
        trajectory.converged_at = p;
        break;
      }
    }
  } catch (const Error& e) {
    throw Error(e.kind(), "E-M iteration " + std::to_string(p) + ": " + e.what());
  }

  report.estimate = theta;
  report.iterations_run = p;
  report.log_likelihood = config.record_trajectory
                              ? trajectory.steps.back().loglik
                              : incomplete_log_likelihood(summary, theta);
  if (truth) {
    const double n = static_cast<double>(summary.transitions());
    const ChannelParams reference = clamp(*truth, config.clamp_epsilon);
    report.se_db = squared_error_db(std::exp(report.log_likelihood / n),
                                    mean_transition_likelihood(summary, reference));
    report.gamma_percent = relative_error(theta, *truth);
  }
  if (config.record_trajectory) report.trajectory = std::move(trajectory);
  return report;
}

MultiStartResult multi_start(const ObservedDataset& dataset,
                             std::span<const ChannelParams> starts,
                             const EmConfig& config,
                             std::optional<ChannelParams> truth) {
  if (starts.empty()) {
    throw Error(ErrorKind::invalid_argument, "multi_start needs at least one start");
  }
  const GapSummary summary(dataset);
  MultiStartResult result;
  result.runs.resize(starts.size());
  result.errors.resize(starts.size());
  for (std::size_t i = 0; i < starts.size(); ++i) {
    try {
      result.runs[i] = run_em(summary, starts[i], config, truth);
    } catch (const Error& e) {
      result.errors[i] = std::string(e.name()) + ": " + e.what();
    }
  }

  std::vector<std::size_t> ok;
  for (std::size_t i = 0; i < starts.size(); ++i)
    if (result.errors[i].empty()) ok.push_back(i);
  if (ok.empty()) {
    std::string msg = "every E-M start failed:";
    for (std::size_t i = 0; i < starts.size(); ++i)
      msg += "\n  start " + std::to_string(i) + ": " + result.errors[i];
    throw Error(ErrorKind::all_starts_failed, msg);
  }

  const double n = static_cast<double>(summary.transitions());
  if (!truth) {
    double target = 0.0;
    for (auto i : ok) target = std::max(target, std::exp(result.runs[i].log_likelihood / n));
    for (auto i : ok) {
      result.runs[i].se_db =
          squared_error_db(std::exp(result.runs[i].log_likelihood / n), target);
    }
  }

  std::size_t best = ok.front();
  for (auto i : ok) {
    const auto& r = result.runs[i];
    const auto& b = result.runs[best];
    if (r.se_db < b.se_db || (r.se_db == b.se_db && r.log_likelihood > b.log_likelihood)) {
      best = i;
    }
  }
  result.winner = best;
  return result;
}

std::vector<ChannelParams> heuristic_starts(const ObservedDataset& dataset,
                                            std::size_t count,
                                            double clamp_epsilon) {
  validate(dataset);
  if (count == 0) throw Error(ErrorKind::invalid_argument, "count must be >= 1");
  const auto occupied = std::count(dataset.states.begin(), dataset.states.end(),
                                   SlotState::occupied);
  const auto K = static_cast<std::ptrdiff_t>(dataset.size());
  if (occupied == 0 || occupied == K) {
    throw Error(ErrorKind::degenerate_observations,
                "heuristic starts need both states among the observations");
  }
  const double u = static_cast<double>(occupied) / static_cast<double>(K);
  const double slope = u / (1.0 - u);
  const double lo = clamp_epsilon;
  const double hi = std::min(1.0, 1.0 / slope) - clamp_epsilon;

  std::vector<ChannelParams> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double a = lo + (hi - lo) * static_cast<double>(i + 1) /
                              static_cast<double>(count + 1);
    out.push_back(clamp({a, slope * a}, clamp_epsilon));
  }
  return out;
}

double relative_error(const ChannelParams& estimate, const ChannelParams& truth) {
  if (!(truth.alpha > 0.0) || !(truth.beta > 0.0)) {
    throw Error(ErrorKind::zero_truth_parameter,
                "relative error needs nonzero true alpha and beta");
  }
  return 0.5 *
         (std::abs(truth.alpha - estimate.alpha) / truth.alpha +
          std::abs(truth.beta - estimate.beta) / truth.beta) *
         100.0;
}

}  // namespace chanem
