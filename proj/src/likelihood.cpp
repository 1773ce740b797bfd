#include "chanem/likelihood.hpp"

#include <cmath>
#include <map>

#include "chanem/error.hpp"

namespace chanem {

namespace {

void renormalize_rows(Matrix2& m) noexcept {
  for (auto& row : m) {
    const double s = row[0] + row[1];
    if (s > 0.0) {
      row[0] /= s;
      row[1] /= s;
    }
  }
}

constexpr Matrix2 kIdentity{{{1.0, 0.0}, {0.0, 1.0}}};

void require_interior(const ChannelParams& params) {
  validate(params);
  if (!is_interior(params)) {
    throw Error(ErrorKind::boundary_parameter,
                "incomplete-data likelihood requires alpha, beta in (0, 1)");
  }
}

}  // namespace

Matrix2 multiply(const Matrix2& a, const Matrix2& b) noexcept {
  Matrix2 c{};
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) c[i][j] = a[i][0] * b[0][j] + a[i][1] * b[1][j];
  return c;
}

NStepMatrix n_step_matrix(const ChannelParams& params, std::int64_t n) {
  if (n < 1) throw Error(ErrorKind::invalid_argument, "matrix power n must be >= 1");
  Matrix2 base = transition_matrix(params).p;
  Matrix2 result = kIdentity;
  for (std::int64_t e = n; e > 0; e >>= 1) {
    if (e & 1) {
      result = multiply(result, base);
      renormalize_rows(result);
    }
    if (e > 1) {
      base = multiply(base, base);
      renormalize_rows(base);
    }
  }
  return {n, result};
}

GapSummary::GapSummary(const ObservedDataset& dataset) {
  validate(dataset);
  std::map<std::int64_t, GapClass> by_len;
  for (std::size_t k = 0; k + 1 < dataset.size(); ++k) {
    const std::int64_t g = dataset.times[k + 1] - dataset.times[k] - 1;
    auto& cls = by_len[g];
    cls.hidden_len = g;
    ++cls.count[index(dataset.states[k])][index(dataset.states[k + 1])];
  }
  classes_.reserve(by_len.size());
  for (auto& [g, cls] : by_len) classes_.push_back(cls);
  transitions_ = dataset.span();
  max_hidden_len_ = classes_.back().hidden_len;
}

PowerTable::PowerTable(const TransitionMatrix& step, std::int64_t max_power) {
  powers_.reserve(static_cast<std::size_t>(max_power) + 1);
  powers_.push_back(kIdentity);
  for (std::int64_t n = 1; n <= max_power; ++n) {
    Matrix2 next = multiply(powers_.back(), step.p);
    renormalize_rows(next);
    powers_.push_back(next);
  }
}

double incomplete_log_likelihood(const ObservedDataset& dataset,
                                 const ChannelParams& params) {
  return incomplete_log_likelihood(GapSummary(dataset), params);
}

double incomplete_log_likelihood(const GapSummary& summary,
                                 const ChannelParams& params) {
  require_interior(params);
  const PowerTable powers(transition_matrix(params), summary.max_hidden_len() + 1);
  double total = 0.0;
  for (const auto& cls : summary.classes()) {
    const Matrix2& p = powers[cls.hidden_len + 1];
    for (int a = 0; a < 2; ++a) {
      for (int b = 0; b < 2; ++b) {
        if (cls.count[a][b] == 0) continue;
        if (!(p[a][b] > 0.0)) {
          throw Error(ErrorKind::zero_probability,
                      "gap transition has zero probability (hidden_len=" +
                          std::to_string(cls.hidden_len) + ")");
        }
        total += static_cast<double>(cls.count[a][b]) * std::log(p[a][b]);
      }
    }
  }
  return total;
}

double brute_force_likelihood(const ObservedDataset& dataset,
                              const ChannelParams& params) {
  validate(dataset);
  const TransitionMatrix P = transition_matrix(params);
  const std::int64_t length = dataset.times.back();
  const std::int64_t hidden = length - static_cast<std::int64_t>(dataset.size());
  if (hidden > kBruteForceMaxHidden) {
    throw Error(ErrorKind::instance_too_large,
                "brute-force enumeration limited to " +
                    std::to_string(kBruteForceMaxHidden) + " hidden slots, got " +
                    std::to_string(hidden));
  }

  std::vector<int> path(static_cast<std::size_t>(length), -1);
  for (std::size_t k = 0; k < dataset.size(); ++k) {
    path[static_cast<std::size_t>(dataset.times[k] - 1)] = index(dataset.states[k]);
  }
  std::vector<std::size_t> hidden_pos;
  for (std::size_t t = 0; t < path.size(); ++t)
    if (path[t] < 0) hidden_pos.push_back(t);

  double total = 0.0;
  const std::uint64_t completions = std::uint64_t{1} << hidden;
  for (std::uint64_t mask = 0; mask < completions; ++mask) {
    for (std::size_t h = 0; h < hidden_pos.size(); ++h) {
      path[hidden_pos[h]] = static_cast<int>((mask >> h) & 1U);
    }
    double prob = 1.0;
    for (std::size_t t = 1; t < path.size(); ++t) prob *= P(path[t - 1], path[t]);
    total += prob;
  }
  return total;
}

double mean_transition_likelihood(const GapSummary& summary,
                                  const ChannelParams& params) {
  return std::exp(incomplete_log_likelihood(summary, params) /
                  static_cast<double>(summary.transitions()));
}

double squared_error_db(double value, double reference) noexcept {
  const double diff = value - reference;
  if (diff == 0.0) return kSeFloorDb;
  const double db = 10.0 * std::log10(diff * diff);
  return db < kSeFloorDb ? kSeFloorDb : db;
}

double squared_error_db(const ObservedDataset& dataset,
                        const ChannelParams& estimate, const ChannelParams& truth,
                        SeScale scale) {
  const GapSummary summary(dataset);
  if (scale == SeScale::raw) {
    return squared_error_db(std::exp(incomplete_log_likelihood(summary, estimate)),
                            std::exp(incomplete_log_likelihood(summary, truth)));
  }
  return squared_error_db(mean_transition_likelihood(summary, estimate),
                          mean_transition_likelihood(summary, truth));
}

}  // namespace chanem
