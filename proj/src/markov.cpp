#include "chanem/markov.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

#include "chanem/error.hpp"
#include "chanem/random.hpp"

namespace chanem {

namespace {

bool is_probability(double x) { return std::isfinite(x) && x >= 0.0 && x <= 1.0; }

}  // namespace

void validate(const ChannelParams& params) {
  if (!is_probability(params.alpha) || !is_probability(params.beta)) {
    throw Error(ErrorKind::invalid_argument,
                "channel parameters must lie in [0, 1], got alpha=" +
                    std::to_string(params.alpha) +
                    " beta=" + std::to_string(params.beta));
  }
}

bool is_interior(const ChannelParams& params) noexcept {
  return params.alpha > 0.0 && params.alpha < 1.0 && params.beta > 0.0 &&
         params.beta < 1.0;
}

ChannelParams clamp(const ChannelParams& params, double epsilon) noexcept {
  return {std::clamp(params.alpha, epsilon, 1.0 - epsilon),
          std::clamp(params.beta, epsilon, 1.0 - epsilon)};
}

TransitionMatrix transition_matrix(const ChannelParams& params) {
  validate(params);
  TransitionMatrix m;
  m.p[0] = {1.0 - params.alpha, params.alpha};
  m.p[1] = {params.beta, 1.0 - params.beta};
  return m;
}

double utilization(const ChannelParams& params) {
  validate(params);
  const double sum = params.alpha + params.beta;
  if (sum <= 0.0) {
    throw Error(ErrorKind::degenerate_parameters,
                "utilization undefined for alpha = beta = 0");
  }
  return params.beta / sum;
}

StateSequence simulate_chain(const ChannelParams& params, std::int64_t length,
                             std::uint64_t seed,
                             std::optional<SlotState> initial) {
  validate(params);
  if (length < 1) {
    throw Error(ErrorKind::invalid_argument, "sequence length must be >= 1");
  }
  Rng rng(seed);
  StateSequence seq;
  seq.reserve(static_cast<std::size_t>(length));

  SlotState state;
  if (initial) {
    state = *initial;
  } else {
    const double u = utilization(params);
    state = rng.uniform() < u ? SlotState::occupied : SlotState::idle;
  }
  seq.push_back(state);
  for (std::int64_t t = 1; t < length; ++t) {
    const double draw = rng.uniform();
    if (state == SlotState::occupied) {
      if (draw < params.alpha) state = SlotState::idle;
    } else {
      if (draw < params.beta) state = SlotState::occupied;
    }
    seq.push_back(state);
  }
  return seq;
}

std::vector<std::size_t> rank_channels(std::span<const ChannelParams> params) {
  std::vector<double> u;
  u.reserve(params.size());
  for (const auto& p : params) u.push_back(utilization(p));
  std::vector<std::size_t> order(params.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return u[a] < u[b]; });
  return order;
}

}  // namespace chanem
