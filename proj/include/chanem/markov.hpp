#pragma once

// Two-state slotted Markov channel. State 0 is occupied, state 1 is idle.
// alpha = P(idle | previously occupied), beta = P(occupied | previously idle).

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace chanem {

struct ChannelParams {
  double alpha = 0.0;
  double beta = 0.0;

  friend bool operator==(const ChannelParams&, const ChannelParams&) = default;
};

enum class SlotState : std::uint8_t { occupied = 0, idle = 1 };

using StateSequence = std::vector<SlotState>;

using Matrix2 = std::array<std::array<double, 2>, 2>;

/// Row i is the distribution of the next state given current state i.
struct TransitionMatrix {
  Matrix2 p{};

  double operator()(int from, int to) const { return p[from][to]; }
};

inline int index(SlotState s) { return static_cast<int>(s); }

/// Throws invalid_argument unless both parameters are finite and in [0, 1].
void validate(const ChannelParams& params);

/// True when both parameters lie strictly inside (0, 1).
bool is_interior(const ChannelParams& params) noexcept;

ChannelParams clamp(const ChannelParams& params, double epsilon) noexcept;

TransitionMatrix transition_matrix(const ChannelParams& params);

/// Stationary probability of the occupied state, beta / (alpha + beta).
double utilization(const ChannelParams& params);

/// Draws a slot sequence. Without `initial` the first slot is sampled from the
/// stationary distribution. Output is a pure function of the arguments.
StateSequence simulate_chain(const ChannelParams& params, std::int64_t length,
                             std::uint64_t seed,
                             std::optional<SlotState> initial = std::nullopt);

/// Channel indices ordered by ascending utilization, ties by index.
std::vector<std::size_t> rank_channels(std::span<const ChannelParams> params);

}  // namespace chanem
