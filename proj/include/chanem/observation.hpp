#pragma once

// The secondary user's incomplete view of a channel: it senses slot 1 and then
// one slot after every run of L skipped slots.

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "chanem/markov.hpp"
#include "chanem/random.hpp"

namespace chanem {

struct ObservationSchedule {
  enum class Kind { fixed, random_uniform };

  Kind kind = Kind::fixed;
  std::int64_t fixed_L = 0;
  std::vector<std::int64_t> L_support;  // random_uniform only
  std::uint64_t seed = 0;               // random_uniform only

  static ObservationSchedule fixed(std::int64_t L);
  static ObservationSchedule random_uniform(std::vector<std::int64_t> support,
                                            std::uint64_t seed);
};

void validate(const ObservationSchedule& schedule);

/// Observed slot indices (1-based, first = 1) and the states seen there.
struct ObservedDataset {
  std::vector<std::int64_t> times;
  std::vector<SlotState> states;

  std::size_t size() const noexcept { return times.size(); }
  /// Number of transitions spanned, times.back() - 1.
  std::int64_t span() const noexcept { return times.empty() ? 0 : times.back() - 1; }

  friend bool operator==(const ObservedDataset&, const ObservedDataset&) = default;
};

/// Checks the index/state invariants and that K >= 2.
void validate(const ObservedDataset& dataset);

struct Gap {
  SlotState start_state = SlotState::occupied;
  SlotState end_state = SlotState::occupied;
  std::int64_t hidden_len = 0;  // unobserved slots strictly between

  friend bool operator==(const Gap&, const Gap&) = default;
};

/// Draws successive skip lengths for a schedule.
class SkipSource {
 public:
  explicit SkipSource(const ObservationSchedule& schedule);
  std::int64_t next();

 private:
  const ObservationSchedule* schedule_;
  Rng rng_;
};

/// The first `count` observed slot indices of a schedule.
std::vector<std::int64_t> schedule_times(const ObservationSchedule& schedule,
                                         std::size_t count);

ObservedDataset observe(const StateSequence& sequence,
                        const ObservationSchedule& schedule);

std::vector<Gap> gaps(const ObservedDataset& dataset);

/// Rebuilds observation indices from a first index of 1 and a gap list.
std::vector<std::int64_t> times_from_gaps(const std::vector<Gap>& gap_list);

/// CSV with header `slot_index,state`. Lines starting with '#' precede the
/// header as metadata and are skipped on read.
void write_dataset_csv(std::ostream& out, const ObservedDataset& dataset,
                       const std::vector<std::string>& comments = {});
ObservedDataset read_dataset_csv(std::istream& in);

}  // namespace chanem
