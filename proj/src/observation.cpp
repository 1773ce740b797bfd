#include "chanem/observation.hpp"

#include <algorithm>
#include <charconv>
#include <istream>
#include <ostream>

#include "chanem/error.hpp"

namespace chanem {

ObservationSchedule ObservationSchedule::fixed(std::int64_t L) {
  ObservationSchedule s;
  s.kind = Kind::fixed;
  s.fixed_L = L;
  return s;
}

ObservationSchedule ObservationSchedule::random_uniform(
    std::vector<std::int64_t> support, std::uint64_t seed) {
  ObservationSchedule s;
  s.kind = Kind::random_uniform;
  s.L_support = std::move(support);
  s.seed = seed;
  return s;
}

void validate(const ObservationSchedule& schedule) {
  if (schedule.kind == ObservationSchedule::Kind::fixed) {
    if (schedule.fixed_L < 0) {
      throw Error(ErrorKind::invalid_argument, "fixed_L must be >= 0");
    }
    return;
  }
  if (schedule.L_support.empty()) {
    throw Error(ErrorKind::invalid_argument, "L_support must not be empty");
  }
  for (auto L : schedule.L_support) {
    if (L < 1) throw Error(ErrorKind::invalid_argument, "L_support members must be >= 1");
  }
}

void validate(const ObservedDataset& dataset) {
  if (dataset.times.size() != dataset.states.size()) {
    throw Error(ErrorKind::invalid_argument,
                "dataset times and states differ in length");
  }
  if (dataset.times.size() < 2) {
    throw Error(ErrorKind::too_few_observations,
                "at least 2 observations are required");
  }
  if (dataset.times.front() != 1) {
    throw Error(ErrorKind::invalid_argument, "first observed slot index must be 1");
  }
  for (std::size_t k = 1; k < dataset.times.size(); ++k) {
    if (dataset.times[k] <= dataset.times[k - 1]) {
      throw Error(ErrorKind::invalid_argument,
                  "observed slot indices must be strictly increasing");
    }
  }
  for (auto s : dataset.states) {
    if (s != SlotState::occupied && s != SlotState::idle) {
      throw Error(ErrorKind::invalid_argument, "slot state must be 0 or 1");
    }
  }
}

SkipSource::SkipSource(const ObservationSchedule& schedule)
    : schedule_(&schedule), rng_(schedule.seed) {
  validate(schedule);
}

std::int64_t SkipSource::next() {
  if (schedule_->kind == ObservationSchedule::Kind::fixed) return schedule_->fixed_L;
  const auto& support = schedule_->L_support;
  return support[rng_.below(support.size())];
}

std::vector<std::int64_t> schedule_times(const ObservationSchedule& schedule,
                                         std::size_t count) {
  SkipSource skips(schedule);
  std::vector<std::int64_t> times;
  times.reserve(count);
  std::int64_t t = 1;
  for (std::size_t k = 0; k < count; ++k) {
    if (k > 0) t += skips.next() + 1;
    times.push_back(t);
  }
  return times;
}

ObservedDataset observe(const StateSequence& sequence,
                        const ObservationSchedule& schedule) {
  SkipSource skips(schedule);
  const auto T = static_cast<std::int64_t>(sequence.size());
  ObservedDataset out;
  for (std::int64_t t = 1; t <= T; t += skips.next() + 1) {
    out.times.push_back(t);
    out.states.push_back(sequence[static_cast<std::size_t>(t - 1)]);
  }
  if (out.times.size() < 2) {
    throw Error(ErrorKind::schedule_exhausted,
                "schedule fits fewer than 2 observations in a sequence of " +
                    std::to_string(T) + " slots");
  }
  return out;
}

std::vector<Gap> gaps(const ObservedDataset& dataset) {
  validate(dataset);
  std::vector<Gap> out;
  out.reserve(dataset.size() - 1);
  for (std::size_t k = 0; k + 1 < dataset.size(); ++k) {
    out.push_back({dataset.states[k], dataset.states[k + 1],
                   dataset.times[k + 1] - dataset.times[k] - 1});
  }
  return out;
}

std::vector<std::int64_t> times_from_gaps(const std::vector<Gap>& gap_list) {
  std::vector<std::int64_t> times{1};
  for (const auto& g : gap_list) times.push_back(times.back() + g.hidden_len + 1);
  return times;
}

void write_dataset_csv(std::ostream& out, const ObservedDataset& dataset,
                       const std::vector<std::string>& comments) {
  for (const auto& c : comments) out << "# " << c << '\n';
  out << "slot_index,state\n";
  for (std::size_t k = 0; k < dataset.size(); ++k) {
    out << dataset.times[k] << ',' << index(dataset.states[k]) << '\n';
  }
}

ObservedDataset read_dataset_csv(std::istream& in) {
  std::string line;
  bool header_seen = false;
  ObservedDataset out;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty() || line.front() == '#') continue;
    if (!header_seen) {
      if (line != "slot_index,state") {
        throw Error(ErrorKind::io, "expected CSV header 'slot_index,state'");
      }
      header_seen = true;
      continue;
    }
    const auto comma = line.find(',');
    std::int64_t t = 0;
    int s = -1;
    const char* b = line.data();
    const char* e = b + line.size();
    const bool ok =
        comma != std::string::npos &&
        std::from_chars(b, b + comma, t).ptr == b + comma &&
        std::from_chars(b + comma + 1, e, s).ptr == e && (s == 0 || s == 1);
    if (!ok) {
      throw Error(ErrorKind::io, "malformed dataset row at line " + std::to_string(line_no));
    }
    out.times.push_back(t);
    out.states.push_back(static_cast<SlotState>(s));
  }
  if (!header_seen) throw Error(ErrorKind::io, "dataset CSV has no header");
  return out;
}

}  // namespace chanem
