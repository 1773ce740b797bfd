#include "chanem/error.hpp"

namespace chanem {

const char* error_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::invalid_argument: return "invalid_argument";
    case ErrorKind::degenerate_parameters: return "degenerate_parameters";
    case ErrorKind::too_short_sequence: return "too_short_sequence";
    case ErrorKind::insufficient_data: return "insufficient_data";
    case ErrorKind::boundary_parameter: return "boundary_parameter";
    case ErrorKind::schedule_exhausted: return "schedule_exhausted";
    case ErrorKind::too_few_observations: return "too_few_observations";
    case ErrorKind::zero_probability: return "zero_probability";
    case ErrorKind::instance_too_large: return "instance_too_large";
    case ErrorKind::zero_bridge: return "zero_bridge";
    case ErrorKind::degenerate_observations: return "degenerate_observations";
    case ErrorKind::zero_truth_parameter: return "zero_truth_parameter";
    case ErrorKind::all_starts_failed: return "all_starts_failed";
    case ErrorKind::config: return "config";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace chanem
