#pragma once

#include <stdexcept>
#include <string>

namespace chanem {

enum class ErrorKind {
  invalid_argument,
  degenerate_parameters,
  too_short_sequence,
  insufficient_data,
  boundary_parameter,
  schedule_exhausted,
  too_few_observations,
  zero_probability,
  instance_too_large,
  zero_bridge,
  degenerate_observations,
  zero_truth_parameter,
  all_starts_failed,
  config,
  io,
};

/// Stable snake_case name of an error kind, used in CLI diagnostics.
const char* error_name(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }
  const char* name() const noexcept { return error_name(kind_); }

 private:
  ErrorKind kind_;
};

}  // namespace chanem
