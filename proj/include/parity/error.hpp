#pragma once

#include <stdexcept>
#include <string>

namespace parity {

// Structured failure reasons surfaced by the library. The CLI maps any of
// these to exit code 1; exit code 2 is reserved for certificate violations.
enum class ErrorCode {
  negative_mass,
  not_normalized,
  support_mismatch,
  empty_group,
  length_mismatch,
  empty_cell,
  invalid_bin_count,
  undefined_on_support,
  too_large,
  bad_format,
  mass_not_normalized,
  index_out_of_range,
  missing_column,
  unparseable_row,
  empty_after_filtering,
  io_error,
  dimension_mismatch,
  empty_batch,
  non_finite_loss,
  diverged,
  invalid_argument,
};

const char* to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

[[noreturn]] inline void raise(ErrorCode code, const std::string& message) {
  throw Error(code, message);
}

}  // namespace parity
