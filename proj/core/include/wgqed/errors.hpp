#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace wgqed {

enum class ErrorCode {
  invalid_config,
  index_out_of_range,
  dimension_mismatch,
  unsupported,
  too_large,
  singular_sector,
  no_solution_found,
  step_failed,
  step_too_large,
  binning_mismatch,
  zero_state,
  degenerate_data,
  parse_error,
};

std::string_view to_string(ErrorCode code) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message);

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace wgqed
