#include "wgqed/errors.hpp"

namespace wgqed {

std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::invalid_config: return "InvalidConfig";
    case ErrorCode::index_out_of_range: return "IndexOutOfRange";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::unsupported: return "Unsupported";
    case ErrorCode::too_large: return "TooLarge";
    case ErrorCode::singular_sector: return "SingularSector";
    case ErrorCode::no_solution_found: return "NoSolutionFound";
    case ErrorCode::step_failed: return "StepFailed";
    case ErrorCode::step_too_large: return "StepTooLarge";
    case ErrorCode::binning_mismatch: return "BinningMismatch";
    case ErrorCode::zero_state: return "ZeroState";
    case ErrorCode::degenerate_data: return "DegenerateData";
    case ErrorCode::parse_error: return "ParseError";
  }
  return "Unknown";
}

Error::Error(ErrorCode code, const std::string& message)
    : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

}  // namespace wgqed
