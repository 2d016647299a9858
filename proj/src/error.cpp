#include "parity/error.hpp"

namespace parity {

const char* to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::negative_mass: return "NegativeMass";
    case ErrorCode::not_normalized: return "NotNormalized";
    case ErrorCode::support_mismatch: return "SupportMismatch";
    case ErrorCode::empty_group: return "EmptyGroup";
    case ErrorCode::length_mismatch: return "LengthMismatch";
    case ErrorCode::empty_cell: return "EmptyCell";
    case ErrorCode::invalid_bin_count: return "InvalidBinCount";
    case ErrorCode::undefined_on_support: return "UndefinedOnSupport";
    case ErrorCode::too_large: return "TooLarge";
    case ErrorCode::bad_format: return "BadFormat";
    case ErrorCode::mass_not_normalized: return "MassNotNormalized";
    case ErrorCode::index_out_of_range: return "IndexOutOfRange";
    case ErrorCode::missing_column: return "MissingColumn";
    case ErrorCode::unparseable_row: return "UnparseableRow";
    case ErrorCode::empty_after_filtering: return "EmptyAfterFiltering";
    case ErrorCode::io_error: return "IoError";
    case ErrorCode::dimension_mismatch: return "DimensionMismatch";
    case ErrorCode::empty_batch: return "EmptyBatch";
    case ErrorCode::non_finite_loss: return "NonFiniteLoss";
    case ErrorCode::diverged: return "Diverged";
    case ErrorCode::invalid_argument: return "InvalidArgument";
  }
  return "UnknownError";
}

}  // namespace parity
