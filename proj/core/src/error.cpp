#include "midrank/error.hpp"

namespace midrank {

const char* to_string(errc code) noexcept {
  switch (code) {
    case errc::duplicate_index: return "DuplicateIndex";
    case errc::index_out_of_range: return "IndexOutOfRange";
    case errc::too_short: return "TooShort";
    case errc::lambda_out_of_range: return "LambdaOutOfRange";
    case errc::lambda_too_small: return "LambdaTooSmall";
    case errc::lambda_exceeds_length: return "LambdaExceedsLength";
    case errc::non_finite_entry: return "NonFiniteEntry";
    case errc::non_finite_loss: return "NonFiniteLoss";
    case errc::dimension_mismatch: return "DimensionMismatch";
    case errc::length_mismatch: return "LengthMismatch";
    case errc::sequence_too_short: return "SequenceTooShort";
    case errc::sequence_too_long_for_exhaustive:
      return "SequenceTooLongForExhaustive";
    case errc::missing_ground_truth: return "MissingGroundTruth";
    case errc::degenerate_data: return "DegenerateData";
    case errc::empty_lambda_range: return "EmptyLambdaRange";
    case errc::empty_rankings: return "EmptyRankings";
    case errc::insufficient_items: return "InsufficientItems";
    case errc::parse_error: return "ParseError";
    case errc::invariant_violation: return "InvariantViolation";
    case errc::io_error: return "IoError";
    case errc::config_error: return "ConfigError";
  }
  return "UnknownError";
}

}  // namespace midrank
