#ifndef MIDRANK_ERROR_HPP_
#define MIDRANK_ERROR_HPP_

#include <stdexcept>
#include <string>

namespace midrank {

enum class errc {
  duplicate_index,
  index_out_of_range,
  too_short,
  lambda_out_of_range,
  lambda_too_small,
  lambda_exceeds_length,
  non_finite_entry,
  non_finite_loss,
  dimension_mismatch,
  length_mismatch,
  sequence_too_short,
  sequence_too_long_for_exhaustive,
  missing_ground_truth,
  degenerate_data,
  empty_lambda_range,
  empty_rankings,
  insufficient_items,
  parse_error,
  invariant_violation,
  io_error,
  config_error,
};

const char* to_string(errc code) noexcept;

/// All library failures are reported through this exception; `code()` keys
/// the failure class so callers and tests can dispatch without string
/// matching.
class Error : public std::runtime_error {
 public:
  Error(errc code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message),
        code_(code) {}

  errc code() const noexcept { return code_; }

 private:
  errc code_;
};

}  // namespace midrank

#endif  // MIDRANK_ERROR_HPP_
