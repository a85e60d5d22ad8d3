#ifndef ATTACKPROC_ERRORS_HPP
#define ATTACKPROC_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace attackproc {

// Distinguishes bad user input / unusable data (CLI exit code 2) from
// programming errors, which use plain std exceptions.
enum class ErrorCode {
  bad_magic,
  corrupt_header,
  empty_selection,
  too_few_arrivals,
  empty_input,
  zero_variance,
  zero_mean,
  too_short,
  non_positive_gap,
  too_few_exceedances,
  all_diverged,
  zero_denominator,
  embedding_failure,
  bad_config,
  bad_value,
  io_failure,
};

class DataError : public std::runtime_error {
 public:
  DataError(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline const char* error_code_name(ErrorCode c) {
  switch (c) {
    case ErrorCode::bad_magic: return "BadMagic";
    case ErrorCode::corrupt_header: return "CorruptHeader";
    case ErrorCode::empty_selection: return "EmptySelection";
    case ErrorCode::too_few_arrivals: return "TooFewArrivals";
    case ErrorCode::empty_input: return "EmptyInput";
    case ErrorCode::zero_variance: return "ZeroVariance";
    case ErrorCode::zero_mean: return "ZeroMean";
    case ErrorCode::too_short: return "TooShort";
    case ErrorCode::non_positive_gap: return "NonPositiveGap";
    case ErrorCode::too_few_exceedances: return "TooFewExceedances";
    case ErrorCode::all_diverged: return "AllDiverged";
    case ErrorCode::zero_denominator: return "ZeroDenominator";
    case ErrorCode::embedding_failure: return "EmbeddingFailure";
    case ErrorCode::bad_config: return "BadConfig";
    case ErrorCode::bad_value: return "BadValue";
    case ErrorCode::io_failure: return "IoFailure";
  }
  return "Unknown";
}

[[noreturn]] inline void throw_data_error(ErrorCode code, const std::string& msg) {
  throw DataError(code, std::string(error_code_name(code)) + ": " + msg);
}

}  // namespace attackproc

#endif
