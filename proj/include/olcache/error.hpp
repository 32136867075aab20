#ifndef OLCACHE_ERROR_HPP
#define OLCACHE_ERROR_HPP

#include <stdexcept>
#include <string>
#include <string_view>

namespace olcache {

enum class ErrorCode {
  invalid_config,
  invalid_state,
  schedule_mismatch,
  invalid_period,
  divisibility,
  out_of_range,
  out_of_library,
  invalid_distribution,
  exhausted_trace,
  empty_trace,
  parse,
  io,
  combinatorial_blowup,
  unknown_kind,
  invalid_params,
};

inline std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::invalid_config: return "invalid-config";
    case ErrorCode::invalid_state: return "invalid-state";
    case ErrorCode::schedule_mismatch: return "schedule-mismatch";
    case ErrorCode::invalid_period: return "invalid-period";
    case ErrorCode::divisibility: return "divisibility";
    case ErrorCode::out_of_range: return "out-of-range";
    case ErrorCode::out_of_library: return "out-of-library";
    case ErrorCode::invalid_distribution: return "invalid-distribution";
    case ErrorCode::exhausted_trace: return "exhausted-trace";
    case ErrorCode::empty_trace: return "empty-trace";
    case ErrorCode::parse: return "parse";
    case ErrorCode::io: return "io";
    case ErrorCode::combinatorial_blowup: return "combinatorial-blowup";
    case ErrorCode::unknown_kind: return "unknown-kind";
    case ErrorCode::invalid_params: return "invalid-params";
  }
  return "unknown";
}

// Every failure raised by the library carries a code so callers (and tests)
// can tell the kinds apart without string matching.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what),
        code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace olcache

#endif  // OLCACHE_ERROR_HPP
