#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace rimpute {

enum class ErrorKind {
  invalid_parameter,
  dimension_mismatch,
  rank_deficient,
  separation,
  non_convergence,
  degenerate_rdot,
  too_few_rows,
  degenerate_sample,
  input_error,
};

inline std::string_view to_string(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::invalid_parameter: return "InvalidParameter";
    case ErrorKind::dimension_mismatch: return "DimensionMismatch";
    case ErrorKind::rank_deficient: return "RankDeficient";
    case ErrorKind::separation: return "Separation";
    case ErrorKind::non_convergence: return "NonConvergence";
    case ErrorKind::degenerate_rdot: return "DegenerateRdot";
    case ErrorKind::too_few_rows: return "TooFewRows";
    case ErrorKind::degenerate_sample: return "DegenerateSample";
    case ErrorKind::input_error: return "InputError";
  }
  return "Unknown";
}

/// Statistical failures (separation, rank deficiency, degenerate draws)
/// versus bad input; the CLI maps these to different exit codes.
inline bool is_statistical(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::rank_deficient:
    case ErrorKind::separation:
    case ErrorKind::non_convergence:
    case ErrorKind::degenerate_rdot:
    case ErrorKind::degenerate_sample:
      return true;
    default:
      return false;
  }
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(to_string(kind)) + ": " + what), kind_(kind) {}

  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

namespace detail {

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

inline void require(bool condition, ErrorKind kind, const std::string& what) {
  if (!condition) fail(kind, what);
}

}  // namespace detail
}  // namespace rimpute
