#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

namespace rvdp {

/// Every failure the library can report. The CLI maps each one to its own exit status.
enum class ErrorCode {
  NonPositiveOmega,
  NegativeCoefficient,
  NonFinite,
  InvalidGrid,
  GridMismatch,
  InvalidArgument,
  ImaginaryFrequency,
  NumericalBlowup,
  DegenerateInput,
  InsufficientCrossings,
  AmbiguousPeak,
  AsymmetricInput,
  UnstableRegime,
  UnknownKey,
  TypeError,
  MissingRequired,
  Io,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NonPositiveOmega: return "NonPositiveOmega";
    case ErrorCode::NegativeCoefficient: return "NegativeCoefficient";
    case ErrorCode::NonFinite: return "NonFinite";
    case ErrorCode::InvalidGrid: return "InvalidGrid";
    case ErrorCode::GridMismatch: return "GridMismatch";
    case ErrorCode::InvalidArgument: return "InvalidArgument";
    case ErrorCode::ImaginaryFrequency: return "ImaginaryFrequency";
    case ErrorCode::NumericalBlowup: return "NumericalBlowup";
    case ErrorCode::DegenerateInput: return "DegenerateInput";
    case ErrorCode::InsufficientCrossings: return "InsufficientCrossings";
    case ErrorCode::AmbiguousPeak: return "AmbiguousPeak";
    case ErrorCode::AsymmetricInput: return "AsymmetricInput";
    case ErrorCode::UnstableRegime: return "UnstableRegime";
    case ErrorCode::UnknownKey: return "UnknownKey";
    case ErrorCode::TypeError: return "TypeError";
    case ErrorCode::MissingRequired: return "MissingRequired";
    case ErrorCode::Io: return "Io";
  }
  return "Unknown";
}

/// Process exit status for an error. 0 is success and 1 is reserved for usage errors.
constexpr int exit_code(ErrorCode code) noexcept {
  return 10 + static_cast<int>(code);
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(std::string(to_string(code)) + ": " + message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

/// Raised when a state stops being finite or exceeds the blowup threshold.
/// `step` is the time-level index; `site` is the spatial index when one applies.
class BlowupError : public Error {
 public:
  BlowupError(std::size_t step, std::optional<std::size_t> site, const std::string& what)
      : Error(ErrorCode::NumericalBlowup, describe(step, site, what)), step_(step), site_(site) {}

  std::size_t step() const noexcept { return step_; }
  std::optional<std::size_t> site() const noexcept { return site_; }

 private:
  static std::string describe(std::size_t step, std::optional<std::size_t> site,
                              const std::string& what) {
    std::string msg = what + " at step n=" + std::to_string(step);
    if (site) msg += ", site i=" + std::to_string(*site);
    return msg;
  }

  std::size_t step_;
  std::optional<std::size_t> site_;
};

/// Configuration error tied to a line of the input file (line 0 means "not from a file").
class ConfigError : public Error {
 public:
  ConfigError(ErrorCode code, std::size_t line, const std::string& message)
      : Error(code, line ? "line " + std::to_string(line) + ": " + message : message),
        line_(line) {}

  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

}  // namespace rvdp
