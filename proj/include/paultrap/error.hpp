#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace paultrap {

enum class Errc {
  EmptyGrid,
  NonZeroStart,
  NonFiniteValue,
  TooFewPoints,
  InvalidCount,
  InvalidArgument,
  OriginCrossing,
  BranchJump,
  NonPositiveC0,
  NegativeIndex,
  GridMismatch,
  AliasingRisk,
  NormDrift,
  UnknownPreset,
  ConfigError,
};

constexpr std::string_view to_string(Errc code) noexcept {
  switch (code) {
    case Errc::EmptyGrid: return "EmptyGrid";
    case Errc::NonZeroStart: return "NonZeroStart";
    case Errc::NonFiniteValue: return "NonFiniteValue";
    case Errc::TooFewPoints: return "TooFewPoints";
    case Errc::InvalidCount: return "InvalidCount";
    case Errc::InvalidArgument: return "InvalidArgument";
    case Errc::OriginCrossing: return "OriginCrossing";
    case Errc::BranchJump: return "BranchJump";
    case Errc::NonPositiveC0: return "NonPositiveC0";
    case Errc::NegativeIndex: return "NegativeIndex";
    case Errc::GridMismatch: return "GridMismatch";
    case Errc::AliasingRisk: return "AliasingRisk";
    case Errc::NormDrift: return "NormDrift";
    case Errc::UnknownPreset: return "UnknownPreset";
    case Errc::ConfigError: return "ConfigError";
  }
  return "Unknown";
}

/// Every failure raised by the library carries one of the codes above.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

}  // namespace paultrap
