#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace melonica {

enum class ErrorCode {
  NotAPermutation,
  InconsistentSize,
  TooFewColors,
  BadColor,
  ParseError,
  Disconnected,
  FormulaMismatch,
  NotRibbon,
  ColorCountMismatch,
  SizeLimitExceeded,
  MismatchedVertexCounts,
  UnsupportedRank,
  NotMelonic,
  WrongRank,
  RankMismatch,
  InvalidModel,
};

constexpr std::string_view to_string(ErrorCode code) noexcept {
  switch (code) {
    case ErrorCode::NotAPermutation: return "NotAPermutation";
    case ErrorCode::InconsistentSize: return "InconsistentSize";
    case ErrorCode::TooFewColors: return "TooFewColors";
    case ErrorCode::BadColor: return "BadColor";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::Disconnected: return "Disconnected";
    case ErrorCode::FormulaMismatch: return "FormulaMismatch";
    case ErrorCode::NotRibbon: return "NotRibbon";
    case ErrorCode::ColorCountMismatch: return "ColorCountMismatch";
    case ErrorCode::SizeLimitExceeded: return "SizeLimitExceeded";
    case ErrorCode::MismatchedVertexCounts: return "MismatchedVertexCounts";
    case ErrorCode::UnsupportedRank: return "UnsupportedRank";
    case ErrorCode::NotMelonic: return "NotMelonic";
    case ErrorCode::WrongRank: return "WrongRank";
    case ErrorCode::RankMismatch: return "RankMismatch";
    case ErrorCode::InvalidModel: return "InvalidModel";
  }
  return "Unknown";
}

// All library failures are reported through this type; `code()` is stable
// and is what the CLI maps onto exit codes.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace melonica
