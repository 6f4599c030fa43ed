#pragma once

#include <melonica/error.hpp>

#include <cstdlib>
#include <optional>
#include <string>

namespace melonica {

// Size guards for the exhaustive generators. Setting MELONICA_GUARD_MAX_P
// replaces every p limit with its value and lifts the candidate-count limit;
// here be exponential blowup.
inline std::optional<int> guard_override() {
  const char* env = std::getenv("MELONICA_GUARD_MAX_P");
  if (env == nullptr || *env == '\0') return std::nullopt;
  try {
    return std::stoi(env);
  } catch (const std::exception&) {
    return std::nullopt;
  }
}

inline void check_size_guard(int p, int default_max_p, const std::string& what) {
  const int limit = guard_override().value_or(default_max_p);
  if (p > limit)
    throw Error(ErrorCode::SizeLimitExceeded, what + ": p = " + std::to_string(p) + " exceeds the guard " +
                                                  std::to_string(limit) + " (override with MELONICA_GUARD_MAX_P)");
}

inline constexpr double kDefaultCandidateLimit = 5e6;

inline void check_candidate_guard(double candidates, const std::string& what) {
  if (guard_override()) return;
  if (candidates > kDefaultCandidateLimit)
    throw Error(ErrorCode::SizeLimitExceeded, what + ": " + std::to_string(static_cast<long long>(candidates)) +
                                                  " candidates exceed the default limit (override with "
                                                  "MELONICA_GUARD_MAX_P)");
}

}  // namespace melonica
