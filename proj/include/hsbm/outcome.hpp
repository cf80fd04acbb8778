#pragma once

#include "hsbm/model.hpp"

#include <optional>
#include <string>

namespace hsbm {

enum class FailureKind { none, rounding, counting, tie, nonconvergence, mismatch };

inline const char* to_string(FailureKind k) {
  switch (k) {
    case FailureKind::none: return "none";
    case FailureKind::rounding: return "rounding";
    case FailureKind::counting: return "counting";
    case FailureKind::tie: return "tie";
    case FailureKind::nonconvergence: return "nonconvergence";
    case FailureKind::mismatch: return "mismatch";
  }
  return "none";
}

/// Result of a recovery algorithm: a partition, or the reason there is none.
/// Failures are ordinary outcomes to be tallied, not exceptions.
struct RecoveryOutcome {
  std::optional<Partition> partition;
  FailureKind failure = FailureKind::none;
  std::string message;

  bool ok() const { return partition.has_value(); }

  static RecoveryOutcome success(Partition p) { return {std::move(p), FailureKind::none, {}}; }
  static RecoveryOutcome fail(FailureKind k, std::string why) { return {std::nullopt, k, std::move(why)}; }
};

}  // namespace hsbm
