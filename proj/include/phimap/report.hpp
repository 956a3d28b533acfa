#ifndef PHIMAP_REPORT_HPP
#define PHIMAP_REPORT_HPP

#include <cstddef>
#include <string>
#include <vector>

#include <json.hpp>

#include "phimap/numerics.hpp"

namespace phimap {

inline constexpr int kReportSchemaVersion = 1;

struct Failure {
  nlohmann::json alpha;  // sample location, or null when not tied to a point
  std::string detail;
  double residual = 0;
};

/// Pass/fail record for one checked claim.
///
/// A report fails iff `failures` is non-empty. Indeterminate samples (those sitting
/// inside a tolerance band where the prediction itself is undecidable in floating
/// point) are counted separately and never affect the verdict.
struct VerificationReport {
  std::string claim;
  nlohmann::json params;
  std::size_t samples_checked = 0;
  std::size_t indeterminate = 0;
  std::vector<Failure> failures;
  ToleranceConfig tolerances;
  nlohmann::json details = nlohmann::json::object();

  bool passed() const { return failures.empty(); }

  void fail(nlohmann::json alpha, std::string detail, double residual) {
    failures.push_back({std::move(alpha), std::move(detail), residual});
  }

  /// Appends the failures of `other` (prefixed with its claim) and adds its counts.
  void absorb(const VerificationReport& other);

  nlohmann::json to_json() const;
};

nlohmann::json tolerances_to_json(const ToleranceConfig& tol);
ToleranceConfig tolerances_from_json(const nlohmann::json& j, ToleranceConfig base = {});

/// Named tolerance profiles: "default", "strict", "loose".
ToleranceConfig tolerance_profile(const std::string& name);

}  // namespace phimap

#endif  // PHIMAP_REPORT_HPP
