#include "phimap/report.hpp"

#include <stdexcept>

namespace phimap {

void VerificationReport::absorb(const VerificationReport& other) {
  samples_checked += other.samples_checked;
  indeterminate += other.indeterminate;
  for (const auto& f : other.failures) {
    failures.push_back({f.alpha, other.claim + ": " + f.detail, f.residual});
  }
}

nlohmann::json VerificationReport::to_json() const {
  nlohmann::json fails = nlohmann::json::array();
  for (const auto& f : failures) {
    fails.push_back({{"alpha", f.alpha}, {"detail", f.detail}, {"residual", f.residual}});
  }
  return {{"schema_version", kReportSchemaVersion},
          {"claim", claim},
          {"passed", passed()},
          {"params", params},
          {"samples_checked", samples_checked},
          {"indeterminate", indeterminate},
          {"failures", fails},
          {"tolerances", tolerances_to_json(tolerances)},
          {"details", details}};
}

nlohmann::json tolerances_to_json(const ToleranceConfig& tol) {
  return {{"rank_rel_tol", tol.rank_rel_tol},
          {"psd_tol", tol.psd_tol},
          {"residual_tol", tol.residual_tol},
          {"hermitian_tol", tol.hermitian_tol},
          {"partial_transpose", "first factor (C^2)"}};
}

ToleranceConfig tolerances_from_json(const nlohmann::json& j, ToleranceConfig base) {
  if (j.contains("rank_rel_tol")) base.rank_rel_tol = j.at("rank_rel_tol").get<double>();
  if (j.contains("psd_tol")) base.psd_tol = j.at("psd_tol").get<double>();
  if (j.contains("residual_tol")) base.residual_tol = j.at("residual_tol").get<double>();
  if (j.contains("hermitian_tol")) base.hermitian_tol = j.at("hermitian_tol").get<double>();
  base.validate();
  return base;
}

ToleranceConfig tolerance_profile(const std::string& name) {
  if (name.empty() || name == "default") return {};
  if (name == "strict") return {1e-12, 1e-12, 1e-11, 1e-13};
  if (name == "loose") return {1e-8, 1e-8, 1e-7, 1e-10};
  throw std::invalid_argument("unknown tolerance profile '" + name + "'");
}

}  // namespace phimap
