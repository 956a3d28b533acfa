#ifndef PHIMAP_SUITE_HPP
#define PHIMAP_SUITE_HPP

// Claim-by-claim verification runs over one parameter point or a seeded sweep.

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "phimap/map.hpp"
#include "phimap/report.hpp"

namespace phimap {

struct SuiteOptions {
  std::uint64_t seed = 7;
  int positivity_random = 1000;   // random disk samples on top of the fixed grid
  int lemma_samples = 1000;       // (r, theta_1..4) draws for the determinant formula
  int independence_samples = 1000;
  int span_samples = 20;          // generic points for bi-spanning
  int grid_angles = 72;           // extreme-point scan resolution
  int grid_radii = 21;
};

/// Options used for every point of a sweep: full positivity sampling, lighter geometry.
SuiteOptions sweep_options(std::uint64_t seed);

/// count parameter points with a, b, c, d log-uniform in [0.5, 3] and ab >= 1.1.
std::vector<MapParams> parameter_sweep(int count, std::uint64_t seed);

VerificationReport params_report(const MapParams& p);
VerificationReport lemma41_report(const MapParams& p, int n, std::uint64_t seed,
                                  const ToleranceConfig& tol = {});
VerificationReport face_span_report(const MapParams& p, const ToleranceConfig& tol = {});
VerificationReport perp_basis_report(const MapParams& p, std::uint64_t seed,
                                     const ToleranceConfig& tol = {});
VerificationReport intersection_report(const MapParams& p, const ToleranceConfig& tol = {});
VerificationReport independence_report(const MapParams& p, int n, std::uint64_t seed,
                                       const ToleranceConfig& tol = {});
VerificationReport vertical_independence_report(const MapParams& p, int n, std::uint64_t seed,
                                                const ToleranceConfig& tol = {});
VerificationReport boundary_state_report(const MapParams& p, std::uint64_t seed,
                                         const ToleranceConfig& tol = {});
VerificationReport extreme_point_report(const MapParams& p, int n_angles, int n_radii,
                                        const ToleranceConfig& tol = {});

using ClaimList = std::vector<std::pair<std::string, VerificationReport>>;

/// Every claim at one parameter point, in a fixed order.
ClaimList run_claims(const MapParams& p, const SuiteOptions& opt, const ToleranceConfig& tol = {});

struct SuiteResult {
  nlohmann::json report;
  bool passed = false;
};

/// Aggregated report over the given parameter points.
SuiteResult run_verification(const std::vector<MapParams>& points, const SuiteOptions& opt,
                             const ToleranceConfig& tol = {});

}  // namespace phimap

#endif  // PHIMAP_SUITE_HPP
