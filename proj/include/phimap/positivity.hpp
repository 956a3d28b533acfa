#ifndef PHIMAP_POSITIVITY_HPP
#define PHIMAP_POSITIVITY_HPP

#include <cstdint>
#include <vector>

#include "phimap/map.hpp"
#include "phimap/report.hpp"

namespace phimap {

/// Determinants of the trailing i x i principal submatrices of Phi(P_alpha), i = 1..4.
struct MinorQuadruple {
  double delta1 = 0, delta2 = 0, delta3 = 0, delta4 = 0;

  double operator[](int i) const {
    switch (i) {
      case 0: return delta1;
      case 1: return delta2;
      case 2: return delta3;
      default: return delta4;
    }
  }
};

/// Closed forms:
///   D1 = e + f|a|^2
///   D2 = |a|^2 (h - cd(a + conj a) + k|a|^2)
///   D3 = acd |a|^2 |1 - a|^2
///   D4 = 0
MinorQuadruple delta_closed(const MapParams& p, cplx alpha);

/// Trailing minors computed from the matrix Phi(P_alpha) itself. Evaluated in
/// extended precision so that the identically vanishing D4 is resolved well below
/// double-precision round-off of the entries.
MinorQuadruple delta_direct(const MapParams& p, const SpherePoint& alpha);

/// The (unnormalized) kernel vector of Phi(P_alpha):
///   y_alpha = (g a(1-a), a[h - cd(a + conj a) + k|a|^2], -e - f|a|^2, -conj(a)(c + d a))
/// and y_inf = (0, 1, 0, 0).
CVec kernel_vector(const MapParams& p, const SpherePoint& alpha);

/// 0, 1, inf; the 24th roots of unity scaled by 0.25, 0.5, 1, 2, 4; then n_random
/// points drawn uniformly from the disk |alpha| <= disk_radius.
std::vector<SpherePoint> default_sample_grid(std::uint64_t seed, int n_random = 1000,
                                             double disk_radius = 10.0);

/// Phi(P_alpha) is positive semi-definite with numeric rank exactly 3 at every sample.
VerificationReport verify_positivity(const MapParams& p, const std::vector<SpherePoint>& samples,
                                     const ToleranceConfig& tol = {});

/// delta_closed and delta_direct agree within 1e-9 (1 + |D|) on finite samples,
/// D4 vanishes, and D1, D2, D3 > 0 away from alpha = 0, 1.
VerificationReport verify_minor_agreement(const MapParams& p,
                                          const std::vector<SpherePoint>& samples,
                                          const ToleranceConfig& tol = {});

/// y_alpha annihilates Phi(P_alpha) to residual_tol and the numerical kernel is
/// exactly one-dimensional and parallel to y_alpha.
VerificationReport verify_kernel(const MapParams& p, const std::vector<SpherePoint>& samples,
                                 const ToleranceConfig& tol = {});

inline constexpr double kMinorTolerance = 1e-9;

}  // namespace phimap

#endif  // PHIMAP_POSITIVITY_HPP
