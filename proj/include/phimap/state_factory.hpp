#ifndef PHIMAP_STATE_FACTORY_HPP
#define PHIMAP_STATE_FACTORY_HPP

// Separable 2 (x) 4 states built as convex mixtures of the pure product states
// annihilated by Phi, with certificates for trace, positivity of rho and rho^Gamma,
// ranks and the pairing with Phi.

#include <array>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include "phimap/face_geometry.hpp"
#include "phimap/map.hpp"
#include "phimap/report.hpp"

namespace phimap {

class RecipeError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

struct RecipePoint {
  double weight = 0;
  SpherePoint alpha;
  CircleSpec circle;  // the circle the point was drawn from
};

struct StateRecipe {
  std::vector<RecipePoint> points;

  /// Throws RecipeError unless non-empty, all weights positive and summing to 1 within 1e-12.
  void validate() const;

  /// Point count per circle tag.
  std::map<std::string, int> counts() const;

  nlohmann::json to_json() const;
  static StateRecipe from_json(const nlohmann::json& j);
};

struct Certificate {
  double trace = 0;
  bool psd = false;
  bool psd_gamma = false;
  int rank = 0;
  int rank_gamma = 0;
  int gram_rank = 0;        // rank of the weighted Gram matrix of the z's
  int gram_rank_gamma = 0;  // the same for the z^Gamma's
  double min_eigenvalue = 0;
  double min_eigenvalue_gamma = 0;
  double pairing_value = 0;
  double gamma_identity_residual = 0;  // max |PT(rho) - sum w |z^G><z^G||
  int length_upper_bound = 0;

  nlohmann::json to_json() const;
  static Certificate from_json(const nlohmann::json& j);
};

struct CertifiedState {
  MapParams params;
  StateRecipe recipe;
  CMat rho;
  Certificate certificate;

  nlohmann::json to_json() const;
  static CertifiedState from_json(const nlohmann::json& j);
};

/// rho = sum_i w_i |z_i><z_i| over normalized product vectors z_i, with its certificate.
CertifiedState build_state(const MapParams& p, const StateRecipe& recipe,
                           const ToleranceConfig& tol = {});

/// Angles for an 8-point recipe are resampled until |e^{i sum theta} - e^{i sum tau}|
/// exceeds this margin.
inline constexpr double kRecipeMargin = 1e-3;

/// Uniform weights over k_r points of C_r and k_s of C_s (k in {4, 5}); angles are
/// equidistributed with seeded jitter.
StateRecipe two_circle_recipe(double r, double s, int k_r, int k_s, std::uint64_t seed);

inline const std::vector<double> kVerticalRadii{0.5, 1.0, 2.0, 4.0, 6.0};
inline const std::vector<double> kVerticalRadii2{0.6, 1.1, 1.9, 3.5, 5.5};

/// Uniform weights over r_k e^{i theta} and s_k e^{i tau}. A 4 + 4 recipe whose radius
/// products tie (relative gap <= kPhaseTol) is rejected.
StateRecipe vertical_recipe(double theta, double tau, const std::vector<double>& radii,
                            const std::vector<double>& radii2);

/// Trace 1, rho and rho^Gamma PSD with full rank 8 and minimum eigenvalue above psd_tol,
/// |pairing| <= residual_tol, Gram ranks agreeing with matrix ranks.
VerificationReport certify_boundary_full_rank(const CertifiedState& state, const MapParams& p,
                                              const ToleranceConfig& tol = {});

}  // namespace phimap

#endif  // PHIMAP_STATE_FACTORY_HPP
