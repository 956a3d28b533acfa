#ifndef PHIMAP_FACE_GEOMETRY_HPP
#define PHIMAP_FACE_GEOMETRY_HPP

// Geometry of the dual face of Phi: product vectors from horizontal circles
// |alpha| = r and vertical circles (lines arg alpha = theta through 0 and inf),
// their spans, orthogonal complements, intersections and independence criteria.

#include <array>
#include <iosfwd>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "phimap/map.hpp"
#include "phimap/product_vector.hpp"
#include "phimap/report.hpp"

namespace phimap {

class SingularRadiusError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

class CircleSpec {
 public:
  enum class Kind { Horizontal, Vertical };

  /// |alpha| = radius, radius > 0.
  static CircleSpec horizontal(double radius);
  /// {t e^{i angle} : t real} u {inf}; angle is taken mod pi.
  static CircleSpec vertical(double angle);

  Kind kind() const { return kind_; }
  double radius() const { return value_; }
  double angle() const { return value_; }

  /// Horizontal: radius * e^{i param}. Vertical: param * e^{i angle}.
  SpherePoint point(double param) const;

  /// n distinct points. Horizontal: equispaced angles offset by 0.1 rad.
  /// Vertical: 0, inf and n - 2 signed radii.
  std::vector<SpherePoint> sample(int n) const;

  /// "C1.5" for horizontal, "L0.5" for vertical.
  std::string tag() const;
  nlohmann::json to_json() const;
  static CircleSpec from_json(const nlohmann::json& j);

  bool operator==(const CircleSpec&) const = default;

 private:
  CircleSpec(Kind kind, double value) : kind_(kind), value_(value) {}
  Kind kind_;
  double value_;
};

/// u = c^2 + cd + d^2 r^2 - b(e + f r^2)
double u_of(const MapParams& p, double r);

/// Bases of the orthogonal complements of span P_r (zetas) and of span P_r^Gamma (etas),
/// unnormalized, component for component as derived for this map.
struct PerpBasis {
  std::array<CVec, 3> zetas;
  std::array<CVec, 3> etas;
  double u = 0;
};

/// Throws SingularRadiusError when |u| <= 1e-8 (c^2 + cd + d^2 r^2 + b(e + f r^2)).
PerpBasis perp_basis(const MapParams& p, double r);

/// Elementary symmetric sums of e^{-i theta_j}:
///   t1 = sum_j, t2 = sum_{j<k}, t3 = sum_{j<k<l}, t4 = product.
/// t5 is the combination entering the third component of zeta_6:
///   t5 = c^3 d r t3 + c^2 u t2 + c d r u t1 - c^3 d t4 + d^2 r^2 u.
struct ThetaSums {
  cplx t1, t2, t3, t4, t5;
};

ThetaSums theta_sums(const MapParams& p, double r, const std::array<double, 4>& thetas);

/// Fourth basis vector (with zeta_1..3) of the orthogonal complement of
/// span{z_{r e^{i theta_k}} : k = 1..4}. Hilbert-orthogonal: <zeta_6|z> = 0.
CVec zeta6(const MapParams& p, double r, const std::array<double, 4>& thetas);

/// (0,1) (x) (0,0,0,1) and (1,0) (x) (g,cd,0,0): spanning vectors of span P_r ∩ span P_s.
std::pair<CVec, CVec> zeta45(const MapParams& p);
/// (0,1) (x) (g,cd,0,0) and (1,0) (x) (0,0,0,1): the same on the partial-conjugate side.
std::pair<CVec, CVec> eta45(const MapParams& p);

/// K = 64 a c sqrt(acd) r^4 (c+d)(c+d r^2)(c(c+d) + d(abc+d) r^2) / (ab-1)^2
double lemma41_constant(const MapParams& p, double r);

struct DeterminantPair {
  cplx closed;
  cplx numeric;
};

/// det of the 4x4 matrix with rows y_{r e^{i theta_k}}^t, in closed form
/// K e^{i sum theta / 2} prod_{j<k} sin((theta_j - theta_k)/2) and numerically.
DeterminantPair lemma41_det(const MapParams& p, double r, const std::array<double, 4>& thetas);

/// (rank of stacked z, rank of stacked z^Gamma) over n samples of the circle.
std::pair<int, int> span_dims(const MapParams& p, const CircleSpec& spec, int n_samples,
                              const ToleranceConfig& tol = {});

/// Span geometry of two horizontal circles r != s.
VerificationReport intersection_pair(const MapParams& p, double r, double s,
                                     const ToleranceConfig& tol = {});

inline constexpr double kPhaseTol = 1e-9;
inline constexpr double kTieTol = 1e-12;

/// Outcome of a predicted-versus-observed linear independence test. `indeterminate`
/// marks configurations inside the tolerance band of the predicate; those are never
/// counted as agreement or disagreement.
struct IndependenceOutcome {
  bool predicted = false;
  bool observed = false;
  bool predicted_gamma = false;
  bool observed_gamma = false;
  bool indeterminate = false;
  int rank = 0;
  int rank_gamma = 0;

  bool agrees() const { return predicted == observed && predicted_gamma == observed_gamma; }
};

/// Four points on C_r and four on C_s. Plain side: independent iff
/// sum theta != sum tau (mod 2 pi). Partial-conjugate side: independent iff
/// r^2 e^{i sum theta} != s^2 e^{i sum tau}, which always holds for r != s.
IndependenceOutcome eight_vector_test(const MapParams& p, double r,
                                      const std::array<double, 4>& thetas, double s,
                                      const std::array<double, 4>& taus,
                                      const ToleranceConfig& tol = {},
                                      double phase_tol = kPhaseTol);

/// c cos(theta - tau) + d cos(theta + tau), normalized by c + d. On its zero set the
/// spans of P^theta and P^tau meet in three dimensions rather than two.
double vertical_pair_degeneracy(const MapParams& p, double theta, double tau);

/// Four points r_k e^{i theta} and four s_k e^{i tau}. Plain side: independent iff
/// prod r != prod s and the pair (theta, tau) is not degenerate. Partial-conjugate side:
/// always independent for theta != tau (mod pi).
IndependenceOutcome vertical_independence_test(const MapParams& p, double theta,
                                               const std::array<double, 4>& radii, double tau,
                                               const std::array<double, 4>& radii2,
                                               const ToleranceConfig& tol = {},
                                               double phase_tol = kPhaseTol);

/// span P^theta ∩ span P^tau = span{z_0, z_inf}, on both sides.
VerificationReport vertical_intersection(const MapParams& p, double theta, double tau,
                                         const ToleranceConfig& tol = {});

/// (rank, rank on the partial-conjugate side) of product vectors from C_r ∪ L^theta.
std::pair<int, int> mixed_family_ranks(const MapParams& p, double r = 1.0, double theta = 0.0,
                                       const ToleranceConfig& tol = {});
int mixed_family_span(const MapParams& p, const ToleranceConfig& tol = {});

struct ScanRow {
  cplx beta;
  int system_rank = 0;
  double overlap_with_y_beta = 0;
};

struct FaceScan {
  VerificationReport report;
  std::vector<ScanRow> rows;
};

/// n_angles x n_radii points with |beta| from 0.5 r to 1.5 r (r itself included when
/// n_radii is odd).
std::vector<cplx> beta_grid(double r, int n_angles, int n_radii);

/// For each beta, the 6x4 system on y obtained from w = (1, conj(beta)) (x) y with
/// <zeta_i|w> = 0 and <eta_i|w^Gamma> = 0. It must be singular exactly when |beta| = r
/// (within band * r), with its null vector parallel to y_beta; the branch
/// w = (0,1) (x) y must be trivial.
FaceScan extreme_point_recovery(const MapParams& p, double r, const std::vector<cplx>& betas,
                                const ToleranceConfig& tol = {}, double band = 1e-6);

/// beta_re,beta_im,system_rank,overlap_with_y_beta
void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows);

struct AffineDimension {
  int affine_dim = 0;      // rank of all sampled |z><z| minus one
  int rank_nine = 0;       // rank of the first nine
  int rank_ten = 0;        // rank of the first ten
};

/// Ranks of vectorized normalized pure states |z><z| from the circle.
AffineDimension affine_dim_face(const MapParams& p, const CircleSpec& spec, int n_points = 12,
                                const ToleranceConfig& tol = {});

}  // namespace phimap

#endif  // PHIMAP_FACE_GEOMETRY_HPP
