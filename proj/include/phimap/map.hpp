#ifndef PHIMAP_MAP_HPP
#define PHIMAP_MAP_HPP

// The positive map Phi[a,b,c,d] : M_2 -> M_4, its Choi matrix and the
// pairing with states on C^2 (x) C^4.

#include <cmath>
#include <functional>
#include <optional>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "phimap/numerics.hpp"

namespace phimap {

class ParameterDomainError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Free parameters (a,b,c,d) and the constants (e,f,g,h,k) they determine.
template <typename Real>
struct BasicMapParams {
  Real a = 0, b = 0, c = 0, d = 0;
  Real e = 0, f = 0, g = 0, h = 0, k = 0;

  bool operator==(const BasicMapParams&) const = default;
};

using MapParams = BasicMapParams<double>;

inline constexpr double kDefaultAbGuard = 1e-9;

/// Solves (ab-1)(e,f) = a(c+d)(c,d), g^2 = acd, h = be - c^2, k = bf - d^2.
/// Throws ParameterDomainError unless a,b,c,d > 0 and ab > 1 + ab_guard.
template <typename Real>
BasicMapParams<Real> derive_params_as(Real a, Real b, Real c, Real d,
                                      Real ab_guard = Real(kDefaultAbGuard)) {
  if (!(a > 0 && b > 0 && c > 0 && d > 0)) {
    throw ParameterDomainError("a, b, c, d must be positive");
  }
  if (!(a * b > Real(1) + ab_guard)) {
    throw ParameterDomainError("ab must exceed 1 (got ab = " +
                               std::to_string(static_cast<double>(a * b)) + ")");
  }
  BasicMapParams<Real> p;
  p.a = a;
  p.b = b;
  p.c = c;
  p.d = d;
  const Real denom = a * b - Real(1);
  p.e = a * (c + d) * c / denom;
  p.f = a * (c + d) * d / denom;
  p.g = std::sqrt(a * c * d);
  p.h = b * p.e - c * c;
  p.k = b * p.f - d * d;
  return p;
}

inline MapParams derive_params(double a, double b, double c, double d,
                               double ab_guard = kDefaultAbGuard) {
  return derive_params_as<double>(a, b, c, d, ab_guard);
}

/// Re-derives the constants in another scalar type from the free parameters.
template <typename Real>
BasicMapParams<Real> rederive_as(const MapParams& p) {
  return derive_params_as<Real>(p.a, p.b, p.c, p.d, Real(0));
}

/// Largest relative residual of the defining relations; zero for derive_params output
/// up to rounding.
double params_residual(const MapParams& p);

nlohmann::json params_to_json(const MapParams& p);

/// Reads {a,b,c,d,e,f,g,h,k}. The derived fields are checked against the defining
/// relations (relative residual at most max_residual); missing derived fields are
/// recomputed.
MapParams params_from_json(const nlohmann::json& j, double max_residual = 1e-12);

/// A point of the Riemann sphere C u {inf}. Infinity is its own tag, never a large number.
class SpherePoint {
 public:
  SpherePoint() : value_(cplx(0, 0)) {}
  SpherePoint(cplx z) : value_(z) {}  // NOLINT(google-explicit-constructor)
  SpherePoint(double x) : value_(cplx(x, 0)) {}  // NOLINT(google-explicit-constructor)

  static SpherePoint infinity() {
    SpherePoint p;
    p.value_.reset();
    return p;
  }

  bool is_infinity() const { return !value_.has_value(); }

  /// The finite value. Throws std::logic_error at infinity.
  cplx value() const {
    if (!value_) throw std::logic_error("SpherePoint::value() called on infinity");
    return *value_;
  }

  std::string to_string() const;

  bool operator==(const SpherePoint&) const = default;

 private:
  std::optional<cplx> value_;
};

/// [re, im] for finite points, "inf" for infinity.
nlohmann::json sphere_point_to_json(const SpherePoint& p);
SpherePoint sphere_point_from_json(const nlohmann::json& j);

/// Phi(X) for X = [[x, y], [z, w]], evaluated in the scalar type of X.
template <typename Real>
CMatrix<Real> phi_apply_as(const BasicMapParams<Real>& p, const CMatrix<Real>& X) {
  if (X.rows() != 2 || X.cols() != 2) throw DimensionError("phi_apply expects a 2x2 matrix");
  using C = std::complex<Real>;
  const C x = X(0, 0), y = X(0, 1), z = X(1, 0), w = X(1, 1);
  const Real a = p.a, b = p.b, c = p.c, d = p.d, e = p.e, f = p.f, g = p.g, h = p.h, k = p.k;
  CMatrix<Real> out = CMatrix<Real>::Zero(4, 4);
  out(0, 0) = h * x - c * d * (y + z) + k * w;
  out(0, 1) = -g * x + g * z;
  out(1, 0) = -g * x + g * y;
  out(1, 1) = a * x;
  out(1, 2) = z;
  out(2, 1) = y;
  out(2, 2) = b * w;
  out(2, 3) = -c * z - d * w;
  out(3, 2) = -c * y - d * w;
  out(3, 3) = e * x + f * w;
  return out;
}

inline CMat phi_apply(const MapParams& p, const CMat& X) { return phi_apply_as<double>(p, X); }

using LinearMap = std::function<CMat(const CMat&)>;

/// sum_ij e_ij (x) map(e_ij), with the domain factor first.
CMat choi_matrix(const LinearMap& map, Eigen::Index domain_dim);
CMat choi_matrix(const MapParams& p);

/// Tr(rho C^t). rho must be Hermitian; the imaginary part of the trace must vanish
/// within residual_tol (relative), otherwise ContractError.
double pairing(const CMat& rho, const MapParams& p, const ToleranceConfig& tol = {});

/// Rank-one projection onto (1, alpha)^t; P_inf = e_22.
CMat p_alpha(const SpherePoint& alpha);

/// x_alpha = (1, conj(alpha))^t; x_inf = (0, 1)^t.
CVec x_alpha(const SpherePoint& alpha);

/// 2x2 matrix unit e_ij (zero-based).
CMat matrix_unit(Eigen::Index rows, Eigen::Index cols, Eigen::Index i, Eigen::Index j);

}  // namespace phimap

#endif  // PHIMAP_MAP_HPP
