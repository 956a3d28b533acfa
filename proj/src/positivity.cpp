#include "phimap/positivity.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace phimap {

MinorQuadruple delta_closed(const MapParams& p, cplx alpha) {
  const double m2 = std::norm(alpha);
  const double two_re = 2.0 * alpha.real();
  MinorQuadruple q;
  q.delta1 = p.e + p.f * m2;
  q.delta2 = m2 * (p.h - p.c * p.d * two_re + p.k * m2);
  q.delta3 = p.a * p.c * p.d * m2 * std::norm(1.0 - alpha);
  q.delta4 = 0.0;
  return q;
}

MinorQuadruple delta_direct(const MapParams& p, const SpherePoint& alpha) {
  using Ext = long double;
  using CExt = std::complex<Ext>;
  const BasicMapParams<Ext> q = rederive_as<Ext>(p);
  CMatrix<Ext> P(2, 2);
  if (alpha.is_infinity()) {
    P << CExt(0), CExt(0), CExt(0), CExt(1);
  } else {
    const CExt a(alpha.value().real(), alpha.value().imag());
    P << CExt(1), std::conj(a), a, std::norm(a);
  }
  const CMatrix<Ext> M = phi_apply_as<Ext>(q, P);
  MinorQuadruple out;
  double* slots[] = {&out.delta1, &out.delta2, &out.delta3, &out.delta4};
  for (int i = 1; i <= 4; ++i) {
    const CMatrix<Ext> trailing = M.bottomRightCorner(i, i);
    *slots[i - 1] = static_cast<double>(det(trailing).real());
  }
  return out;
}

CVec kernel_vector(const MapParams& p, const SpherePoint& alpha) {
  CVec y(4);
  if (alpha.is_infinity()) {
    y << 0.0, 1.0, 0.0, 0.0;
    return y;
  }
  const cplx a = alpha.value();
  const cplx ab = std::conj(a);
  const double m2 = std::norm(a);
  y << p.g * a * (1.0 - a),
      a * (p.h - p.c * p.d * (a + ab) + p.k * m2),
      -p.e - p.f * m2,
      -ab * (p.c + p.d * a);
  return y;
}

std::vector<SpherePoint> default_sample_grid(std::uint64_t seed, int n_random, double disk_radius) {
  std::vector<SpherePoint> out{SpherePoint(0.0), SpherePoint(1.0), SpherePoint::infinity()};
  for (double r : {0.25, 0.5, 1.0, 2.0, 4.0}) {
    for (int j = 0; j < 24; ++j) {
      out.emplace_back(std::polar(r, 2.0 * std::numbers::pi * j / 24.0));
    }
  }
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < n_random; ++i) {
    const double r = disk_radius * std::sqrt(unit(rng));
    const double t = 2.0 * std::numbers::pi * unit(rng);
    out.emplace_back(std::polar(r, t));
  }
  return out;
}

VerificationReport verify_positivity(const MapParams& p, const std::vector<SpherePoint>& samples,
                                     const ToleranceConfig& tol) {
  VerificationReport rep;
  rep.claim = "Phi(P_alpha) is positive semi-definite with rank 3";
  rep.params = params_to_json(p);
  rep.tolerances = tol;
  double worst_min_eig = 0;
  for (const auto& alpha : samples) {
    const CMat M = phi_apply(p, p_alpha(alpha));
    const auto ev = hermitian_eigenvalues(M, tol);
    const double rel_min = ev(0) / std::max(1.0, ev(ev.size() - 1));
    worst_min_eig = std::min(worst_min_eig, rel_min);
    if (!is_psd(M, tol)) {
      rep.fail(sphere_point_to_json(alpha), "not positive semi-definite", -rel_min);
    }
    const int rank = numeric_rank(M, tol);
    if (rank != 3) {
      rep.fail(sphere_point_to_json(alpha), "numeric rank " + std::to_string(rank) + " != 3",
               static_cast<double>(rank));
    }
    ++rep.samples_checked;
  }
  rep.details["most_negative_relative_eigenvalue"] = worst_min_eig;
  return rep;
}

VerificationReport verify_minor_agreement(const MapParams& p,
                                          const std::vector<SpherePoint>& samples,
                                          const ToleranceConfig& tol) {
  VerificationReport rep;
  rep.claim = "closed-form trailing minors agree with direct determinants";
  rep.params = params_to_json(p);
  rep.tolerances = tol;
  double worst = 0;
  for (const auto& alpha : samples) {
    if (alpha.is_infinity()) continue;
    const MinorQuadruple closed = delta_closed(p, alpha.value());
    const MinorQuadruple direct = delta_direct(p, alpha);
    for (int i = 0; i < 4; ++i) {
      const double err = std::abs(closed[i] - direct[i]) / (1.0 + std::abs(closed[i]));
      worst = std::max(worst, err);
      if (err > kMinorTolerance) {
        rep.fail(sphere_point_to_json(alpha), "Delta_" + std::to_string(i + 1) + " mismatch", err);
      }
    }
    const cplx a = alpha.value();
    const bool generic = std::abs(a) > 1e-6 && std::abs(1.0 - a) > 1e-6;
    if (generic && !(closed.delta1 > 0 && closed.delta2 > 0 && closed.delta3 > 0)) {
      rep.fail(sphere_point_to_json(alpha), "a leading minor is not positive away from 0 and 1",
               std::min({closed.delta1, closed.delta2, closed.delta3}));
    }
    ++rep.samples_checked;
  }
  rep.details["worst_relative_error"] = worst;
  return rep;
}

VerificationReport verify_kernel(const MapParams& p, const std::vector<SpherePoint>& samples,
                                 const ToleranceConfig& tol) {
  VerificationReport rep;
  rep.claim = "y_alpha spans the kernel of Phi(P_alpha)";
  rep.params = params_to_json(p);
  rep.tolerances = tol;
  double worst = 0;
  for (const auto& alpha : samples) {
    const CMat M = phi_apply(p, p_alpha(alpha));
    const CVec y = kernel_vector(p, alpha);
    const double res = (M * y).norm() / (M.norm() * y.norm());
    worst = std::max(worst, res);
    if (!(res < tol.residual_tol)) {
      rep.fail(sphere_point_to_json(alpha), "y_alpha is not annihilated", res);
    }
    const auto ker = nullspace(M, tol);
    if (ker.size() != 1) {
      rep.fail(sphere_point_to_json(alpha),
               "kernel dimension " + std::to_string(ker.size()) + " != 1",
               static_cast<double>(ker.size()));
    } else {
      const double overlap = normalized_overlap(ker.front(), y);
      if (!(1.0 - overlap < tol.residual_tol)) {
        rep.fail(sphere_point_to_json(alpha), "numerical kernel not parallel to y_alpha",
                 1.0 - overlap);
      }
    }
    ++rep.samples_checked;
  }
  rep.details["worst_relative_residual"] = worst;
  return rep;
}

}  // namespace phimap
