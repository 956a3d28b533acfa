// One PASS/FAIL line per acceptance criterion. Library reports are cross-checked
// against quantities recomputed here from the raw formulas with plain Eigen.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "phimap/exposedness.hpp"
#include "phimap/face_geometry.hpp"
#include "phimap/positivity.hpp"
#include "phimap/product_vector.hpp"
#include "phimap/state_factory.hpp"
#include "phimap/suite.hpp"

using namespace phimap;

namespace {

constexpr double kPi = std::numbers::pi;
constexpr std::uint64_t kSeed = 7;

const MapParams kP = derive_params(2, 2, 2, 1);
const std::vector<MapParams> kSweep = parameter_sweep(100, kSeed);

std::vector<MapParams> all_points() {
  std::vector<MapParams> pts{kP};
  pts.insert(pts.end(), kSweep.begin(), kSweep.end());
  return pts;
}

struct Outcome {
  bool ok = true;
  std::string note;

  void require(bool cond, const std::string& what) {
    if (!cond && ok) note = what;
    ok = ok && cond;
  }
};

// Kernel vector straight from its defining formula.
CVec y_by_hand(const MapParams& p, cplx a) {
  CVec y(4);
  const double n = std::norm(a);
  y << p.g * a * (1.0 - a), a * (p.h - p.c * p.d * 2 * a.real() + p.k * n), -p.e - p.f * n,
      -std::conj(a) * (p.c + p.d * a);
  return y;
}

CVec z_by_hand(const MapParams& p, cplx a) {
  const CVec y = y_by_hand(p, a);
  CVec z(8);
  z << y, std::conj(a) * y;
  return z;
}

CVec z_gamma_by_hand(const MapParams& p, cplx a) {
  const CVec y = y_by_hand(p, a);
  CVec z(8);
  z << y, a * y;
  return z;
}

int svd_rank(const CMat& M, double rel = 1e-10) {
  const Eigen::JacobiSVD<CMat> svd(M);
  const auto& s = svd.singularValues();
  if (s.size() == 0 || s(0) == 0) return 0;
  int r = 0;
  for (Eigen::Index i = 0; i < s.size(); ++i) r += s(i) > rel * s(0) * std::max(M.rows(), M.cols());
  return r;
}

CMat rows_of(const std::vector<CVec>& vs) {
  CMat M(static_cast<Eigen::Index>(vs.size()), vs.front().size());
  for (std::size_t i = 0; i < vs.size(); ++i) M.row(static_cast<Eigen::Index>(i)) = vs[i].transpose();
  return M;
}

double overlap(const CVec& a, const CVec& b) {
  return std::abs(a.dot(b)) / (a.norm() * b.norm());
}

Outcome report_ok(const VerificationReport& rep) {
  Outcome o;
  if (!rep.passed()) {
    o.ok = false;
    o.note = rep.claim + ": " + rep.failures.front().detail;
  }
  return o;
}

Outcome criterion1() {
  Outcome o;
  o.require(kP.e == 4 && kP.f == 2 && kP.g == 2 && kP.h == 4 && kP.k == 3,
            "(2,2,2,1) does not give (4,2,2,4,3)");
  double worst = 0;
  for (const MapParams& p : kSweep) {
    const double ab1 = p.a * p.b - 1;
    const double s = 1 + std::abs(p.e) + std::abs(p.f) + std::abs(p.h) + std::abs(p.k);
    worst = std::max({worst, std::abs(ab1 * p.e - p.a * (p.c + p.d) * p.c) / s,
                      std::abs(ab1 * p.f - p.a * (p.c + p.d) * p.d) / s,
                      std::abs(p.g * p.g - p.a * p.c * p.d) / s,
                      std::abs(p.h - (p.b * p.e - p.c * p.c)) / s,
                      std::abs(p.k - (p.b * p.f - p.d * p.d)) / s});
    o.require(params_residual(p) < 1e-12, "library residual above 1e-12");
  }
  o.require(worst < 1e-12, "recomputed residual " + std::to_string(worst));
  return o;
}

Outcome criterion2() {
  Outcome o;
  for (const MapParams& p : all_points()) {
    const auto grid = default_sample_grid(kSeed, 1000);
    o.require(verify_positivity(p, grid).passed(), "verify_positivity failed");
    for (const auto& a : grid) {
      const CMat M = phi_apply(p, p_alpha(a));
      const Eigen::SelfAdjointEigenSolver<CMat> es(M);
      const auto& ev = es.eigenvalues();
      const double top = ev(3);
      o.require(ev(0) >= -1e-10 * top, "negative eigenvalue at " + a.to_string());
      int rank = 0;
      for (int i = 0; i < 4; ++i) rank += ev(i) > 1e-10 * top;
      o.require(rank == 3, "rank != 3 at " + a.to_string());
    }
  }
  return o;
}

Outcome criterion3() {
  Outcome o;
  for (const MapParams& p : all_points()) {
    const auto grid = default_sample_grid(kSeed, 1000);
    o.require(verify_minor_agreement(p, grid).passed(), "verify_minor_agreement failed");
    for (const auto& pt : grid) {
      if (pt.is_infinity()) continue;
      const cplx a = pt.value();
      const CMat M = phi_apply(p, p_alpha(a));
      const double n = std::norm(a);
      const double closed[3] = {p.e + p.f * n, n * (p.h - 2 * p.c * p.d * a.real() + p.k * n),
                                p.a * p.c * p.d * n * std::norm(1.0 - a)};
      for (int i = 1; i <= 3; ++i) {
        const double direct = M.bottomRightCorner(i, i).determinant().real();
        const double scale = std::pow(M.cwiseAbs().maxCoeff(), i);
        o.require(std::abs(direct - closed[i - 1]) <= 1e-9 * (1 + std::abs(closed[i - 1])) +
                                                          1e-13 * scale,
                  "minor " + std::to_string(i) + " mismatch at " + pt.to_string());
      }
      o.require(std::abs(M.determinant()) <= 1e-12 * std::pow(M.norm(), 4),
                "Delta_4 not zero at " + pt.to_string());
    }
  }
  return o;
}

Outcome criterion4() {
  Outcome o;
  for (const MapParams& p : all_points()) {
    const auto grid = default_sample_grid(kSeed, 1000);
    o.require(verify_kernel(p, grid).passed(), "verify_kernel failed");
    for (const auto& pt : grid) {
      const CMat M = phi_apply(p, p_alpha(pt));
      CVec y(4);
      if (pt.is_infinity()) {
        y << 0, 1, 0, 0;
      } else {
        y = y_by_hand(p, pt.value());
      }
      o.require((M * y).norm() / (M.norm() * y.norm()) < 1e-9, "kernel residual at " + pt.to_string());
      o.require(4 - svd_rank(M) == 1, "nullity != 1 at " + pt.to_string());
    }
  }
  return o;
}

Outcome criterion5() {
  Outcome o;
  const auto samples = generic_samples(20, kSeed);
  for (const MapParams& p : all_points()) {
    o.require(exposedness_report(p, samples, kSeed).passed(), "exposedness_report failed");
    o.require(y_coefficient_rank(p) == 4, "y coefficient rank");
    const auto tm = tensor_coefficient_matrix(p);
    o.require(tm.matrix.rows() == 16 && svd_rank(tm.matrix) == 12, "tensor rank");
    o.require(irreducibility_check(p) == 1, "commutant dimension");
    o.require(svd_rank(phi_apply(p, CMat::Identity(2, 2))) == 4, "rank Phi(I)");
  }
  const std::vector<Monomial> listed{{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2},
                                     {3, 0}, {2, 1}, {1, 2}, {3, 1}, {2, 2}, {3, 2}};
  o.require(tensor_coefficient_matrix(kP).monomials == listed, "monomial support");
  return o;
}

Outcome criterion6() {
  Outcome o;
  const auto samples = generic_samples(20, kSeed);
  for (const MapParams& p : all_points()) {
    std::vector<CVec> z, zg;
    for (const auto& a : samples) {
      z.push_back(z_by_hand(p, a.value()));
      zg.push_back(z_gamma_by_hand(p, a.value()));
    }
    o.require(svd_rank(rows_of(z)) == 8 && svd_rank(rows_of(zg)) == 8, "hand-built ranks");
    o.require(spanning_check(p, samples) == std::pair(8, 8), "spanning_check");
  }
  return o;
}

Outcome criterion7() {
  Outcome o;
  const auto K = [](const MapParams& p, double r) {
    const double r2 = r * r;
    return 64 * p.a * p.c * std::sqrt(p.a * p.c * p.d) * r2 * r2 * (p.c + p.d) *
           (p.c + p.d * r2) * (p.c * (p.c + p.d) + p.d * (p.a * p.b * p.c + p.d) * r2) /
           std::pow(p.a * p.b - 1, 2);
  };
  o.require(std::abs(K(kP, 1) - 7680) < 1e-9 && std::abs(lemma41_constant(kP, 1) - 7680) < 1e-9,
            "K at (2,2,2,1), r = 1");
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> R(0.2, 5.0), T(0, 2 * kPi);
  for (int n = 0; n < 1000; ++n) {
    const double r = R(rng);
    const std::array<double, 4> t{T(rng), T(rng), T(rng), T(rng)};
    CMat Y(4, 4);
    double sum = 0, sines = 1;
    for (int j = 0; j < 4; ++j) {
      Y.row(j) = y_by_hand(kP, std::polar(r, t[j])).transpose();
      sum += t[j];
      for (int k = j + 1; k < 4; ++k) sines *= std::sin((t[j] - t[k]) / 2);
    }
    const cplx closed = K(kP, r) * std::polar(1.0, sum / 2) * sines;
    const cplx numeric = Y.determinant();
    const double scale = std::max(std::abs(closed), 1e-300);
    o.require(std::abs(numeric - closed) <= 1e-8 * scale, "determinant mismatch at draw " + std::to_string(n));
    const auto lib = lemma41_det(kP, r, t);
    o.require(std::abs(lib.closed - closed) <= 1e-10 * scale, "library closed form");
  }
  for (const MapParams& p : kSweep) o.require(lemma41_report(p, 100, kSeed).passed(), "sweep report");
  return o;
}

Outcome criterion8() {
  Outcome o;
  for (const MapParams& p : {kP, kSweep[0], kSweep[1]}) {
    for (const auto& spec : {CircleSpec::horizontal(1), CircleSpec::horizontal(2.5),
                             CircleSpec::vertical(0), CircleSpec::vertical(1.2)}) {
      o.require(span_dims(p, spec, 12) == std::pair(5, 5), "span dims of " + spec.tag());
      const auto pts = spec.sample(6);
      std::vector<CVec> ys, zs, zg;
      for (const auto& a : pts) {
        const auto pv = product_vector(p, a);
        ys.push_back(pv.y);
        zs.push_back(pv.z());
        zg.push_back(pv.z_gamma());
      }
      if (spec.kind() == CircleSpec::Kind::Horizontal) {
        o.require(svd_rank(rows_of({ys.begin(), ys.begin() + 4})) == 4, "4 kernel vectors on " + spec.tag());
      }
      o.require(svd_rank(rows_of({zs.begin(), zs.begin() + 5})) == 5, "5 product vectors on " + spec.tag());
      o.require(svd_rank(rows_of(zs)) == 5, "6 product vectors on " + spec.tag());
      o.require(svd_rank(rows_of(zg)) == 5, "6 conjugate product vectors on " + spec.tag());
    }
    const auto ad = affine_dim_face(p, CircleSpec::horizontal(1), 12);
    o.require(ad.affine_dim == 8 && ad.rank_nine == 9, "affine dimension");
  }
  // Independent: vectorized pure states from the circle.
  std::vector<CVec> states;
  for (const auto& a : CircleSpec::horizontal(1).sample(12)) {
    CVec z = z_by_hand(kP, a.value());
    z.normalize();
    const CMat rho = z * z.adjoint();
    states.push_back(CVec(Eigen::Map<const CVec>(rho.data(), 64)));
  }
  o.require(svd_rank(rows_of({states.begin(), states.begin() + 9})) == 9, "nine states");
  o.require(svd_rank(rows_of(states)) == 9, "twelve states");
  return o;
}

Outcome criterion9() {
  Outcome o;
  std::mt19937_64 rng(kSeed);
  std::uniform_real_distribution<double> R(0.3, 3.0), T(0, 2 * kPi);
  for (const MapParams& p : all_points()) {
    o.require(perp_basis_report(p, kSeed).passed(), "perp_basis_report");
    const double r = R(rng);
    const PerpBasis B = perp_basis(p, r);
    std::array<double, 4> t{};
    for (int j = 0; j < 4; ++j) t[j] = T(rng);
    const CVec z6 = zeta6(p, r, t);
    for (int j = 0; j < 8; ++j) {
      const cplx a = std::polar(r, j < 4 ? t[j] : T(rng));
      const CVec z = z_by_hand(p, a), zg = z_gamma_by_hand(p, a);
      for (int i = 0; i < 3; ++i) {
        o.require(overlap(B.zetas[i], z) < 1e-9, "zeta residual");
        o.require(overlap(B.etas[i], zg) < 1e-9, "eta residual");
      }
      if (j < 4) o.require(overlap(z6, z) < 1e-9, "zeta_6 residual");
    }
    CMat Z(8, 4);
    Z << B.zetas[0], B.zetas[1], B.zetas[2], z6;
    o.require(svd_rank(Z) == 4, "zeta_1..3, zeta_6 not independent");
  }
  return o;
}

Outcome criterion10() {
  Outcome o;
  for (const MapParams& p : all_points()) {
    o.require(intersection_report(p).passed(), "intersection_report");
    o.require(intersection_pair(p, 1, 2).passed(), "intersection_pair(1, 2)");
    o.require(vertical_intersection(p, 0.3, 1.2).passed(), "vertical_intersection");
    o.require(mixed_family_span(p) < 8, "P_1 u P^0 spans");
  }
  // Independent: rank of the union, and the intersection dimension by rank counting.
  std::vector<CVec> a, b;
  for (const auto& pt : CircleSpec::horizontal(1).sample(8)) a.push_back(z_by_hand(kP, pt.value()));
  for (const auto& pt : CircleSpec::horizontal(2).sample(8)) b.push_back(z_by_hand(kP, pt.value()));
  std::vector<CVec> both = a;
  both.insert(both.end(), b.begin(), b.end());
  const int ra = svd_rank(rows_of(a)), rb = svd_rank(rows_of(b)), rab = svd_rank(rows_of(both));
  o.require(rab == 8 && ra + rb - rab == 2, "rank of P_1 u P_2 by hand");
  const auto [z4, z5] = zeta45(kP);
  for (const CVec& v : {z4, z5}) {
    std::vector<CVec> aa = a, bb = b;
    aa.push_back(v);
    bb.push_back(v);
    o.require(svd_rank(rows_of(aa)) == ra && svd_rank(rows_of(bb)) == rb, "zeta_4/5 not in both spans");
  }
  return o;
}

Outcome criterion11() {
  Outcome o;
  const auto h = independence_report(kP, 1000, kSeed);
  const auto v = vertical_independence_report(kP, 1000, kSeed);
  o = report_ok(h);
  if (!o.ok) return o;
  o = report_ok(v);
  if (!o.ok) return o;
  o.require(h.details["dependent_configurations"].get<int>() > 0 &&
                h.details["independent_configurations"].get<int>() > 0,
            "horizontal branches");
  o.require(v.details["dependent_configurations"].get<int>() > 0 &&
                v.details["independent_configurations"].get<int>() > 0,
            "vertical branches");
  o.require(h.samples_checked == 1000 && v.samples_checked == 1000, "sample count");
  o.require(h.indeterminate + v.indeterminate < 50, "too many indeterminate samples");

  // Independent spot check of both predicates with hand-built vectors.
  const std::array<double, 4> t{0.2, 1.5, 3.1, 4.4};
  const std::array<double, 4> tau_dep{0.5, 1.1, 2.8, 9.2 - 4.4};
  const std::array<double, 4> tau_ind{0.5, 1.1, 2.8, 4.0};
  for (const auto* tau : {&tau_dep, &tau_ind}) {
    std::vector<CVec> z;
    for (double x : t) z.push_back(z_by_hand(kP, std::polar(1.0, x)));
    for (double x : *tau) z.push_back(z_by_hand(kP, std::polar(2.0, x)));
    o.require(svd_rank(rows_of(z)) == (tau == &tau_dep ? 7 : 8), "hand-built eight vectors");
  }
  return o;
}

Outcome criterion12() {
  Outcome o = report_ok(boundary_state_report(kP, kSeed));
  if (!o.ok) return o;
  const CMat C = choi_matrix(kP);
  for (const auto& [recipe, eight] :
       {std::pair(two_circle_recipe(1, 2, 5, 5, kSeed), false),
        std::pair(two_circle_recipe(1, 2, 4, 4, kSeed), true),
        std::pair(vertical_recipe(0.3, 1.2, {0.5, 1, 2, 4}, {0.6, 1.1, 1.9, 3.5}), true)}) {
    const CertifiedState st = build_state(kP, recipe);
    // Rebuild rho independently from the recipe.
    CMat rho = CMat::Zero(8, 8), rho_g = CMat::Zero(8, 8);
    for (const auto& pt : recipe.points) {
      CVec z = z_by_hand(kP, pt.alpha.value()), zg = z_gamma_by_hand(kP, pt.alpha.value());
      z.normalize();
      zg.normalize();
      rho += pt.weight * z * z.adjoint();
      rho_g += pt.weight * zg * zg.adjoint();
    }
    o.require((rho - st.rho).norm() < 1e-12, "rho differs from the hand-built mixture");
    o.require(std::abs(rho.trace() - 1.0) < 1e-12, "trace");
    o.require(std::abs((rho * C.transpose()).trace()) < 1e-9, "pairing");
    for (const CMat* M : {&rho, &rho_g}) {
      const Eigen::SelfAdjointEigenSolver<CMat> es(*M);
      o.require(es.eigenvalues().minCoeff() > 1e-10, "min eigenvalue");
      o.require(svd_rank(*M) == 8, "rank");
    }
    const auto cert = certify_boundary_full_rank(st, kP);
    o.require(cert.passed(), "certify_boundary_full_rank");
    if (eight) o.require(cert.details.value("length", 0) == 8, "length 8 not certified");
  }
  return o;
}

Outcome criterion13() {
  Outcome o;
  for (double r : {1.0, 2.0}) {
    const int n_angles = 360, n_radii = 21;
    const auto grid = beta_grid(r, n_angles, n_radii);
    const FaceScan scan = extreme_point_recovery(kP, r, grid);
    o.require(scan.report.passed(), "extreme_point_recovery at r = " + std::to_string(r));
    const double resolution = r / (n_radii - 1);
    int singular = 0;
    for (const auto& row : scan.rows) {
      const bool on_circle = std::abs(std::abs(row.beta) - r) < resolution / 2;
      const bool nontrivial = row.system_rank < 4;
      o.require(on_circle == nontrivial, "solution off the circle");
      if (nontrivial) {
        ++singular;
        const CVec y = y_by_hand(kP, row.beta);
        o.require(row.overlap_with_y_beta >= 1 - 1e-8, "overlap below 1 - 1e-8");
        o.require(y.norm() > 0, "degenerate y");
      }
    }
    o.require(singular == n_angles, "expected one singular ring");
  }
  return o;
}

Outcome criterion14() {
  Outcome o;
  std::vector<MapParams> pts{kP};
  pts.insert(pts.end(), kSweep.begin(), kSweep.begin() + 10);
  const SuiteResult a = run_verification(pts, sweep_options(kSeed));
  const SuiteResult b = run_verification(pts, sweep_options(kSeed));
  o.require(a.report.dump() == b.report.dump(), "reports differ");
  o.require(a.passed, "suite failed");
  const SuiteResult c = run_verification({kP}, SuiteOptions{});
  const SuiteResult d = run_verification({kP}, SuiteOptions{});
  o.require(c.report.dump(2) == d.report.dump(2), "default reports differ");
  o.require(c.passed, "default suite failed");
  return o;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"parameter derivation", criterion1},
      {"positivity", criterion2},
      {"minor agreement", criterion3},
      {"kernel", criterion4},
      {"exposedness ranks", criterion5},
      {"bi-spanning", criterion6},
      {"determinant formula", criterion7},
      {"face spans", criterion8},
      {"perpendicular bases", criterion9},
      {"intersections", criterion10},
      {"independence criteria", criterion11},
      {"boundary states", criterion12},
      {"extreme-point recovery", criterion13},
      {"determinism", criterion14},
  };
  int failed = 0;
  const auto start = std::chrono::steady_clock::now();
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.ok = false;
      o.note = std::string("exception: ") + e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s %2zu %-24s %6.2fs%s%s\n", o.ok ? "PASS" : "FAIL", i + 1,
                criteria[i].first.c_str(), secs, o.ok ? "" : "  ", o.note.c_str());
    std::fflush(stdout);
    failed += !o.ok;
  }
  const double total = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  std::printf("%zu/%zu criteria passed in %.1fs\n", criteria.size() - failed, criteria.size(), total);
  return failed == 0 ? 0 : 1;
}
