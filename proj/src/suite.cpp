#include "phimap/suite.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <numbers>
#include <random>

#include "phimap/exposedness.hpp"
#include "phimap/face_geometry.hpp"
#include "phimap/positivity.hpp"
#include "phimap/product_vector.hpp"
#include "phimap/state_factory.hpp"

namespace phimap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kLemmaTol = 1e-8;
constexpr double kMinSeparation = 0.05;

using Rng = std::mt19937_64;

double uniform(Rng& rng, double lo, double hi) {
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

double log_uniform(Rng& rng, double lo, double hi) {
  return std::exp(uniform(rng, std::log(lo), std::log(hi)));
}

double circular_distance(double x, double y, double period) {
  double w = std::fmod(std::abs(x - y), period);
  return std::min(w, period - w);
}

bool well_separated(const std::array<double, 4>& t, double period) {
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (circular_distance(t[i], t[j], period) < kMinSeparation) return false;
    }
  }
  return true;
}

std::array<double, 4> random_angles(Rng& rng) {
  std::array<double, 4> t{};
  do {
    for (double& x : t) x = uniform(rng, 0, 2 * kPi);
  } while (!well_separated(t, 2 * kPi));
  return t;
}

/// Signed radii with magnitudes log-uniform in [0.3, 3], pairwise separated.
std::array<double, 4> random_radii(Rng& rng) {
  std::array<double, 4> t{};
  bool ok = false;
  while (!ok) {
    for (double& x : t) x = (uniform(rng, 0, 1) < 0.5 ? -1 : 1) * log_uniform(rng, 0.3, 3.0);
    ok = true;
    for (int i = 0; i < 4; ++i) {
      for (int j = i + 1; j < 4; ++j) ok = ok && std::abs(t[i] - t[j]) >= kMinSeparation;
    }
  }
  return t;
}

VerificationReport make_report(const std::string& claim, const MapParams& p,
                               const ToleranceConfig& tol) {
  VerificationReport rep;
  rep.claim = claim;
  rep.params = params_to_json(p);
  rep.tolerances = tol;
  return rep;
}

void record_outcome(VerificationReport& rep, const IndependenceOutcome& o, nlohmann::json where,
                    int& independent, int& dependent) {
  ++rep.samples_checked;
  if (o.indeterminate) {
    ++rep.indeterminate;
    return;
  }
  (o.predicted ? independent : dependent) += 1;
  if (!o.agrees()) {
    rep.fail(std::move(where),
             "predicted " + std::string(o.predicted ? "independent" : "dependent") + "/" +
                 (o.predicted_gamma ? "independent" : "dependent") + ", observed ranks " +
                 std::to_string(o.rank) + "/" + std::to_string(o.rank_gamma),
             o.rank + 0.01 * o.rank_gamma);
  }
}

void require_both_branches(VerificationReport& rep, int independent, int dependent) {
  rep.details["independent_configurations"] = independent;
  rep.details["dependent_configurations"] = dependent;
  if (independent == 0 || dependent == 0) rep.fail(nullptr, "a branch was never exercised", 0);
}

}  // namespace

SuiteOptions sweep_options(std::uint64_t seed) {
  SuiteOptions opt;
  opt.seed = seed;
  opt.lemma_samples = 100;
  opt.independence_samples = 60;
  opt.grid_angles = 24;
  return opt;
}

std::vector<MapParams> parameter_sweep(int count, std::uint64_t seed) {
  if (count < 0) throw std::invalid_argument("parameter_sweep: count must be non-negative");
  Rng rng(seed);
  std::vector<MapParams> out;
  while (static_cast<int>(out.size()) < count) {
    const double a = log_uniform(rng, 0.5, 3.0), b = log_uniform(rng, 0.5, 3.0);
    const double c = log_uniform(rng, 0.5, 3.0), d = log_uniform(rng, 0.5, 3.0);
    if (a * b < 1.1) continue;
    out.push_back(derive_params(a, b, c, d));
  }
  return out;
}

VerificationReport params_report(const MapParams& p) {
  ToleranceConfig tol;
  auto rep = make_report("derived constants satisfy their defining relations", p, tol);
  const double res = params_residual(p);
  rep.details["residual"] = res;
  if (!(res < 1e-12)) rep.fail(nullptr, "defining relations violated", res);
  rep.samples_checked = 1;
  return rep;
}

VerificationReport lemma41_report(const MapParams& p, int n, std::uint64_t seed,
                                  const ToleranceConfig& tol) {
  auto rep = make_report("closed-form determinant of four kernel vectors on a circle", p, tol);
  Rng rng(seed);
  double worst = 0;
  for (int i = 0; i < n; ++i) {
    const double r = log_uniform(rng, 0.3, 3.0);
    const auto t = random_angles(rng);
    const auto [closed, numeric] = lemma41_det(p, r, t);
    const double err = std::abs(closed - numeric) / std::abs(closed);
    worst = std::max(worst, err);
    if (!(err < kLemmaTol)) {
      rep.fail(nlohmann::json{{"r", r}, {"thetas", t}}, "determinant mismatch", err);
    }
    ++rep.samples_checked;
  }
  rep.details["worst_relative_error"] = worst;
  rep.details["K_at_r1"] = lemma41_constant(p, 1.0);
  return rep;
}

VerificationReport face_span_report(const MapParams& p, const ToleranceConfig& tol) {
  auto rep = make_report("spans of product vectors over one circle", p, tol);
  const auto expect = [&](const std::string& what, int got, int want) {
    rep.details[what] = got;
    if (got != want) {
      rep.fail(nullptr, what + " = " + std::to_string(got) + ", expected " + std::to_string(want),
               got - want);
    }
    ++rep.samples_checked;
  };
  std::vector<CircleSpec> circles;
  for (double r : {0.5, 1.0, 2.0}) circles.push_back(CircleSpec::horizontal(r));
  for (double t : {0.0, 0.7, kPi / 2}) circles.push_back(CircleSpec::vertical(t));
  for (const auto& spec : circles) {
    const auto [plain, gamma] = span_dims(p, spec, 12, tol);
    expect("dim span " + spec.tag(), plain, 5);
    expect("dim span^G " + spec.tag(), gamma, 5);
  }
  for (double r : {0.5, 1.0, 2.0}) {
    const auto spec = CircleSpec::horizontal(r);
    const auto pts = spec.sample(6);
    std::vector<CVec> ys;
    for (int i = 0; i < 4; ++i) ys.push_back(kernel_vector(p, pts[i]));
    const auto zs = z_vectors(p, pts);
    expect("rank 4 kernel vectors " + spec.tag(), span_rank(ys, tol), 4);
    expect("rank 5 product vectors " + spec.tag(),
           span_rank(std::vector<CVec>(zs.begin(), zs.begin() + 5), tol), 5);
    expect("rank 6 product vectors " + spec.tag(), span_rank(zs, tol), 5);
    const AffineDimension ad = affine_dim_face(p, spec, 12, tol);
    expect("rank 9 states " + spec.tag(), ad.rank_nine, 9);
    expect("rank 10 states " + spec.tag(), ad.rank_ten, 9);
    expect("affine dimension " + spec.tag(), ad.affine_dim, 8);
  }
  return rep;
}

VerificationReport perp_basis_report(const MapParams& p, std::uint64_t seed,
                                     const ToleranceConfig& tol) {
  auto rep = make_report("orthogonal complements of circle spans", p, tol);
  Rng rng(seed);
  std::vector<double> radii{0.5, 1.0, 2.0};
  for (int i = 0; i < 5; ++i) radii.push_back(log_uniform(rng, 0.3, 3.0));
  double worst = 0;
  for (double r : radii) {
    PerpBasis B;
    try {
      B = perp_basis(p, r);
    } catch (const SingularRadiusError&) {
      ++rep.indeterminate;
      continue;
    }
    const auto pts = CircleSpec::horizontal(r).sample(8);
    const auto zs = z_vectors(p, pts);
    const auto gs = z_gamma_vectors(p, pts);
    for (int i = 0; i < 3; ++i) {
      for (std::size_t k = 0; k < pts.size(); ++k) {
        const double oz = normalized_overlap(B.zetas[i], zs[k]);
        const double og = normalized_overlap(B.etas[i], gs[k]);
        worst = std::max({worst, oz, og});
        if (!(oz < tol.residual_tol)) {
          rep.fail(sphere_point_to_json(pts[k]), "zeta_" + std::to_string(i + 1) + " not orthogonal", oz);
        }
        if (!(og < tol.residual_tol)) {
          rep.fail(sphere_point_to_json(pts[k]), "eta_" + std::to_string(i + 1) + " not orthogonal", og);
        }
        ++rep.samples_checked;
      }
    }
    const auto t = random_angles(rng);
    const CVec z6 = zeta6(p, r, t);
    std::vector<CVec> comp(B.zetas.begin(), B.zetas.end());
    comp.push_back(z6);
    if (span_rank(comp, tol) != 4) rep.fail(r, "zeta_1..3, zeta_6 are not independent", 0);
    for (double th : t) {
      const CVec z = product_vector(p, SpherePoint(std::polar(r, th))).z();
      for (const auto& v : comp) {
        const double o = normalized_overlap(v, z);
        worst = std::max(worst, o);
        if (!(o < tol.residual_tol)) rep.fail(r, "complement does not annihilate a generator", o);
      }
      ++rep.samples_checked;
    }
  }
  rep.details["worst_overlap"] = worst;
  return rep;
}

VerificationReport intersection_report(const MapParams& p, const ToleranceConfig& tol) {
  auto rep = make_report("intersections of circle spans", p, tol);
  for (const auto& [r, s] : {std::pair{1.0, 2.0}, std::pair{0.5, 3.0}}) {
    try {
      rep.absorb(intersection_pair(p, r, s, tol));
    } catch (const SingularRadiusError&) {
      ++rep.indeterminate;
    }
  }
  for (const auto& [t, u] : {std::pair{0.3, 1.2}, std::pair{-0.4, 1.0}, std::pair{0.9, 2.6}}) {
    if (std::abs(vertical_pair_degeneracy(p, t, u)) < 1e-3) {
      ++rep.indeterminate;
      continue;
    }
    rep.absorb(vertical_intersection(p, t, u, tol));
  }
  const auto [mixed, mixed_gamma] = mixed_family_ranks(p, 1.0, 0.0, tol);
  rep.details["rank C1 u L0"] = mixed;
  rep.details["rank^G C1 u L0"] = mixed_gamma;
  if (mixed >= 8) rep.fail(nullptr, "C1 u L0 spans the whole space", mixed);
  ++rep.samples_checked;
  return rep;
}

VerificationReport independence_report(const MapParams& p, int n, std::uint64_t seed,
                                       const ToleranceConfig& tol) {
  auto rep = make_report("eight product vectors from two horizontal circles", p, tol);
  Rng rng(seed);
  int independent = 0, dependent = 0;
  for (int i = 0; i < n; ++i) {
    double r = 0, s = 0;
    do {
      r = log_uniform(rng, 0.3, 3.0);
      s = log_uniform(rng, 0.3, 3.0);
    } while (std::abs(r - s) < kMinSeparation);
    const auto t = random_angles(rng);
    std::array<double, 4> u{};
    do {
      u = random_angles(rng);
      if (i % 2 == 1) u[3] = std::fmod(t[0] + t[1] + t[2] + t[3] - u[0] - u[1] - u[2], 2 * kPi);
    } while (!well_separated(u, 2 * kPi));
    const auto o = eight_vector_test(p, r, t, s, u, tol);
    record_outcome(rep, o, {{"r", r}, {"s", s}, {"thetas", t}, {"taus", u}}, independent, dependent);
  }
  require_both_branches(rep, independent, dependent);
  return rep;
}

VerificationReport vertical_independence_report(const MapParams& p, int n, std::uint64_t seed,
                                                const ToleranceConfig& tol) {
  auto rep = make_report("eight product vectors from two vertical circles", p, tol);
  Rng rng(seed);
  int independent = 0, dependent = 0;
  for (int i = 0; i < n; ++i) {
    const double theta = uniform(rng, 0, kPi);
    double tau = 0;
    const auto radii = random_radii(rng);
    auto radii2 = random_radii(rng);
    switch (i % 3) {
      case 0:
        do {
          tau = uniform(rng, 0, kPi);
        } while (circular_distance(theta, tau, kPi) < kMinSeparation ||
                 std::abs(vertical_pair_degeneracy(p, theta, tau)) < 1e-3);
        break;
      case 1:
        do {
          tau = uniform(rng, 0, kPi);
        } while (circular_distance(theta, tau, kPi) < kMinSeparation);
        radii2 = {radii[2], radii[0], radii[3], radii[1]};
        break;
      default:
        tau = std::atan2(-(p.c + p.d) * std::cos(theta), (p.c - p.d) * std::sin(theta));
        if (circular_distance(theta, tau, kPi) < kMinSeparation) {
          ++rep.samples_checked;
          ++rep.indeterminate;
          continue;
        }
        break;
    }
    const auto o = vertical_independence_test(p, theta, radii, tau, radii2, tol);
    record_outcome(rep, o,
                   {{"theta", theta}, {"tau", tau}, {"radii", radii}, {"radii2", radii2}},
                   independent, dependent);
  }
  require_both_branches(rep, independent, dependent);
  return rep;
}

VerificationReport boundary_state_report(const MapParams& p, std::uint64_t seed,
                                         const ToleranceConfig& tol) {
  auto rep = make_report("boundary separable states with full ranks", p, tol);
  const auto certify = [&](const std::string& name, const StateRecipe& recipe) {
    const CertifiedState st = build_state(p, recipe, tol);
    VerificationReport sub = certify_boundary_full_rank(st, p, tol);
    sub.claim = name;
    rep.details[name] = sub.details;
    rep.absorb(sub);
  };
  certify("C1+C2 5+5", two_circle_recipe(1.0, 2.0, 5, 5, seed));
  certify("C1+C2 4+4", two_circle_recipe(1.0, 2.0, 4, 4, seed));
  certify("C0.5+C3 5+4", two_circle_recipe(0.5, 3.0, 5, 4, seed + 1));
  const double theta = 0.3, tau = 1.2;
  if (std::abs(vertical_pair_degeneracy(p, theta, tau)) < 1e-3) {
    ++rep.indeterminate;
  } else {
    // Signed radii near 1 keep the mixture well conditioned; radii spread toward 0 and inf
    // crowd the normalized vectors onto z_0 and z_inf.
    const std::vector<double> r4{-1.5, -0.6, 0.7, 1.8};
    certify("L0.3+L1.2 4+4", vertical_recipe(theta, tau, r4, {-2.0, 0.5, 0.9, 1.6}));
    certify("L0.3+L1.2 4+5", vertical_recipe(theta, tau, r4, {-2.0, -0.4, 0.5, 0.9, 1.6}));
  }
  return rep;
}

VerificationReport extreme_point_report(const MapParams& p, int n_angles, int n_radii,
                                        const ToleranceConfig& tol) {
  auto rep = make_report("extreme points of the face over a circle", p, tol);
  for (double r : {1.0, 2.0}) {
    try {
      FaceScan scan = extreme_point_recovery(p, r, beta_grid(r, n_angles, n_radii), tol);
      rep.details["r=" + std::to_string(r)] = scan.report.details;
      rep.absorb(scan.report);
    } catch (const SingularRadiusError&) {
      ++rep.indeterminate;
    }
  }
  return rep;
}

ClaimList run_claims(const MapParams& p, const SuiteOptions& opt, const ToleranceConfig& tol) {
  const auto grid = default_sample_grid(opt.seed, opt.positivity_random);
  ClaimList out;
  out.emplace_back("parameters", params_report(p));
  out.emplace_back("positivity", verify_positivity(p, grid, tol));
  out.emplace_back("minors", verify_minor_agreement(p, grid, tol));
  out.emplace_back("kernel", verify_kernel(p, grid, tol));
  out.emplace_back("exposedness",
                   exposedness_report(p, generic_samples(opt.span_samples, opt.seed), opt.seed, tol));
  out.emplace_back("indecomposability", indecomposability_evidence(p, tol));
  out.emplace_back("determinant", lemma41_report(p, opt.lemma_samples, opt.seed, tol));
  out.emplace_back("face_spans", face_span_report(p, tol));
  out.emplace_back("perp_bases", perp_basis_report(p, opt.seed, tol));
  out.emplace_back("intersections", intersection_report(p, tol));
  out.emplace_back("independence", independence_report(p, opt.independence_samples, opt.seed, tol));
  out.emplace_back("vertical_independence",
                   vertical_independence_report(p, opt.independence_samples, opt.seed, tol));
  out.emplace_back("boundary_states", boundary_state_report(p, opt.seed, tol));
  out.emplace_back("extreme_points", extreme_point_report(p, opt.grid_angles, opt.grid_radii, tol));
  return out;
}

SuiteResult run_verification(const std::vector<MapParams>& points, const SuiteOptions& opt,
                             const ToleranceConfig& tol) {
  SuiteResult res;
  res.passed = true;
  nlohmann::json runs = nlohmann::json::array();
  nlohmann::json failed = nlohmann::json::array();
  std::size_t checked = 0, indeterminate = 0;
  for (std::size_t i = 0; i < points.size(); ++i) {
    nlohmann::json claims = nlohmann::json::object();
    for (const auto& [name, rep] : run_claims(points[i], opt, tol)) {
      claims[name] = rep.to_json();
      checked += rep.samples_checked;
      indeterminate += rep.indeterminate;
      if (!rep.passed()) {
        res.passed = false;
        failed.push_back({{"point", i}, {"claim", name}});
      }
    }
    runs.push_back({{"params", params_to_json(points[i])}, {"claims", claims}});
  }
  res.report = {{"schema_version", kReportSchemaVersion},
                {"seed", opt.seed},
                {"tolerances", tolerances_to_json(tol)},
                {"points", runs},
                {"summary",
                 {{"passed", res.passed},
                  {"parameter_points", points.size()},
                  {"samples_checked", checked},
                  {"indeterminate", indeterminate},
                  {"failed_claims", failed}}}};
  return res;
}

}  // namespace phimap
