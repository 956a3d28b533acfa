#include "phimap/state_factory.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "phimap/product_vector.hpp"

namespace phimap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kWeightTol = 1e-12;
constexpr int kMaxResamples = 100;

nlohmann::json matrix_to_json(const CMat& M) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index i = 0; i < M.rows(); ++i) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index j = 0; j < M.cols(); ++j) row.push_back({M(i, j).real(), M(i, j).imag()});
    rows.push_back(row);
  }
  return rows;
}

CMat matrix_from_json(const nlohmann::json& j) {
  const auto n = static_cast<Eigen::Index>(j.size());
  const auto m = n == 0 ? Eigen::Index(0) : static_cast<Eigen::Index>(j.at(0).size());
  CMat M(n, m);
  for (Eigen::Index i = 0; i < n; ++i) {
    if (static_cast<Eigen::Index>(j.at(i).size()) != m) throw DimensionError("ragged matrix");
    for (Eigen::Index k = 0; k < m; ++k) {
      const auto& e = j.at(i).at(k);
      M(i, k) = cplx(e.at(0).get<double>(), e.at(1).get<double>());
    }
  }
  return M;
}

/// k angles 2 pi j / k + offset + jitter, jitter up to a quarter of the spacing.
std::vector<double> jittered_angles(int k, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  const double spacing = 2 * kPi / k;
  const double offset = spacing * unit(rng);
  std::vector<double> out;
  for (int j = 0; j < k; ++j) out.push_back(offset + spacing * (j + 0.5 * (unit(rng) - 0.5)));
  return out;
}

double angle_sum_gap(const std::vector<double>& t, const std::vector<double>& u) {
  double a = 0, b = 0;
  for (double x : t) a += x;
  for (double x : u) b += x;
  return std::abs(std::polar(1.0, a) - std::polar(1.0, b));
}

StateRecipe uniform_recipe(const std::vector<std::pair<SpherePoint, CircleSpec>>& pts) {
  StateRecipe recipe;
  const double w = 1.0 / static_cast<double>(pts.size());
  for (const auto& [alpha, circle] : pts) recipe.points.push_back({w, alpha, circle});
  return recipe;
}

}  // namespace

void StateRecipe::validate() const {
  if (points.empty()) throw RecipeError("recipe has no points");
  double sum = 0;
  for (const auto& pt : points) {
    if (!(pt.weight > 0) || !std::isfinite(pt.weight)) {
      throw RecipeError("recipe weights must be positive and finite");
    }
    sum += pt.weight;
  }
  if (std::abs(sum - 1.0) > kWeightTol) {
    throw RecipeError("recipe weights sum to " + std::to_string(sum) + ", not 1");
  }
}

std::map<std::string, int> StateRecipe::counts() const {
  std::map<std::string, int> out;
  for (const auto& pt : points) ++out[pt.circle.tag()];
  return out;
}

nlohmann::json StateRecipe::to_json() const {
  nlohmann::json pts = nlohmann::json::array();
  for (const auto& pt : points) {
    pts.push_back({{"weight", pt.weight},
                   {"alpha", sphere_point_to_json(pt.alpha)},
                   {"circle", pt.circle.to_json()},
                   {"tag", pt.circle.tag()}});
  }
  return {{"points", pts}, {"counts", counts()}};
}

StateRecipe StateRecipe::from_json(const nlohmann::json& j) {
  StateRecipe recipe;
  for (const auto& pt : j.at("points")) {
    recipe.points.push_back({pt.at("weight").get<double>(), sphere_point_from_json(pt.at("alpha")),
                             CircleSpec::from_json(pt.at("circle"))});
  }
  return recipe;
}

nlohmann::json Certificate::to_json() const {
  return {{"trace", trace},
          {"psd", psd},
          {"psd_gamma", psd_gamma},
          {"rank", rank},
          {"rank_gamma", rank_gamma},
          {"gram_rank", gram_rank},
          {"gram_rank_gamma", gram_rank_gamma},
          {"min_eigenvalue", min_eigenvalue},
          {"min_eigenvalue_gamma", min_eigenvalue_gamma},
          {"pairing_value", pairing_value},
          {"gamma_identity_residual", gamma_identity_residual},
          {"length_upper_bound", length_upper_bound}};
}

Certificate Certificate::from_json(const nlohmann::json& j) {
  Certificate c;
  c.trace = j.at("trace").get<double>();
  c.psd = j.at("psd").get<bool>();
  c.psd_gamma = j.at("psd_gamma").get<bool>();
  c.rank = j.at("rank").get<int>();
  c.rank_gamma = j.at("rank_gamma").get<int>();
  c.gram_rank = j.at("gram_rank").get<int>();
  c.gram_rank_gamma = j.at("gram_rank_gamma").get<int>();
  c.min_eigenvalue = j.at("min_eigenvalue").get<double>();
  c.min_eigenvalue_gamma = j.at("min_eigenvalue_gamma").get<double>();
  c.pairing_value = j.at("pairing_value").get<double>();
  c.gamma_identity_residual = j.at("gamma_identity_residual").get<double>();
  c.length_upper_bound = j.at("length_upper_bound").get<int>();
  return c;
}

nlohmann::json CertifiedState::to_json() const {
  return {{"schema_version", kReportSchemaVersion},
          {"params", params_to_json(params)},
          {"recipe", recipe.to_json()},
          {"rho", matrix_to_json(rho)},
          {"certificate", certificate.to_json()}};
}

CertifiedState CertifiedState::from_json(const nlohmann::json& j) {
  CertifiedState s;
  s.params = params_from_json(j.at("params"));
  s.recipe = StateRecipe::from_json(j.at("recipe"));
  s.rho = matrix_from_json(j.at("rho"));
  if (s.rho.rows() != 8 || s.rho.cols() != 8) throw DimensionError("rho must be 8x8");
  s.certificate = Certificate::from_json(j.at("certificate"));
  return s;
}

CertifiedState build_state(const MapParams& p, const StateRecipe& recipe,
                           const ToleranceConfig& tol) {
  recipe.validate();
  CertifiedState out;
  out.params = p;
  out.recipe = recipe;
  CMat rho = CMat::Zero(8, 8);
  CMat rho_gamma = CMat::Zero(8, 8);
  std::vector<CVec> weighted, weighted_gamma;
  for (const auto& pt : recipe.points) {
    const ProductVector pv = product_vector(p, pt.alpha);
    const CVec z = pv.z();
    const double n = z.norm();
    if (!(n > 0)) throw RecipeError("product vector vanishes at " + pt.alpha.to_string());
    const CVec zn = z / n;
    const CVec zg = pv.z_gamma() / n;
    rho += pt.weight * zn * zn.adjoint();
    rho_gamma += pt.weight * zg * zg.adjoint();
    weighted.push_back(std::sqrt(pt.weight) * zn);
    weighted_gamma.push_back(std::sqrt(pt.weight) * zg);
  }
  out.rho = rho;

  Certificate& c = out.certificate;
  const CMat pt_rho = partial_transpose(rho);
  c.trace = rho.trace().real();
  c.psd = is_psd(rho, tol);
  c.psd_gamma = is_psd(pt_rho, tol);
  c.rank = numeric_rank(rho, tol);
  c.rank_gamma = numeric_rank(pt_rho, tol);
  c.min_eigenvalue = hermitian_eigenvalues(rho, tol)(0);
  c.min_eigenvalue_gamma = hermitian_eigenvalues(pt_rho, tol)(0);
  c.pairing_value = pairing(rho, p, tol);
  c.gamma_identity_residual = (pt_rho - rho_gamma).cwiseAbs().maxCoeff();
  const CMat Z = stack_rows(weighted);
  const CMat Zg = stack_rows(weighted_gamma);
  c.gram_rank = numeric_rank(CMat(Z.conjugate() * Z.transpose()), tol);
  c.gram_rank_gamma = numeric_rank(CMat(Zg.conjugate() * Zg.transpose()), tol);
  c.length_upper_bound = static_cast<int>(recipe.points.size());
  return out;
}

StateRecipe two_circle_recipe(double r, double s, int k_r, int k_s, std::uint64_t seed) {
  if (!(r > 0) || !(s > 0)) throw RecipeError("two_circle_recipe: radii must be positive");
  if (std::abs(r - s) <= kTieTol * std::max(r, s)) {
    throw RecipeError("two_circle_recipe: radii must differ");
  }
  for (int k : {k_r, k_s}) {
    if (k != 4 && k != 5) throw RecipeError("two_circle_recipe: point counts must be 4 or 5");
  }
  std::mt19937_64 rng(seed);
  std::vector<double> t = jittered_angles(k_r, rng);
  std::vector<double> u = jittered_angles(k_s, rng);
  if (k_r == 4 && k_s == 4) {
    int attempt = 0;
    while (angle_sum_gap(t, u) <= kRecipeMargin && ++attempt < kMaxResamples) {
      t = jittered_angles(k_r, rng);
      u = jittered_angles(k_s, rng);
    }
    if (angle_sum_gap(t, u) <= kRecipeMargin) {
      t = {0.1, 1.7, 3.3, 4.9};
      u = {0.4, 2.0, 3.6, 5.2};
    }
  }
  const auto Cr = CircleSpec::horizontal(r);
  const auto Cs = CircleSpec::horizontal(s);
  std::vector<std::pair<SpherePoint, CircleSpec>> pts;
  for (double x : t) pts.emplace_back(Cr.point(x), Cr);
  for (double x : u) pts.emplace_back(Cs.point(x), Cs);
  return uniform_recipe(pts);
}

StateRecipe vertical_recipe(double theta, double tau, const std::vector<double>& radii,
                            const std::vector<double>& radii2) {
  const double w = std::fmod(std::abs(theta - tau), kPi);
  if (w <= kTieTol || kPi - w <= kTieTol) {
    throw RecipeError("vertical_recipe: angles coincide mod pi");
  }
  if (radii.empty() || radii2.empty()) throw RecipeError("vertical_recipe: empty radius list");
  for (const auto* list : {&radii, &radii2}) {
    for (std::size_t i = 0; i < list->size(); ++i) {
      if (!((*list)[i] != 0) || !std::isfinite((*list)[i])) {
        throw RecipeError("vertical_recipe: radii must be finite and nonzero");
      }
      for (std::size_t j = i + 1; j < list->size(); ++j) {
        if ((*list)[i] == (*list)[j]) throw RecipeError("vertical_recipe: radii must be distinct");
      }
    }
  }
  if (radii.size() == 4 && radii2.size() == 4) {
    double pr = 1, ps = 1;
    for (int i = 0; i < 4; ++i) {
      pr *= radii[i];
      ps *= radii2[i];
    }
    if (std::abs(pr - ps) <= kPhaseTol * std::max(std::abs(pr), std::abs(ps))) {
      throw RecipeError("vertical_recipe: radius products tie");
    }
  }
  const auto A = CircleSpec::vertical(theta);
  const auto B = CircleSpec::vertical(tau);
  std::vector<std::pair<SpherePoint, CircleSpec>> pts;
  for (double x : radii) pts.emplace_back(A.point(x), A);
  for (double x : radii2) pts.emplace_back(B.point(x), B);
  return uniform_recipe(pts);
}

VerificationReport certify_boundary_full_rank(const CertifiedState& state, const MapParams& p,
                                              const ToleranceConfig& tol) {
  VerificationReport rep;
  rep.claim = "boundary separable state with full ranks";
  rep.params = params_to_json(p);
  rep.tolerances = tol;
  const Certificate& c = state.certificate;
  rep.details = c.to_json();
  rep.details["counts"] = state.recipe.counts();

  const auto check = [&](bool ok, const std::string& what, double value) {
    if (!ok) rep.fail(nullptr, what, value);
    ++rep.samples_checked;
  };
  const double pairing_now = pairing(state.rho, p, tol);
  check(std::abs(c.trace - 1.0) <= kWeightTol, "trace is not 1", c.trace - 1.0);
  check(c.psd, "rho is not PSD", c.min_eigenvalue);
  check(c.psd_gamma, "rho^Gamma is not PSD", c.min_eigenvalue_gamma);
  check(c.rank == 8, "rank rho = " + std::to_string(c.rank) + " < 8", c.rank);
  check(c.rank_gamma == 8, "rank rho^Gamma = " + std::to_string(c.rank_gamma) + " < 8",
        c.rank_gamma);
  check(c.min_eigenvalue > tol.psd_tol, "min eigenvalue of rho below psd_tol", c.min_eigenvalue);
  check(c.min_eigenvalue_gamma > tol.psd_tol, "min eigenvalue of rho^Gamma below psd_tol",
        c.min_eigenvalue_gamma);
  check(std::abs(pairing_now) <= tol.residual_tol, "pairing with Phi is not zero", pairing_now);
  check(c.gram_rank == c.rank, "Gram rank disagrees with rank rho", c.gram_rank - c.rank);
  check(c.gram_rank_gamma == c.rank_gamma, "Gram rank disagrees with rank rho^Gamma",
        c.gram_rank_gamma - c.rank_gamma);
  check(c.gamma_identity_residual <= 1e-12, "partial transpose is not the mixture of z^Gamma",
        c.gamma_identity_residual);
  if (rep.passed() && c.length_upper_bound == 8) rep.details["length"] = 8;
  return rep;
}

}  // namespace phimap
