#include "phimap/face_geometry.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <ostream>
#include <sstream>

namespace phimap {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr double kDegeneracyBand = 1e-6;
constexpr int kCircleSamples = 8;

double wrap_angle(double t, double period) {
  double w = std::fmod(t, period);
  if (w < 0) w += period;
  return w;
}

bool same_mod(double x, double y, double period, double tol = 1e-12) {
  const double w = wrap_angle(x - y, period);
  return w <= tol || period - w <= tol;
}

CVec real_vec(std::initializer_list<double> xs) {
  CVec v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (double x : xs) v(i++) = x;
  return v;
}

std::vector<SpherePoint> horizontal_points(double r, const std::array<double, 4>& thetas) {
  std::vector<SpherePoint> out;
  for (double t : thetas) out.emplace_back(std::polar(r, t));
  return out;
}

std::vector<SpherePoint> vertical_points(double theta, const std::array<double, 4>& radii) {
  std::vector<SpherePoint> out;
  for (double t : radii) out.emplace_back(t * std::polar(1.0, theta));
  return out;
}

void require_distinct_angles(const std::array<double, 4>& thetas, const char* what) {
  for (std::size_t i = 0; i < thetas.size(); ++i) {
    for (std::size_t j = i + 1; j < thetas.size(); ++j) {
      if (same_mod(thetas[i], thetas[j], 2 * kPi)) {
        throw std::invalid_argument(std::string(what) + ": angles must be distinct mod 2 pi");
      }
    }
  }
}

void require_distinct_radii(const std::array<double, 4>& radii, const char* what) {
  for (std::size_t i = 0; i < radii.size(); ++i) {
    if (!(radii[i] != 0) || !std::isfinite(radii[i])) {
      throw std::invalid_argument(std::string(what) + ": radii must be finite and nonzero");
    }
    for (std::size_t j = i + 1; j < radii.size(); ++j) {
      if (radii[i] == radii[j]) {
        throw std::invalid_argument(std::string(what) + ": radii must be distinct");
      }
    }
  }
}

/// dim(span A ∩ span B) = dim A + dim B - dim(A + B).
int intersection_dim(const std::vector<CVec>& A, const std::vector<CVec>& B,
                     const ToleranceConfig& tol) {
  std::vector<CVec> all = A;
  all.insert(all.end(), B.begin(), B.end());
  return span_rank(A, tol) + span_rank(B, tol) - span_rank(all, tol);
}

std::vector<CVec> concat(std::vector<CVec> a, const std::vector<CVec>& b) {
  a.insert(a.end(), b.begin(), b.end());
  return a;
}

CVec vectorized_state(const CVec& z) {
  const CVec zn = z / z.norm();
  const CMat rho = zn * zn.adjoint();
  return Eigen::Map<const CVec>(rho.data(), rho.size());
}

}  // namespace

CircleSpec CircleSpec::horizontal(double radius) {
  if (!(radius > 0) || !std::isfinite(radius)) {
    throw std::invalid_argument("horizontal circle: radius must be positive and finite");
  }
  return CircleSpec(Kind::Horizontal, radius);
}

CircleSpec CircleSpec::vertical(double angle) {
  if (!std::isfinite(angle)) throw std::invalid_argument("vertical circle: angle must be finite");
  return CircleSpec(Kind::Vertical, angle);
}

SpherePoint CircleSpec::point(double param) const {
  if (kind_ == Kind::Horizontal) return SpherePoint(std::polar(value_, param));
  return SpherePoint(param * std::polar(1.0, value_));
}

std::vector<SpherePoint> CircleSpec::sample(int n) const {
  if (n < 1) throw std::invalid_argument("sample: n must be positive");
  std::vector<SpherePoint> out;
  if (kind_ == Kind::Horizontal) {
    for (int j = 0; j < n; ++j) out.push_back(point(0.1 + 2 * kPi * j / n));
    return out;
  }
  out.emplace_back(0.0);
  if (n > 1) out.push_back(SpherePoint::infinity());
  for (int j = 0; j + 2 < n; ++j) {
    const double t = (j % 2 == 0 ? 1.0 : -1.0) * (0.35 + 0.55 * j);
    out.push_back(point(t));
  }
  return out;
}

std::string CircleSpec::tag() const {
  std::ostringstream os;
  os << (kind_ == Kind::Horizontal ? "C" : "L") << value_;
  return os.str();
}

nlohmann::json CircleSpec::to_json() const {
  if (kind_ == Kind::Horizontal) return {{"kind", "horizontal"}, {"radius", value_}};
  return {{"kind", "vertical"}, {"angle", value_}};
}

CircleSpec CircleSpec::from_json(const nlohmann::json& j) {
  const std::string kind = j.at("kind").get<std::string>();
  if (kind == "horizontal") return horizontal(j.at("radius").get<double>());
  if (kind == "vertical") return vertical(j.at("angle").get<double>());
  throw std::invalid_argument("circle kind must be \"horizontal\" or \"vertical\"");
}

double u_of(const MapParams& p, double r) {
  const double r2 = r * r;
  return p.c * p.c + p.c * p.d + p.d * p.d * r2 - p.b * (p.e + p.f * r2);
}

PerpBasis perp_basis(const MapParams& p, double r) {
  const double c = p.c, d = p.d, g = p.g, b = p.b;
  const double r2 = r * r;
  const double E = p.e + p.f * r2;
  const double u = u_of(p, r);
  const double scale = c * c + c * d + d * d * r2 + b * E;
  if (std::abs(u) <= 1e-8 * scale) {
    throw SingularRadiusError("perp_basis: u vanishes at r = " + std::to_string(r));
  }
  const double cd = c * d;
  PerpBasis out;
  out.u = u;
  out.zetas[0] = real_vec({0, 0, d * r2 / c, -E / c, 0, 0, 1, 0});
  out.zetas[1] = real_vec({cd * cd * r2 / (g * u), -cd * r2 / u,
                           -r2 * (c * c * u - b * E * u - cd * cd * r2) / (E * u), -d * r2, 0, 1,
                           0, 0});
  out.zetas[2] = real_vec({cd * r2 / u, -g * r2 / u, g * r2 * (u + cd * r2) / (E * u), 0, 1, 0, 0,
                           0});
  out.etas[0] = real_vec({c * d * d * r2 / (g * u), -d * r2 / u,
                          -c * r2 * (u - d * d * r2) / (E * u), 0, 0, 0, 0, 1});
  out.etas[1] = real_vec({cd * E / (g * u), -E / u, cd * r2 / u, 0, 0, 0, 1, 0});
  out.etas[2] = real_vec({-(u * u - u * cd - cd * cd * r2) / (g * u), -(u + cd * r2) / u,
                          cd * r2 * (u + cd * r2) / (E * u), 0, -cd / g, 1, 0, 0});
  return out;
}

ThetaSums theta_sums(const MapParams& p, double r, const std::array<double, 4>& thetas) {
  std::array<cplx, 4> w;
  for (std::size_t i = 0; i < 4; ++i) w[i] = std::polar(1.0, -thetas[i]);
  ThetaSums s{};
  for (std::size_t i = 0; i < 4; ++i) {
    s.t1 += w[i];
    for (std::size_t j = i + 1; j < 4; ++j) {
      s.t2 += w[i] * w[j];
      for (std::size_t k = j + 1; k < 4; ++k) s.t3 += w[i] * w[j] * w[k];
    }
  }
  s.t4 = w[0] * w[1] * w[2] * w[3];
  const double c = p.c, d = p.d, u = u_of(p, r);
  s.t5 = c * c * c * d * r * s.t3 + c * c * u * s.t2 + c * d * r * u * s.t1 - c * c * c * d * s.t4 +
         d * d * r * r * u;
  return s;
}

CVec zeta6(const MapParams& p, double r, const std::array<double, 4>& thetas) {
  const double c = p.c, d = p.d, g = p.g;
  const double u = perp_basis(p, r).u;
  const double E = p.e + p.f * r * r;
  const ThetaSums s = theta_sums(p, r, thetas);
  const cplx m = r * s.t3 - s.t4;
  // v solves v^t z = 0 for the four product vectors; the Hilbert annihilator is conj(v).
  CVec v(8);
  v << c * (u * s.t4 + c * d * m) / (g * u), -c * m / u, r * r * s.t5 / (c * E * u),
      -r * (c * s.t1 + d * r) / c, 0.0, 0.0, 0.0, 1.0;
  return v.conjugate();
}

std::pair<CVec, CVec> zeta45(const MapParams& p) {
  return {real_vec({0, 0, 0, 0, 0, 0, 0, 1}), real_vec({p.g, p.c * p.d, 0, 0, 0, 0, 0, 0})};
}

std::pair<CVec, CVec> eta45(const MapParams& p) {
  return {real_vec({0, 0, 0, 0, p.g, p.c * p.d, 0, 0}), real_vec({0, 0, 0, 1, 0, 0, 0, 0})};
}

double lemma41_constant(const MapParams& p, double r) {
  const double a = p.a, b = p.b, c = p.c, d = p.d;
  const double r2 = r * r;
  const double ab1 = a * b - 1.0;
  return 64.0 * a * c * std::sqrt(a * c * d) * r2 * r2 * (c + d) * (c + d * r2) *
         (c * (c + d) + d * (a * b * c + d) * r2) / (ab1 * ab1);
}

DeterminantPair lemma41_det(const MapParams& p, double r, const std::array<double, 4>& thetas) {
  CMat Y(4, 4);
  double sum = 0;
  double sines = 1;
  for (int i = 0; i < 4; ++i) {
    Y.row(i) = kernel_vector(p, SpherePoint(std::polar(r, thetas[i]))).transpose();
    sum += thetas[i];
    for (int j = i + 1; j < 4; ++j) sines *= std::sin((thetas[i] - thetas[j]) / 2);
  }
  return {lemma41_constant(p, r) * std::polar(1.0, sum / 2) * sines, det(Y)};
}

std::pair<int, int> span_dims(const MapParams& p, const CircleSpec& spec, int n_samples,
                              const ToleranceConfig& tol) {
  const auto pts = spec.sample(n_samples);
  return {span_rank(z_vectors(p, pts), tol), span_rank(z_gamma_vectors(p, pts), tol)};
}

VerificationReport intersection_pair(const MapParams& p, double r, double s,
                                     const ToleranceConfig& tol) {
  if (std::abs(r - s) <= kTieTol * std::max(r, s)) {
    throw std::invalid_argument("intersection_pair: radii must differ");
  }
  VerificationReport rep;
  rep.claim = "span geometry of two horizontal circles";
  rep.params = params_to_json(p);
  rep.tolerances = tol;
  const auto Cr = CircleSpec::horizontal(r).sample(kCircleSamples);
  const auto Cs = CircleSpec::horizontal(s).sample(kCircleSamples);
  const auto zr = z_vectors(p, Cr), zs = z_vectors(p, Cs);
  const auto gr = z_gamma_vectors(p, Cr), gs = z_gamma_vectors(p, Cs);

  const auto check_dim = [&](const std::string& what, int got, int want) {
    rep.details[what] = got;
    if (got != want) {
      rep.fail(nullptr, what + " = " + std::to_string(got) + ", expected " + std::to_string(want),
               got - want);
    }
    ++rep.samples_checked;
  };
  const auto check_in = [&](const std::string& what, const CVec& v,
                            const std::vector<CVec>& span) {
    const double res = projection_residual(v, span, tol);
    if (!(res < tol.residual_tol)) rep.fail(nullptr, what + " is not in the span", res);
    ++rep.samples_checked;
  };
  const auto check_perp = [&](const std::string& what, const CVec& v,
                              const std::vector<CVec>& span) {
    double worst = 0;
    for (const auto& z : span) worst = std::max(worst, normalized_overlap(v, z));
    if (!(worst < tol.residual_tol)) rep.fail(nullptr, what + " is not orthogonal", worst);
    ++rep.samples_checked;
  };

  check_dim("dim span P_r", span_rank(zr, tol), 5);
  check_dim("dim span P_s", span_rank(zs, tol), 5);
  check_dim("dim span P_r^G", span_rank(gr, tol), 5);
  check_dim("dim span P_s^G", span_rank(gs, tol), 5);
  check_dim("dim intersection", intersection_dim(zr, zs, tol), 2);
  check_dim("dim intersection^G", intersection_dim(gr, gs, tol), 2);
  check_dim("dim union", span_rank(concat(zr, zs), tol), 8);
  check_dim("dim union^G", span_rank(concat(gr, gs), tol), 8);

  const auto [z4, z5] = zeta45(p);
  const auto [e4, e5] = eta45(p);
  for (const auto* span : {&zr, &zs}) {
    check_in("zeta_4", z4, *span);
    check_in("zeta_5", z5, *span);
  }
  for (const auto* span : {&gr, &gs}) {
    check_in("eta_4", e4, *span);
    check_in("eta_5", e5, *span);
  }

  for (const auto& [radius, plain, gamma] :
       {std::tuple{r, &zr, &gr}, std::tuple{s, &zs, &gs}}) {
    const PerpBasis B = perp_basis(p, radius);
    for (int i = 0; i < 3; ++i) {
      check_perp("zeta_" + std::to_string(i + 1), B.zetas[i], *plain);
      check_perp("eta_" + std::to_string(i + 1), B.etas[i], *gamma);
    }
    check_dim("rank zeta_1..3", span_rank(std::vector<CVec>(B.zetas.begin(), B.zetas.end()), tol),
              3);
    check_dim("rank eta_1..3", span_rank(std::vector<CVec>(B.etas.begin(), B.etas.end()), tol), 3);
  }
  return rep;
}

IndependenceOutcome eight_vector_test(const MapParams& p, double r,
                                      const std::array<double, 4>& thetas, double s,
                                      const std::array<double, 4>& taus,
                                      const ToleranceConfig& tol, double phase_tol) {
  if (!(r > 0) || !(s > 0)) throw std::invalid_argument("eight_vector_test: radii must be positive");
  if (std::abs(r - s) <= kTieTol * std::max(r, s)) {
    throw std::invalid_argument("eight_vector_test: radii must differ");
  }
  require_distinct_angles(thetas, "eight_vector_test");
  require_distinct_angles(taus, "eight_vector_test");
  double st = 0, su = 0;
  for (int i = 0; i < 4; ++i) {
    st += thetas[i];
    su += taus[i];
  }
  const cplx ph = std::polar(1.0, st), pt = std::polar(1.0, su);
  const double gap = std::abs(ph - pt);
  const double gap_gamma = std::abs(r * r * ph - s * s * pt) / std::max(r * r, s * s);

  IndependenceOutcome out;
  out.predicted = gap > kTieTol;
  out.predicted_gamma = gap_gamma > kTieTol;
  out.indeterminate = (gap > kTieTol && gap <= phase_tol) ||
                      (gap_gamma > kTieTol && gap_gamma <= phase_tol);

  std::vector<SpherePoint> all = horizontal_points(r, thetas);
  const auto more = horizontal_points(s, taus);
  all.insert(all.end(), more.begin(), more.end());
  out.rank = span_rank(z_vectors(p, all), tol);
  out.rank_gamma = span_rank(z_gamma_vectors(p, all), tol);
  out.observed = out.rank == 8;
  out.observed_gamma = out.rank_gamma == 8;
  return out;
}

double vertical_pair_degeneracy(const MapParams& p, double theta, double tau) {
  return (p.c * std::cos(theta - tau) + p.d * std::cos(theta + tau)) / (p.c + p.d);
}

IndependenceOutcome vertical_independence_test(const MapParams& p, double theta,
                                               const std::array<double, 4>& radii, double tau,
                                               const std::array<double, 4>& radii2,
                                               const ToleranceConfig& tol, double phase_tol) {
  if (same_mod(theta, tau, kPi)) {
    throw std::invalid_argument("vertical_independence_test: angles coincide mod pi");
  }
  require_distinct_radii(radii, "vertical_independence_test");
  require_distinct_radii(radii2, "vertical_independence_test");
  double pr = 1, ps = 1;
  for (int i = 0; i < 4; ++i) {
    pr *= radii[i];
    ps *= radii2[i];
  }
  const double tie = std::abs(pr - ps) / std::max(std::abs(pr), std::abs(ps));
  const double degeneracy = std::abs(vertical_pair_degeneracy(p, theta, tau));

  IndependenceOutcome out;
  out.predicted = tie > kTieTol && degeneracy > kTieTol;
  out.predicted_gamma = true;
  out.indeterminate = (tie > kTieTol && tie <= phase_tol) ||
                      (degeneracy > kTieTol && degeneracy <= kDegeneracyBand);

  std::vector<SpherePoint> all = vertical_points(theta, radii);
  const auto more = vertical_points(tau, radii2);
  all.insert(all.end(), more.begin(), more.end());
  out.rank = span_rank(z_vectors(p, all), tol);
  out.rank_gamma = span_rank(z_gamma_vectors(p, all), tol);
  out.observed = out.rank == 8;
  out.observed_gamma = out.rank_gamma == 8;
  return out;
}

VerificationReport vertical_intersection(const MapParams& p, double theta, double tau,
                                         const ToleranceConfig& tol) {
  if (same_mod(theta, tau, kPi)) {
    throw std::invalid_argument("vertical_intersection: angles coincide mod pi");
  }
  VerificationReport rep;
  rep.claim = "span P^theta and span P^tau meet in span{z_0, z_inf}";
  rep.params = params_to_json(p);
  rep.tolerances = tol;
  rep.details["degeneracy"] = vertical_pair_degeneracy(p, theta, tau);
  const auto A = CircleSpec::vertical(theta).sample(kCircleSamples);
  const auto B = CircleSpec::vertical(tau).sample(kCircleSamples);
  const std::vector<SpherePoint> ends{SpherePoint(0.0), SpherePoint::infinity()};

  const auto side = [&](const std::string& name, const std::vector<CVec>& za,
                        const std::vector<CVec>& zb, const std::vector<CVec>& e) {
    const int dim = intersection_dim(za, zb, tol);
    rep.details["dim intersection" + name] = dim;
    if (dim != 2) {
      rep.fail(nullptr, "dim intersection" + name + " = " + std::to_string(dim) + ", expected 2",
               dim - 2);
    }
    ++rep.samples_checked;
    for (const auto& v : e) {
      for (const auto* span : {&za, &zb}) {
        const double res = projection_residual(v, *span, tol);
        if (!(res < tol.residual_tol)) {
          rep.fail(nullptr, "endpoint vector" + name + " is not in the span", res);
        }
        ++rep.samples_checked;
      }
    }
  };
  side("", z_vectors(p, A), z_vectors(p, B), z_vectors(p, ends));
  side("^G", z_gamma_vectors(p, A), z_gamma_vectors(p, B), z_gamma_vectors(p, ends));
  return rep;
}

std::pair<int, int> mixed_family_ranks(const MapParams& p, double r, double theta,
                                       const ToleranceConfig& tol) {
  auto pts = CircleSpec::horizontal(r).sample(kCircleSamples);
  const auto line = CircleSpec::vertical(theta).sample(kCircleSamples);
  pts.insert(pts.end(), line.begin(), line.end());
  return {span_rank(z_vectors(p, pts), tol), span_rank(z_gamma_vectors(p, pts), tol)};
}

int mixed_family_span(const MapParams& p, const ToleranceConfig& tol) {
  return mixed_family_ranks(p, 1.0, 0.0, tol).first;
}

std::vector<cplx> beta_grid(double r, int n_angles, int n_radii) {
  if (!(r > 0) || n_angles < 1 || n_radii < 2) {
    throw std::invalid_argument("beta_grid: need r > 0, n_angles >= 1, n_radii >= 2");
  }
  std::vector<cplx> out;
  out.reserve(static_cast<std::size_t>(n_angles) * n_radii);
  for (int k = 0; k < n_radii; ++k) {
    const double factor = 0.5 + static_cast<double>(k) / (n_radii - 1);
    for (int j = 0; j < n_angles; ++j) {
      out.push_back(std::polar(r * factor, 2 * kPi * j / n_angles));
    }
  }
  return out;
}

FaceScan extreme_point_recovery(const MapParams& p, double r, const std::vector<cplx>& betas,
                                const ToleranceConfig& tol, double band) {
  const PerpBasis B = perp_basis(p, r);
  FaceScan scan;
  VerificationReport& rep = scan.report;
  rep.claim = "the only product vectors orthogonal to the perp bases lie over |beta| = r";
  rep.params = params_to_json(p);
  rep.tolerances = tol;
  rep.details["r"] = r;
  rep.details["u"] = B.u;

  int singular = 0;
  double worst_overlap_defect = 0;
  for (const cplx beta : betas) {
    CMat A(6, 4);
    for (int i = 0; i < 3; ++i) {
      A.row(i) = (B.zetas[i].head(4) + std::conj(beta) * B.zetas[i].tail(4)).transpose();
      A.row(3 + i) = (B.etas[i].head(4) + beta * B.etas[i].tail(4)).transpose();
    }
    ScanRow row;
    row.beta = beta;
    row.system_rank = numeric_rank(A, tol);
    Eigen::JacobiSVD<CMat> svd(A, Eigen::ComputeFullV);
    const CVec y = svd.matrixV().col(3);
    row.overlap_with_y_beta = normalized_overlap(y, kernel_vector(p, SpherePoint(beta)));
    scan.rows.push_back(row);

    const nlohmann::json where = sphere_point_to_json(SpherePoint(beta));
    const bool on_circle = std::abs(std::abs(beta) - r) <= band * r;
    if (on_circle) {
      ++singular;
      if (row.system_rank != 3) {
        rep.fail(where, "system rank " + std::to_string(row.system_rank) + " on the circle, expected 3",
                 row.system_rank);
      } else {
        const double defect = 1.0 - row.overlap_with_y_beta;
        worst_overlap_defect = std::max(worst_overlap_defect, defect);
        if (!(defect < tol.residual_tol)) rep.fail(where, "null vector is not y_beta", defect);
      }
    } else if (row.system_rank != 4) {
      rep.fail(where, "nontrivial solution off the circle", row.system_rank);
    }
    ++rep.samples_checked;
  }

  CMat A_inf(6, 4);
  for (int i = 0; i < 3; ++i) {
    A_inf.row(i) = B.zetas[i].tail(4).transpose();
    A_inf.row(3 + i) = B.etas[i].tail(4).transpose();
  }
  const int rank_inf = numeric_rank(A_inf, tol);
  rep.details["rank_second_branch"] = rank_inf;
  if (rank_inf != 4) rep.fail("inf", "branch x = (0,1) has a nontrivial solution", rank_inf);

  const auto Cr = CircleSpec::horizontal(r).sample(kCircleSamples);
  const double res_inf =
      projection_residual(product_vector(p, SpherePoint::infinity()).z(), z_vectors(p, Cr), tol);
  rep.details["z_inf_residual"] = res_inf;
  if (!(res_inf > std::sqrt(tol.residual_tol))) {
    rep.fail("inf", "z_inf lies in span P_r", res_inf);
  }
  rep.samples_checked += 2;
  rep.details["points_on_circle"] = singular;
  rep.details["worst_overlap_defect"] = worst_overlap_defect;
  return scan;
}

void write_scan_csv(std::ostream& os, const std::vector<ScanRow>& rows) {
  os << "beta_re,beta_im,system_rank,overlap_with_y_beta\n";
  const auto old = os.precision(17);
  for (const auto& row : rows) {
    os << row.beta.real() << ',' << row.beta.imag() << ',' << row.system_rank << ','
       << row.overlap_with_y_beta << '\n';
  }
  os.precision(old);
}

AffineDimension affine_dim_face(const MapParams& p, const CircleSpec& spec, int n_points,
                                const ToleranceConfig& tol) {
  if (n_points < 10) throw std::invalid_argument("affine_dim_face: need at least 10 points");
  const auto zs = z_vectors(p, spec.sample(n_points));
  std::vector<CVec> states;
  for (const auto& z : zs) states.push_back(vectorized_state(z));
  AffineDimension out;
  out.rank_nine = span_rank(std::vector<CVec>(states.begin(), states.begin() + 9), tol);
  out.rank_ten = span_rank(std::vector<CVec>(states.begin(), states.begin() + 10), tol);
  out.affine_dim = span_rank(states, tol) - 1;
  return out;
}

}  // namespace phimap
