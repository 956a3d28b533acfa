#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>
#include <sstream>

#include "phimap/face_geometry.hpp"
#include "phimap/suite.hpp"

using namespace phimap;

namespace {

const MapParams kP = derive_params(2, 2, 2, 1);
constexpr double kPi = std::numbers::pi;

double max_overlap(const CVec& v, const std::vector<CVec>& zs) {
  double worst = 0;
  for (const auto& z : zs) worst = std::max(worst, normalized_overlap(v, z));
  return worst;
}

}  // namespace

TEST_CASE("circle specs") {
  const auto C = CircleSpec::horizontal(1.5);
  const auto L = CircleSpec::vertical(0.5);
  CHECK(C.tag() == "C1.5");
  CHECK(L.tag() == "L0.5");
  CHECK(CircleSpec::from_json(C.to_json()) == C);
  CHECK(CircleSpec::from_json(L.to_json()) == L);
  CHECK_THROWS(CircleSpec::horizontal(0));
  CHECK_THROWS(CircleSpec::from_json({{"kind", "diagonal"}, {"angle", 1}}));

  for (const auto& a : C.sample(7)) CHECK(std::abs(a.value()) == doctest::Approx(1.5));
  const auto line = L.sample(6);
  CHECK(line[0] == SpherePoint(0.0));
  CHECK(line[1].is_infinity());
  for (std::size_t i = 2; i < line.size(); ++i) {
    const cplx a = line[i].value();
    CHECK(std::abs(std::sin(std::arg(a) - 0.5)) < 1e-12);
  }
}

TEST_CASE("u and the first perp vectors at (2,2,2,1), r = 1") {
  CHECK(u_of(kP, 1.0) == doctest::Approx(-5.0));
  const PerpBasis B = perp_basis(kP, 1.0);
  CVec z1 = CVec::Zero(8);
  z1(2) = 0.5;
  z1(3) = -3.0;
  z1(6) = 1.0;
  CHECK((B.zetas[0] - z1).norm() < 1e-15);
  CVec e2 = CVec::Zero(8);
  e2 << -1.2, 1.2, -0.4, 0, 0, 0, 1, 0;
  CHECK((B.etas[1] - e2).norm() < 1e-14);
}

TEST_CASE("u is negative in closed form") {
  // u = -c(c+d)/(ab-1) - k r^2 with k > 0.
  for (const MapParams& p : parameter_sweep(50, 3)) {
    for (double r : {0.1, 1.0, 4.0}) {
      const double closed = -p.c * (p.c + p.d) / (p.a * p.b - 1) - p.k * r * r;
      CHECK(u_of(p, r) == doctest::Approx(closed).epsilon(1e-12));
      CHECK(u_of(p, r) < 0);
    }
  }
}

TEST_CASE("perp bases annihilate the circle spans") {
  for (const MapParams& p : {kP, derive_params(0.7, 3, 1.4, 2.6), derive_params(2.9, 0.6, 0.5, 0.8)}) {
    for (double r : {0.4, 1.0, 2.7}) {
      const PerpBasis B = perp_basis(p, r);
      const auto pts = CircleSpec::horizontal(r).sample(9);
      const auto zs = z_vectors(p, pts);
      const auto gs = z_gamma_vectors(p, pts);
      for (int i = 0; i < 3; ++i) {
        CHECK(max_overlap(B.zetas[i], zs) < 1e-12);
        CHECK(max_overlap(B.etas[i], gs) < 1e-12);
      }
      // The plain and partial-conjugate complements are different subspaces.
      CHECK(max_overlap(B.zetas[2], gs) > 1e-3);
    }
  }
}

TEST_CASE("zeta_6 completes the complement of four product vectors") {
  std::mt19937_64 rng(21);
  std::uniform_real_distribution<double> U(0, 2 * kPi);
  for (const MapParams& p : {kP, derive_params(1.9, 0.8, 2.2, 0.6)}) {
    for (int trial = 0; trial < 20; ++trial) {
      const double r = 0.5 + trial * 0.1;
      const std::array<double, 4> t{U(rng), U(rng), U(rng), U(rng)};
      const CVec z6 = zeta6(p, r, t);
      std::vector<CVec> zs;
      for (double th : t) zs.push_back(product_vector(p, SpherePoint(std::polar(r, th))).z());
      CHECK(max_overlap(z6, zs) < 1e-11);
      const PerpBasis B = perp_basis(p, r);
      CHECK(span_rank<double>({B.zetas[0], B.zetas[1], B.zetas[2], z6}) == 4);
      // A fifth point on the circle is not annihilated.
      const CVec z5 = product_vector(p, SpherePoint(std::polar(r, t[0] + 0.3))).z();
      CHECK(normalized_overlap(z6, z5) > 1e-6);
    }
  }
}

TEST_CASE("determinant of four kernel vectors") {
  CHECK(lemma41_constant(kP, 1.0) == doctest::Approx(7680.0));
  // Angles 0, pi/2, pi, 3pi/2: the sine product is 1/4 and e^{i 3pi/2} = -i.
  const auto dp = lemma41_det(kP, 1.0, {0, kPi / 2, kPi, 3 * kPi / 2});
  CHECK(std::abs(dp.numeric - cplx(0, -1920)) < 1e-9);
  CHECK(std::abs(dp.closed - dp.numeric) < 1e-9);

  const auto same = lemma41_det(kP, 2.0, {0.3, 0.3, 1.0, 2.0});
  CHECK(std::abs(same.closed) == 0.0);
  CHECK(std::abs(same.numeric) < 1e-9 * lemma41_constant(kP, 2.0));
}

TEST_CASE("span dimensions of single circles") {
  for (const auto& spec : {CircleSpec::horizontal(1), CircleSpec::horizontal(0.3),
                           CircleSpec::vertical(0), CircleSpec::vertical(1.1)}) {
    const auto [plain, gamma] = span_dims(kP, spec, 12);
    CHECK(plain == 5);
    CHECK(gamma == 5);
  }
}

TEST_CASE("two horizontal circles") {
  CHECK(intersection_pair(kP, 1, 2).passed());
  CHECK(intersection_pair(derive_params(0.7, 3, 1.4, 2.6), 0.5, 1.7).passed());
  CHECK_THROWS_AS(intersection_pair(kP, 1, 1), std::invalid_argument);

  const auto [z4, z5] = zeta45(kP);
  const auto [e4, e5] = eta45(kP);
  // (1,0) (x) (g, cd, 0, 0) = (2, 2, 0, ...) at (2,2,2,1).
  CHECK(z5(0) == cplx(2));
  CHECK(z5(1) == cplx(2));
  CHECK(e4(4) == cplx(2));
  CHECK(e5(3) == cplx(1));
  CHECK(z4(7) == cplx(1));
}

TEST_CASE("eight vectors from two horizontal circles") {
  const std::array<double, 4> t{0.2, 1.5, 3.1, 4.4};

  SUBCASE("generic angle sums: independent") {
    const auto o = eight_vector_test(kP, 1, t, 2, {0.5, 1.1, 2.8, 5.0});
    CHECK(o.predicted);
    CHECK(o.observed);
    CHECK(o.rank == 8);
    CHECK(o.rank_gamma == 8);
    CHECK_FALSE(o.indeterminate);
  }
  SUBCASE("equal angle sums: dependent on the plain side only") {
    const double s3 = 0.2 + 1.5 + 3.1 + 4.4 - (0.5 + 1.1 + 2.8);
    const auto o = eight_vector_test(kP, 1, t, 2, {0.5, 1.1, 2.8, s3});
    CHECK_FALSE(o.predicted);
    CHECK(o.rank == 7);
    CHECK(o.predicted_gamma);
    CHECK(o.rank_gamma == 8);
    CHECK(o.agrees());
  }
  SUBCASE("sums equal mod 2 pi") {
    const double s3 = 0.2 + 1.5 + 3.1 + 4.4 - (0.5 + 1.1 + 2.8) - 2 * kPi;
    const auto o = eight_vector_test(kP, 0.7, t, 1.6, {0.5, 1.1, 2.8, s3});
    CHECK(o.rank == 7);
    CHECK(o.agrees());
  }
  SUBCASE("near-tie inside the band is indeterminate") {
    const double s3 = 0.2 + 1.5 + 3.1 + 4.4 - (0.5 + 1.1 + 2.8) + 1e-10;
    const auto o = eight_vector_test(kP, 1, t, 2, {0.5, 1.1, 2.8, s3});
    CHECK(o.indeterminate);
  }
  SUBCASE("bad arguments") {
    CHECK_THROWS(eight_vector_test(kP, 1, t, 1, t));
    CHECK_THROWS(eight_vector_test(kP, 1, {0.1, 0.1, 1, 2}, 2, t));
  }
}

TEST_CASE("vertical circles") {
  SUBCASE("generic pair meets in span{z_0, z_inf}") {
    CHECK(vertical_intersection(kP, 0.3, 1.2).passed());
    CHECK(vertical_intersection(derive_params(0.7, 3, 1.4, 2.6), -0.4, 1.0).passed());
  }
  SUBCASE("perpendicular lines are degenerate for every parameter set") {
    for (const MapParams& p : {kP, derive_params(0.7, 3, 1.4, 2.6)}) {
      CHECK(vertical_pair_degeneracy(p, 0, kPi / 2) == doctest::Approx(0.0));
      const auto rep = vertical_intersection(p, 0, kPi / 2);
      CHECK_FALSE(rep.passed());
      CHECK(rep.details["dim intersection"] == 3);
      CHECK(rep.details["dim intersection^G"] == 2);
    }
  }
  SUBCASE("theta and theta + pi are the same line") {
    CHECK_THROWS(vertical_intersection(kP, 0.3, 0.3 + kPi));
    CHECK(span_dims(kP, CircleSpec::vertical(0.3), 12) == span_dims(kP, CircleSpec::vertical(0.3 + kPi), 12));
  }
}

TEST_CASE("vertical product condition") {
  const std::array<double, 4> r{0.5, 1.0, 2.0, 4.0};
  SUBCASE("distinct products: independent") {
    const auto o = vertical_independence_test(kP, 0.3, r, 1.2, {0.6, 1.1, 1.9, 3.5});
    CHECK(o.predicted);
    CHECK(o.rank == 8);
    CHECK(o.rank_gamma == 8);
  }
  SUBCASE("permuted radii: dependent") {
    const auto o = vertical_independence_test(kP, 0.3, r, 1.2, {4.0, 0.5, 2.0, 1.0});
    CHECK_FALSE(o.predicted);
    CHECK(o.rank == 7);
    CHECK(o.rank_gamma == 8);
    CHECK(o.agrees());
  }
  SUBCASE("degenerate pair: dependent even with distinct products") {
    const auto o = vertical_independence_test(kP, 0, r, kPi / 2, {0.6, 1.1, 1.9, 3.5});
    CHECK_FALSE(o.predicted);
    CHECK(o.rank == 7);
    CHECK(o.agrees());
  }
  SUBCASE("negative radii sit on the same line") {
    const auto o = vertical_independence_test(kP, 0.3, {-0.5, 1.0, -2.0, 4.0}, 1.2,
                                              {0.6, -1.1, 1.9, 3.5});
    CHECK(o.agrees());
    CHECK(o.rank == 8);
  }
}

TEST_CASE("mixed families do not span") {
  const auto [rank, rank_gamma] = mixed_family_ranks(kP);
  CHECK(rank == 7);
  CHECK(rank_gamma == 8);
  CHECK(mixed_family_span(kP) == 7);
  // Control: two horizontal circles do span.
  auto pts = CircleSpec::horizontal(1).sample(8);
  const auto more = CircleSpec::horizontal(2).sample(8);
  pts.insert(pts.end(), more.begin(), more.end());
  CHECK(span_rank(z_vectors(kP, pts)) == 8);
}

TEST_CASE("extreme-point recovery") {
  const auto grid = beta_grid(1.0, 36, 21);
  CHECK(grid.size() == 36 * 21);
  const FaceScan scan = extreme_point_recovery(kP, 1.0, grid);
  CHECK(scan.report.passed());
  int singular = 0;
  for (const auto& row : scan.rows) {
    if (row.system_rank < 4) {
      ++singular;
      CHECK(std::abs(std::abs(row.beta) - 1.0) < 1e-12);
      CHECK(row.overlap_with_y_beta > 1 - 1e-8);
    }
  }
  CHECK(singular == 36);
  CHECK(scan.report.details["rank_second_branch"] == 4);

  std::ostringstream os;
  write_scan_csv(os, {scan.rows.front()});
  CHECK(os.str().rfind("beta_re,beta_im,system_rank,overlap_with_y_beta\n0.5,0,4,", 0) == 0);

  SUBCASE("other radius and parameters") {
    const MapParams p = derive_params(0.7, 3, 1.4, 2.6);
    CHECK(extreme_point_recovery(p, 2.3, beta_grid(2.3, 24, 11)).report.passed());
  }
}

TEST_CASE("affine dimension of the face over a circle") {
  const auto ad = affine_dim_face(kP, CircleSpec::horizontal(1), 12);
  CHECK(ad.rank_nine == 9);
  CHECK(ad.rank_ten == 9);
  CHECK(ad.affine_dim == 8);
}
