#include "phimap/exposedness.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <set>

#include "phimap/positivity.hpp"
#include "phimap/product_vector.hpp"

namespace phimap {

std::string Monomial::to_string() const {
  auto part = [](const char* sym, int n) -> std::string {
    if (n == 0) return "";
    return n == 1 ? std::string(sym) : std::string(sym) + "^" + std::to_string(n);
  };
  std::string s = part("a", k) + part("A", l);
  return s.empty() ? "1" : s;
}

MonomialPoly::MonomialPoly(std::initializer_list<std::pair<Monomial, cplx>> terms) {
  for (const auto& [m, c] : terms) add(m, c);
}

void MonomialPoly::add(const Monomial& m, cplx coef) {
  if (m.k < 0 || m.l < 0) throw std::invalid_argument("monomial exponents must be nonnegative");
  auto it = terms_.find(m);
  if (it == terms_.end()) {
    if (coef != cplx(0)) terms_.emplace(m, coef);
    return;
  }
  it->second += coef;
  if (it->second == cplx(0)) terms_.erase(it);
}

MonomialPoly MonomialPoly::operator*(const MonomialPoly& other) const {
  MonomialPoly out;
  for (const auto& [m1, c1] : terms_) {
    for (const auto& [m2, c2] : other.terms_) out.add({m1.k + m2.k, m1.l + m2.l}, c1 * c2);
  }
  return out;
}

cplx MonomialPoly::evaluate(cplx alpha) const {
  cplx sum = 0;
  const cplx ab = std::conj(alpha);
  for (const auto& [m, c] : terms_) sum += c * std::pow(alpha, m.k) * std::pow(ab, m.l);
  return sum;
}

cplx MonomialPoly::coefficient(const Monomial& m) const {
  auto it = terms_.find(m);
  return it == terms_.end() ? cplx(0) : it->second;
}

CoefficientMatrix coefficient_matrix(const std::vector<MonomialPoly>& rows) {
  std::set<Monomial, GradedOrder> support;
  for (const auto& r : rows) {
    for (const auto& [m, c] : r.terms()) support.insert(m);
  }
  CoefficientMatrix out;
  out.monomials.assign(support.begin(), support.end());
  out.matrix = CMat::Zero(static_cast<Eigen::Index>(rows.size()),
                          static_cast<Eigen::Index>(out.monomials.size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < out.monomials.size(); ++j) {
      out.matrix(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          rows[i].coefficient(out.monomials[j]);
    }
  }
  return out;
}

std::array<MonomialPoly, 4> y_poly(const MapParams& p) {
  const double cd = p.c * p.d;
  return {
      MonomialPoly{{{1, 0}, p.g}, {{2, 0}, -p.g}},
      MonomialPoly{{{1, 0}, p.h}, {{2, 0}, -cd}, {{1, 1}, -cd}, {{2, 1}, p.k}},
      MonomialPoly{{{0, 0}, -p.e}, {{1, 1}, -p.f}},
      MonomialPoly{{{0, 1}, -p.c}, {{1, 1}, -p.d}},
  };
}

std::array<MonomialPoly, 4> p_alpha_poly() {
  return {MonomialPoly{{{0, 0}, 1.0}}, MonomialPoly{{{1, 0}, 1.0}}, MonomialPoly{{{0, 1}, 1.0}},
          MonomialPoly{{{1, 1}, 1.0}}};
}

std::vector<Monomial> tensor_monomials() {
  return {{0, 0}, {1, 0}, {0, 1}, {2, 0}, {1, 1}, {0, 2},
          {3, 0}, {2, 1}, {1, 2}, {3, 1}, {2, 2}, {3, 2}};
}

CoefficientMatrix y_coefficient_matrix(const MapParams& p) {
  const auto rows = y_poly(p);
  return coefficient_matrix({rows.begin(), rows.end()});
}

int y_coefficient_rank(const MapParams& p, const ToleranceConfig& tol) {
  return numeric_rank(y_coefficient_matrix(p).matrix, tol);
}

CoefficientMatrix tensor_coefficient_matrix(const MapParams& p) {
  const auto left = p_alpha_poly();
  const auto right = y_poly(p);
  std::vector<MonomialPoly> rows;
  rows.reserve(16);
  for (const auto& l : left) {
    for (const auto& r : right) rows.push_back(l * r);
  }
  CoefficientMatrix cm = coefficient_matrix(rows);
  if (cm.monomials != tensor_monomials()) {
    std::string got;
    for (const auto& m : cm.monomials) got += m.to_string() + " ";
    throw StructuralError("P_alpha (x) y_alpha has unexpected monomial support: " + got);
  }
  return cm;
}

int tensor_coefficient_rank(const MapParams& p, const ToleranceConfig& tol) {
  return numeric_rank(tensor_coefficient_matrix(p).matrix, tol);
}

int sampled_tensor_rank(const MapParams& p, int n_samples, std::uint64_t seed,
                        const ToleranceConfig& tol) {
  std::vector<CVec> rows;
  for (const auto& alpha : generic_samples(n_samples, seed)) {
    CVec flat(4);
    const cplx a = alpha.value();
    flat << 1.0, a, std::conj(a), std::norm(a);
    rows.push_back(kron(flat, kernel_vector(p, alpha)));
  }
  return span_rank(rows, tol);
}

VerificationReport dim_condition_check(const MapParams& p, const ToleranceConfig& tol) {
  constexpr int m = 2, n = 4;
  constexpr int target = n * (m * m - 1);
  VerificationReport rep;
  rep.claim = "dim span{a (x) h : Phi(a) h = 0} = n(m^2 - 1)";
  rep.params = params_to_json(p);
  rep.tolerances = tol;
  const CoefficientMatrix cm = tensor_coefficient_matrix(p);
  const int rank = numeric_rank(cm.matrix, tol);
  nlohmann::json monos = nlohmann::json::array();
  for (const auto& mono : cm.monomials) monos.push_back(mono.to_string());
  rep.details = {{"target", target}, {"tensor_coefficient_rank", rank}, {"monomials", monos}};
  rep.samples_checked = 1;
  if (rank != target) rep.fail(nullptr, "tensor coefficient rank " + std::to_string(rank), rank);
  return rep;
}

namespace {

// Real basis of M_n: Hermitian matrix units followed by i times the same.
std::vector<CMat> real_basis(Eigen::Index n) {
  std::vector<CMat> herm;
  for (Eigen::Index p = 0; p < n; ++p) {
    for (Eigen::Index q = p; q < n; ++q) {
      if (p == q) {
        herm.push_back(matrix_unit(n, n, p, p));
      } else {
        herm.push_back(matrix_unit(n, n, p, q) + matrix_unit(n, n, q, p));
        herm.push_back(cplx(0, 1) * (matrix_unit(n, n, p, q) - matrix_unit(n, n, q, p)));
      }
    }
  }
  std::vector<CMat> out = herm;
  for (const auto& H : herm) out.push_back(cplx(0, 1) * H);
  return out;
}

}  // namespace

CommutantDimension commutant_dimension(const LinearMap& map, Eigen::Index domain_dim,
                                       Eigen::Index codomain_dim, const ToleranceConfig& tol) {
  const Eigen::Index n = codomain_dim;
  std::vector<CMat> images;
  for (Eigen::Index i = 0; i < domain_dim; ++i) {
    for (Eigen::Index j = 0; j < domain_dim; ++j) {
      images.push_back(map(matrix_unit(domain_dim, domain_dim, i, j)));
    }
  }
  const auto m = static_cast<Eigen::Index>(images.size());

  // Complex route: vec(AX - XA) = (I (x) A - A^t (x) I) vec(X), column-major vec.
  const CMat I = CMat::Identity(n, n);
  CMat complex_system(m * n * n, n * n);
  for (Eigen::Index t = 0; t < m; ++t) {
    complex_system.middleRows(t * n * n, n * n) =
        kron(I, images[t]) - kron(CMat(images[t].transpose()), I);
  }

  // Real route: apply X -> [A, X] to a real basis and split real/imaginary parts.
  const auto basis = real_basis(n);
  Eigen::MatrixXd real_system(2 * m * n * n, static_cast<Eigen::Index>(basis.size()));
  for (std::size_t col = 0; col < basis.size(); ++col) {
    for (Eigen::Index t = 0; t < m; ++t) {
      const CMat comm = images[t] * basis[col] - basis[col] * images[t];
      const Eigen::Map<const CVec> v(comm.data(), n * n);
      const auto c = static_cast<Eigen::Index>(col);
      real_system.block(2 * t * n * n, c, n * n, 1) = v.real();
      real_system.block(2 * t * n * n + n * n, c, n * n, 1) = v.imag();
    }
  }

  CommutantDimension out;
  out.complex_dim = static_cast<int>(complex_system.cols()) - numeric_rank(complex_system, tol);
  out.real_dim = static_cast<int>(real_system.cols()) - numeric_rank(real_system, tol);
  return out;
}

int irreducibility_check(const MapParams& p, const ToleranceConfig& tol) {
  const auto dim =
      commutant_dimension([&p](const CMat& X) { return phi_apply(p, X); }, 2, 4, tol);
  if (!dim.consistent()) {
    throw StructuralError("complex and real commutant dimensions disagree");
  }
  return dim.complex_dim;
}

std::pair<int, int> spanning_check(const MapParams& p, const std::vector<SpherePoint>& samples,
                                   const ToleranceConfig& tol) {
  return {span_rank(z_vectors(p, samples), tol), span_rank(z_gamma_vectors(p, samples), tol)};
}

std::vector<SpherePoint> generic_samples(int n, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> radius(0.3, 3.0);
  std::uniform_real_distribution<double> angle(0.0, 2.0 * std::numbers::pi);
  std::vector<SpherePoint> out;
  while (static_cast<int>(out.size()) < n) {
    const cplx a = std::polar(radius(rng), angle(rng));
    const bool fresh = std::none_of(out.begin(), out.end(), [&](const SpherePoint& s) {
      return std::abs(s.value() - a) < 1e-3;
    });
    if (fresh) out.emplace_back(a);
  }
  return out;
}

VerificationReport indecomposability_evidence(const CMat& choi, const ToleranceConfig& tol) {
  VerificationReport rep;
  rep.claim = "Choi matrix and its partial transpose both have rank > 1";
  rep.tolerances = tol;
  const int rank = numeric_rank(choi, tol);
  const int rank_gamma = numeric_rank(partial_transpose(choi), tol);
  rep.details = {{"choi_rank", rank}, {"choi_gamma_rank", rank_gamma}};
  rep.samples_checked = 1;
  if (rank <= 1) rep.fail(nullptr, "Choi matrix has rank <= 1", rank);
  if (rank_gamma <= 1) rep.fail(nullptr, "partial transpose of Choi matrix has rank <= 1", rank_gamma);
  return rep;
}

VerificationReport indecomposability_evidence(const MapParams& p, const ToleranceConfig& tol) {
  VerificationReport rep = indecomposability_evidence(choi_matrix(p), tol);
  rep.params = params_to_json(p);
  return rep;
}

VerificationReport exposedness_report(const MapParams& p,
                                      const std::vector<SpherePoint>& span_samples,
                                      std::uint64_t seed, const ToleranceConfig& tol) {
  VerificationReport rep;
  rep.claim = "exposedness conditions (coefficient ranks, irreducibility, Phi(I), bi-spanning)";
  rep.params = params_to_json(p);
  rep.tolerances = tol;

  const int y_rank = y_coefficient_rank(p, tol);
  if (y_rank != 4) rep.fail(nullptr, "y coefficient rank " + std::to_string(y_rank), y_rank);

  VerificationReport dim = dim_condition_check(p, tol);
  rep.absorb(dim);
  const int sampled = sampled_tensor_rank(p, 40, seed, tol);
  const int symbolic = dim.details["tensor_coefficient_rank"].get<int>();
  if (sampled != symbolic) {
    rep.fail(nullptr, "sampled tensor rank " + std::to_string(sampled) +
                          " differs from coefficient rank " + std::to_string(symbolic),
             sampled);
  }

  const auto comm =
      commutant_dimension([&p](const CMat& X) { return phi_apply(p, X); }, 2, 4, tol);
  if (comm.complex_dim != 1 || !comm.consistent()) {
    rep.fail(nullptr, "commutant dimension " + std::to_string(comm.complex_dim) + " (real " +
                          std::to_string(comm.real_dim) + ")",
             comm.complex_dim);
  }

  const int id_rank = numeric_rank(phi_apply(p, CMat::Identity(2, 2)), tol);
  if (id_rank != 4) rep.fail(nullptr, "rank Phi(I) = " + std::to_string(id_rank), id_rank);

  const auto [span_z, span_zg] = spanning_check(p, span_samples, tol);
  if (span_z != 8) rep.fail(nullptr, "spanning rank " + std::to_string(span_z), span_z);
  if (span_zg != 8) rep.fail(nullptr, "partial-conjugate spanning rank " + std::to_string(span_zg), span_zg);

  rep.details = {{"y_coefficient_rank", y_rank},
                 {"tensor_coefficient_rank", symbolic},
                 {"sampled_tensor_rank", sampled},
                 {"monomials", dim.details["monomials"]},
                 {"commutant_dim", comm.complex_dim},
                 {"commutant_real_dim", comm.real_dim},
                 {"phi_identity_rank", id_rank},
                 {"spanning_rank", span_z},
                 {"spanning_rank_gamma", span_zg}};
  rep.samples_checked = 1;
  return rep;
}

}  // namespace phimap
