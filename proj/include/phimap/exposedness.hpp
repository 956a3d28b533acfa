#ifndef PHIMAP_EXPOSEDNESS_HPP
#define PHIMAP_EXPOSEDNESS_HPP

// Numeric evidence for exposedness and indecomposability of Phi: coefficient
// matrix ranks over the monomials alpha^k conj(alpha)^l, the commutant of the
// image, nonsingularity of Phi(I), (bi-)spanning, and Choi-matrix ranks.

#include <array>
#include <compare>
#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "phimap/map.hpp"
#include "phimap/report.hpp"

namespace phimap {

class StructuralError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// alpha^k conj(alpha)^l.
struct Monomial {
  int k = 0;
  int l = 0;

  int degree() const { return k + l; }
  std::string to_string() const;

  bool operator==(const Monomial&) const = default;
};

/// Graded order: total degree first, then descending power of alpha
/// (1, a, a*, a^2, a a*, a*^2, a^3, ...).
struct GradedOrder {
  bool operator()(const Monomial& x, const Monomial& y) const {
    if (x.degree() != y.degree()) return x.degree() < y.degree();
    return x.k > y.k;
  }
};

class MonomialPoly {
 public:
  using Terms = std::map<Monomial, cplx, GradedOrder>;

  MonomialPoly() = default;
  MonomialPoly(std::initializer_list<std::pair<Monomial, cplx>> terms);

  /// Adds coef * m; entries that cancel to zero are erased.
  void add(const Monomial& m, cplx coef);

  MonomialPoly operator*(const MonomialPoly& other) const;
  cplx evaluate(cplx alpha) const;

  cplx coefficient(const Monomial& m) const;
  const Terms& terms() const { return terms_; }

 private:
  Terms terms_;
};

struct CoefficientMatrix {
  std::vector<Monomial> monomials;  // one column each
  CMat matrix;                      // one row per vector component
};

/// One column per monomial in the union of supports, graded order.
CoefficientMatrix coefficient_matrix(const std::vector<MonomialPoly>& rows);

/// Components of y_alpha as polynomials in alpha, conj(alpha).
std::array<MonomialPoly, 4> y_poly(const MapParams& p);

/// Entries of P_alpha flattened as (1, alpha, conj(alpha), |alpha|^2).
std::array<MonomialPoly, 4> p_alpha_poly();

/// The twelve monomials carrying P_alpha (x) y_alpha.
std::vector<Monomial> tensor_monomials();

CoefficientMatrix y_coefficient_matrix(const MapParams& p);
int y_coefficient_rank(const MapParams& p, const ToleranceConfig& tol = {});

/// 16-row coefficient matrix of P_alpha (x) y_alpha. Throws StructuralError if its
/// monomial support differs from tensor_monomials().
CoefficientMatrix tensor_coefficient_matrix(const MapParams& p);
int tensor_coefficient_rank(const MapParams& p, const ToleranceConfig& tol = {});

/// Rank of the stacked vectors P_alpha (x) y_alpha over n seeded sample points.
int sampled_tensor_rank(const MapParams& p, int n_samples, std::uint64_t seed,
                        const ToleranceConfig& tol = {});

/// dim span{a (x) h : Phi(a) h = 0} = 4 * (2^2 - 1) = 12, realized by P_alpha (x) y_alpha.
VerificationReport dim_condition_check(const MapParams& p, const ToleranceConfig& tol = {});

struct CommutantDimension {
  int complex_dim = 0;          // nullity of the complex 64x16 system
  int real_dim = 0;             // nullity of the real 128x32 system
  int halved() const { return real_dim / 2; }
  bool consistent() const { return real_dim == 2 * complex_dim; }
};

/// Dimension of {X in M_n : [map(e_ij), X] = 0 for all i, j}, computed over C and over R.
CommutantDimension commutant_dimension(const LinearMap& map, Eigen::Index domain_dim,
                                       Eigen::Index codomain_dim, const ToleranceConfig& tol = {});

/// Commutant dimension of Phi; 1 means Phi is irreducible.
int irreducibility_check(const MapParams& p, const ToleranceConfig& tol = {});

/// (rank of stacked z_alpha, rank of stacked z_alpha^Gamma) over the samples.
std::pair<int, int> spanning_check(const MapParams& p, const std::vector<SpherePoint>& samples,
                                   const ToleranceConfig& tol = {});

/// n distinct seeded points in the annulus 0.3 <= |alpha| <= 3.
std::vector<SpherePoint> generic_samples(int n, std::uint64_t seed);

/// Passes iff rank(C) > 1 and rank(C^Gamma) > 1 (a decomposable exposed map would have one
/// of them of rank one). Evidence, not a proof.
VerificationReport indecomposability_evidence(const CMat& choi, const ToleranceConfig& tol = {});
VerificationReport indecomposability_evidence(const MapParams& p, const ToleranceConfig& tol = {});

/// All exposedness conditions at once: y rank 4, tensor rank 12 (both routes), commutant 1,
/// rank Phi(I) = 4, bi-spanning over `span_samples`.
VerificationReport exposedness_report(const MapParams& p, const std::vector<SpherePoint>& span_samples,
                                      std::uint64_t seed, const ToleranceConfig& tol = {});

}  // namespace phimap

#endif  // PHIMAP_EXPOSEDNESS_HPP
