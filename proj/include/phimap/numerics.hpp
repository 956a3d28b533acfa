#ifndef PHIMAP_NUMERICS_HPP
#define PHIMAP_NUMERICS_HPP

// Small dense complex linear algebra with an explicit tolerance policy.
//
// Everything here is a free function templated on the Eigen expression type,
// so it works for any real scalar (double, long double, ...) wrapped in
// std::complex. The rest of the library instantiates it with double.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace phimap {

template <typename Real>
using CMatrix = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, Eigen::Dynamic>;
template <typename Real>
using CVector = Eigen::Matrix<std::complex<Real>, Eigen::Dynamic, 1>;

using cplx = std::complex<double>;
using CMat = CMatrix<double>;
using CVec = CVector<double>;

class DimensionError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

class ContractError : public std::invalid_argument {
 public:
  using std::invalid_argument::invalid_argument;
};

/// Thresholds used by every rank, positivity and residual decision.
struct ToleranceConfig {
  double rank_rel_tol = 1e-10;
  double psd_tol = 1e-10;
  double residual_tol = 1e-9;
  double hermitian_tol = 1e-12;

  void validate() const {
    for (double t : {rank_rel_tol, psd_tol, residual_tol, hermitian_tol}) {
      if (!(t > 0.0 && t < 1.0)) {
        throw std::invalid_argument("tolerances must lie in (0, 1)");
      }
    }
  }

  bool operator==(const ToleranceConfig&) const = default;
};

namespace detail {

template <typename Derived>
using PlainOf = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Derived>
using RealOf = typename Eigen::NumTraits<typename Derived::Scalar>::Real;

}  // namespace detail

/// Kronecker product. Row index of the result is i*rows(B) + k, column j*cols(B) + l.
template <typename DerivedA, typename DerivedB>
detail::PlainOf<DerivedA> kron(const Eigen::MatrixBase<DerivedA>& A,
                               const Eigen::MatrixBase<DerivedB>& B) {
  static_assert(std::is_same_v<typename DerivedA::Scalar, typename DerivedB::Scalar>,
                "kron requires matching scalar types");
  detail::PlainOf<DerivedA> out(A.rows() * B.rows(), A.cols() * B.cols());
  for (Eigen::Index i = 0; i < A.rows(); ++i) {
    for (Eigen::Index j = 0; j < A.cols(); ++j) {
      out.block(i * B.rows(), j * B.cols(), B.rows(), B.cols()) = A(i, j) * B;
    }
  }
  return out;
}

/// Transpose on the first tensor factor of M in M_m (x) M_n:
/// (M^G)[(i,k),(j,l)] = M[(j,k),(i,l)].
template <typename Derived>
detail::PlainOf<Derived> partial_transpose(const Eigen::MatrixBase<Derived>& M,
                                           Eigen::Index dim_first = 2,
                                           Eigen::Index dim_second = 4) {
  const Eigen::Index n = dim_first * dim_second;
  if (M.rows() != n || M.cols() != n) {
    throw DimensionError("partial_transpose expects a " + std::to_string(n) + "x" +
                         std::to_string(n) + " matrix");
  }
  detail::PlainOf<Derived> out(n, n);
  for (Eigen::Index i = 0; i < dim_first; ++i) {
    for (Eigen::Index j = 0; j < dim_first; ++j) {
      out.block(i * dim_second, j * dim_second, dim_second, dim_second) =
          M.block(j * dim_second, i * dim_second, dim_second, dim_second);
    }
  }
  return out;
}

/// Singular values, descending.
template <typename Derived>
Eigen::Matrix<detail::RealOf<Derived>, Eigen::Dynamic, 1> singular_values(
    const Eigen::MatrixBase<Derived>& M) {
  if (M.size() == 0) return {};
  Eigen::JacobiSVD<detail::PlainOf<Derived>> svd(M.eval());
  return svd.singularValues();
}

template <typename Real>
Real rank_threshold(Real sigma_max, Eigen::Index rows, Eigen::Index cols,
                    const ToleranceConfig& tol) {
  return static_cast<Real>(tol.rank_rel_tol) * sigma_max *
         static_cast<Real>(std::max(rows, cols));
}

/// Number of singular values above rank_rel_tol * sigma_max * max(rows, cols).
template <typename Derived>
int numeric_rank(const Eigen::MatrixBase<Derived>& M, const ToleranceConfig& tol = {}) {
  const auto sv = singular_values(M);
  if (sv.size() == 0 || sv(0) == 0) return 0;
  const auto cut = rank_threshold(sv(0), M.rows(), M.cols(), tol);
  int rank = 0;
  for (Eigen::Index i = 0; i < sv.size(); ++i) {
    if (sv(i) > cut) ++rank;
  }
  return rank;
}

/// Orthonormal basis of the numerical kernel (right singular vectors below the
/// rank threshold). The zero matrix has the whole space as kernel.
template <typename Derived>
std::vector<Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>> nullspace(
    const Eigen::MatrixBase<Derived>& M, const ToleranceConfig& tol = {}) {
  using Vec = Eigen::Matrix<typename Derived::Scalar, Eigen::Dynamic, 1>;
  std::vector<Vec> out;
  if (M.cols() == 0) return out;
  Eigen::JacobiSVD<detail::PlainOf<Derived>> svd(M.eval(), Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  if (sv.size() > 0 && sv(0) > 0) {
    const auto cut = rank_threshold(sv(0), M.rows(), M.cols(), tol);
    for (Eigen::Index i = 0; i < sv.size(); ++i) {
      if (sv(i) > cut) ++rank;
    }
  }
  for (Eigen::Index c = rank; c < M.cols(); ++c) out.push_back(svd.matrixV().col(c));
  return out;
}

/// max |M - M^dagger|, the absolute Hermiticity defect.
template <typename Derived>
detail::RealOf<Derived> hermitian_defect(const Eigen::MatrixBase<Derived>& M) {
  if (M.rows() != M.cols()) throw DimensionError("hermitian_defect expects a square matrix");
  if (M.size() == 0) return 0;
  return (M - M.adjoint()).cwiseAbs().maxCoeff();
}

template <typename Derived>
bool is_hermitian(const Eigen::MatrixBase<Derived>& M, const ToleranceConfig& tol = {}) {
  if (M.rows() != M.cols()) return false;
  if (M.size() == 0) return true;
  const auto scale = M.cwiseAbs().maxCoeff();
  return hermitian_defect(M) <= static_cast<detail::RealOf<Derived>>(tol.hermitian_tol) * scale;
}

/// Eigenvalues (ascending) of a matrix that must be Hermitian within hermitian_tol.
template <typename Derived>
Eigen::Matrix<detail::RealOf<Derived>, Eigen::Dynamic, 1> hermitian_eigenvalues(
    const Eigen::MatrixBase<Derived>& M, const ToleranceConfig& tol = {}) {
  if (!is_hermitian(M, tol)) throw ContractError("matrix is not Hermitian within tolerance");
  if (M.size() == 0) return {};
  // Symmetrize so round-off in the strict upper triangle cannot leak in.
  const detail::PlainOf<Derived> H = (M + M.adjoint()) / 2;
  Eigen::SelfAdjointEigenSolver<detail::PlainOf<Derived>> es(H, Eigen::EigenvaluesOnly);
  return es.eigenvalues();
}

/// min eigenvalue >= -psd_tol * max(1, max eigenvalue).
template <typename Derived>
bool is_psd(const Eigen::MatrixBase<Derived>& M, const ToleranceConfig& tol = {}) {
  const auto ev = hermitian_eigenvalues(M, tol);
  if (ev.size() == 0) return true;
  using Real = detail::RealOf<Derived>;
  const Real scale = std::max(Real(1), ev(ev.size() - 1));
  return ev(0) >= -static_cast<Real>(tol.psd_tol) * scale;
}

template <typename Derived>
typename Derived::Scalar det(const Eigen::MatrixBase<Derived>& M) {
  if (M.rows() != M.cols()) throw DimensionError("det expects a square matrix");
  if (M.size() == 0) return typename Derived::Scalar(1);
  return Eigen::PartialPivLU<detail::PlainOf<Derived>>(M.eval()).determinant();
}

/// Stacks vectors as rows of a matrix. When normalize is set, each row is
/// scaled to unit norm first (zero rows are left as they are).
template <typename Real>
CMatrix<Real> stack_rows(const std::vector<CVector<Real>>& vectors, bool normalize = false) {
  if (vectors.empty()) return CMatrix<Real>(0, 0);
  const Eigen::Index dim = vectors.front().size();
  CMatrix<Real> out(static_cast<Eigen::Index>(vectors.size()), dim);
  for (std::size_t i = 0; i < vectors.size(); ++i) {
    if (vectors[i].size() != dim) throw DimensionError("stack_rows: mismatched vector sizes");
    const Real n = vectors[i].norm();
    out.row(static_cast<Eigen::Index>(i)) =
        (normalize && n > 0) ? (vectors[i] / n).transpose().eval() : vectors[i].transpose().eval();
  }
  return out;
}

/// Dimension of the span of the given vectors (normalized before stacking).
template <typename Real>
int span_rank(const std::vector<CVector<Real>>& vectors, const ToleranceConfig& tol = {}) {
  if (vectors.empty()) return 0;
  return numeric_rank(stack_rows(vectors, true), tol);
}

/// Orthonormal basis (as columns) of span(vectors), via SVD of the stacked rows.
template <typename Real>
CMatrix<Real> span_basis(const std::vector<CVector<Real>>& vectors, const ToleranceConfig& tol = {}) {
  if (vectors.empty()) return CMatrix<Real>(0, 0);
  const CMatrix<Real> rows = stack_rows(vectors, true);
  Eigen::JacobiSVD<CMatrix<Real>> svd(rows, Eigen::ComputeFullV);
  const int r = numeric_rank(rows, tol);
  // Row space of `rows` is spanned by the conjugates of the leading right singular vectors.
  return svd.matrixV().leftCols(r).conjugate();
}

/// ||v - P v|| / ||v|| where P projects onto span(vectors).
template <typename Real>
Real projection_residual(const CVector<Real>& v, const std::vector<CVector<Real>>& vectors,
                         const ToleranceConfig& tol = {}) {
  const Real n = v.norm();
  if (n == 0) return 0;
  if (vectors.empty()) return 1;
  const CMatrix<Real> B = span_basis(vectors, tol);
  const CVector<Real> proj = B * (B.adjoint() * v);
  return (v - proj).norm() / n;
}

/// |<a|b>| / (||a|| ||b||); zero when either vector vanishes.
template <typename Real>
Real normalized_overlap(const CVector<Real>& a, const CVector<Real>& b) {
  const Real na = a.norm();
  const Real nb = b.norm();
  if (na == 0 || nb == 0) return 0;
  return std::abs(a.dot(b)) / (na * nb);
}

}  // namespace phimap

#endif  // PHIMAP_NUMERICS_HPP
