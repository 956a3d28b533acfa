#include "phimap/map.hpp"

#include <cmath>
#include <sstream>

namespace phimap {

double params_residual(const MapParams& p) {
  const double denom = p.a * p.b - 1.0;
  auto rel = [](double lhs, double rhs) {
    const double scale = std::max({1.0, std::abs(lhs), std::abs(rhs)});
    return std::abs(lhs - rhs) / scale;
  };
  return std::max({rel(denom * p.e, p.a * (p.c + p.d) * p.c),
                   rel(denom * p.f, p.a * (p.c + p.d) * p.d),
                   rel(p.g * p.g, p.a * p.c * p.d),
                   rel(p.h, p.b * p.e - p.c * p.c),
                   rel(p.k, p.b * p.f - p.d * p.d)});
}

nlohmann::json params_to_json(const MapParams& p) {
  return nlohmann::json{{"a", p.a}, {"b", p.b}, {"c", p.c}, {"d", p.d}, {"e", p.e},
                        {"f", p.f}, {"g", p.g}, {"h", p.h}, {"k", p.k}};
}

MapParams params_from_json(const nlohmann::json& j, double max_residual) {
  for (const char* key : {"a", "b", "c", "d"}) {
    if (!j.contains(key) || !j.at(key).is_number()) {
      throw ParameterDomainError(std::string("missing numeric field '") + key + "'");
    }
  }
  MapParams p = derive_params(j.at("a").get<double>(), j.at("b").get<double>(),
                              j.at("c").get<double>(), j.at("d").get<double>());
  bool any_derived = false;
  for (auto [key, slot] : {std::pair{"e", &p.e}, std::pair{"f", &p.f}, std::pair{"g", &p.g},
                           std::pair{"h", &p.h}, std::pair{"k", &p.k}}) {
    if (j.contains(key)) {
      *slot = j.at(key).get<double>();
      any_derived = true;
    }
  }
  if (any_derived) {
    if (!(p.g > 0)) throw ParameterDomainError("g must be positive");
    const double res = params_residual(p);
    if (!(res <= max_residual)) {
      throw ParameterDomainError("derived constants violate the defining relations (residual " +
                                 std::to_string(res) + ")");
    }
  }
  return p;
}

std::string SpherePoint::to_string() const {
  if (is_infinity()) return "inf";
  std::ostringstream os;
  os.precision(17);
  os << value_->real() << (value_->imag() < 0 ? "-" : "+") << std::abs(value_->imag()) << "i";
  return os.str();
}

nlohmann::json sphere_point_to_json(const SpherePoint& p) {
  if (p.is_infinity()) return "inf";
  return nlohmann::json::array({p.value().real(), p.value().imag()});
}

SpherePoint sphere_point_from_json(const nlohmann::json& j) {
  if (j.is_string()) {
    if (j.get<std::string>() == "inf") return SpherePoint::infinity();
    throw std::invalid_argument("sphere point string must be \"inf\"");
  }
  if (j.is_array() && j.size() == 2) return SpherePoint(cplx(j[0].get<double>(), j[1].get<double>()));
  if (j.is_number()) return SpherePoint(j.get<double>());
  throw std::invalid_argument("sphere point must be [re, im], a number, or \"inf\"");
}

CMat matrix_unit(Eigen::Index rows, Eigen::Index cols, Eigen::Index i, Eigen::Index j) {
  CMat e = CMat::Zero(rows, cols);
  e(i, j) = 1.0;
  return e;
}

CMat choi_matrix(const LinearMap& map, Eigen::Index domain_dim) {
  CMat out;
  for (Eigen::Index i = 0; i < domain_dim; ++i) {
    for (Eigen::Index j = 0; j < domain_dim; ++j) {
      const CMat block = map(matrix_unit(domain_dim, domain_dim, i, j));
      if (out.size() == 0) out = CMat::Zero(domain_dim * block.rows(), domain_dim * block.cols());
      out.block(i * block.rows(), j * block.cols(), block.rows(), block.cols()) = block;
    }
  }
  return out;
}

CMat choi_matrix(const MapParams& p) {
  return choi_matrix([&p](const CMat& X) { return phi_apply(p, X); }, 2);
}

double pairing(const CMat& rho, const MapParams& p, const ToleranceConfig& tol) {
  if (rho.rows() != 8 || rho.cols() != 8) throw DimensionError("pairing expects an 8x8 state");
  if (!is_hermitian(rho, tol)) throw ContractError("pairing: state is not Hermitian");
  const CMat C = choi_matrix(p);
  const cplx value = (rho * C.transpose()).trace();
  if (std::abs(value.imag()) > tol.residual_tol * std::max(1.0, std::abs(value.real()))) {
    throw ContractError("pairing: trace has a non-negligible imaginary part");
  }
  return value.real();
}

CMat p_alpha(const SpherePoint& alpha) {
  if (alpha.is_infinity()) return matrix_unit(2, 2, 1, 1);
  const cplx a = alpha.value();
  CMat P(2, 2);
  P << 1.0, std::conj(a), a, std::norm(a);
  return P;
}

CVec x_alpha(const SpherePoint& alpha) {
  CVec x(2);
  if (alpha.is_infinity()) {
    x << 0.0, 1.0;
  } else {
    x << 1.0, std::conj(alpha.value());
  }
  return x;
}

}  // namespace phimap
