#ifndef PHIMAP_PRODUCT_VECTOR_HPP
#define PHIMAP_PRODUCT_VECTOR_HPP

#include <vector>

#include "phimap/map.hpp"
#include "phimap/positivity.hpp"

namespace phimap {

/// z = x (x) y together with the sphere point it came from.
struct ProductVector {
  CVec x;
  CVec y;
  SpherePoint alpha;

  CVec z() const { return kron(x, y); }

  /// Partial conjugate conj(x) (x) y.
  CVec z_gamma() const { return kron(CVec(x.conjugate()), y); }
};

/// (x_alpha, y_alpha): the product vector whose pure state pairs to zero with Phi.
inline ProductVector product_vector(const MapParams& p, const SpherePoint& alpha) {
  return {x_alpha(alpha), kernel_vector(p, alpha), alpha};
}

inline std::vector<CVec> z_vectors(const MapParams& p, const std::vector<SpherePoint>& points) {
  std::vector<CVec> out;
  out.reserve(points.size());
  for (const auto& a : points) out.push_back(product_vector(p, a).z());
  return out;
}

inline std::vector<CVec> z_gamma_vectors(const MapParams& p,
                                         const std::vector<SpherePoint>& points) {
  std::vector<CVec> out;
  out.reserve(points.size());
  for (const auto& a : points) out.push_back(product_vector(p, a).z_gamma());
  return out;
}

}  // namespace phimap

#endif  // PHIMAP_PRODUCT_VECTOR_HPP
