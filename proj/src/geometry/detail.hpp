#pragma once

#include "qlab/geometry/manifold.hpp"

namespace qlab::geometry::detail {

// Orthonormal basis of the orthogonal complement of unit normal nu, by
// Gram-Schmidt on projected ambient basis vectors in index order.
Mat tangent_frame(const Vec& nu);

// Christoffel symbols of a diagonal metric from g_ii and dg(m, i) = d_m g_ii.
Christoffel diagonal_christoffel(const Vec& g, const Mat& dg);

inline Vec head(std::span<const double> y, int n) {
  return Eigen::Map<const Vec>(y.data(), n);
}
inline Vec tail(std::span<const double> y, int n) {
  return Eigen::Map<const Vec>(y.data() + n, n);
}

}  // namespace qlab::geometry::detail
