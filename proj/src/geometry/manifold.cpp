#include "qlab/geometry/manifold.hpp"

#include "detail.hpp"
#include "qlab/common/errors.hpp"

namespace qlab::geometry {

const char* to_string(ModelKind k) {
  switch (k) {
    case ModelKind::RoundSphere: return "sphere";
    case ModelKind::FlatTorus: return "torus";
    case ModelKind::SurfaceOfRevolution: return "sor";
    case ModelKind::TriaxialEllipsoid: return "ellipsoid";
  }
  return "unknown";
}

TangentVector::TangentVector(Vec base, Vec components)
    : base_(std::move(base)), components_(std::move(components)), norm_(components_.norm()) {}

namespace detail {

Mat tangent_frame(const Vec& nu) {
  const int N = static_cast<int>(nu.size());
  Mat F(N, N - 1);
  int found = 0;
  for (double threshold : {1e-3, 0.0}) {
    found = 0;
    for (int i = 0; i < N && found < N - 1; ++i) {
      Vec e = Vec::Zero(N);
      e(i) = 1.0;
      Vec r = e - nu.dot(e) * nu;
      for (int k = 0; k < found; ++k) r -= F.col(k).dot(r) * F.col(k);
      // Second pass for numerical orthogonality.
      r -= nu.dot(r) * nu;
      for (int k = 0; k < found; ++k) r -= F.col(k).dot(r) * F.col(k);
      const double len = r.norm();
      if (len > threshold && len > 1e-12) F.col(found++) = r / len;
    }
    if (found == N - 1) return F;
  }
  throw NumericalError("tangent_frame: could not build a frame");
}

Christoffel diagonal_christoffel(const Vec& g, const Mat& dg) {
  const int n = static_cast<int>(g.size());
  Christoffel G(n);
  for (int k = 0; k < n; ++k)
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) {
        double v = 0.0;
        if (k == j) v += dg(i, k);
        if (k == i) v += dg(j, k);
        if (i == j) v -= dg(k, i);
        G(k, i, j) = 0.5 * v / g(k);
      }
  return G;
}

}  // namespace detail
}  // namespace qlab::geometry
