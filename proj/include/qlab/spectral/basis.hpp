#pragma once

#include <cstddef>
#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "qlab/common/execution.hpp"
#include "qlab/common/types.hpp"

namespace qlab::spectral {

class SpectralBasis;

// Indexed point set generated on demand; wavelength-resolved grids get large.
struct SampleGrid {
  std::size_t size = 0;
  std::function<Vec(std::size_t)> point;
  // Typical spacing, used to size the local refinement pass.
  double spacing = 0.0;

  static SampleGrid from_points(std::vector<Vec> pts, double spacing);
};

struct SupResult {
  double value = 0.0;
  Vec argmax;
  std::size_t points = 0;
};

// Coefficients of f = sum_j c_j e_j, one entry per basis function.
struct CoefficientVector {
  std::vector<cplx> c;

  CoefficientVector() = default;
  explicit CoefficientVector(std::size_t n) : c(n, cplx(0.0, 0.0)) {}
  std::size_t size() const { return c.size(); }
  double l2_norm() const;
  // Largest index with a nonzero coefficient plus one.
  std::size_t support_end() const;
};

// Group of equal eigenvalues [first, first + count).
struct Cluster {
  std::size_t first = 0;
  std::size_t count = 0;
  double lambda = 0.0;
};

// Orthonormal Laplace eigenbasis with eigenvalues in frequency units
// (lambda_j = sqrt of the Laplace eigenvalue), sorted nondecreasing.
class SpectralBasis {
 public:
  virtual ~SpectralBasis() = default;

  virtual int dim() const = 0;
  virtual std::string provenance() const = 0;
  virtual double volume() const = 0;
  virtual cplx evaluate(std::size_t j, const Vec& x) const = 0;
  // sum_{first <= j < last} |e_j(x)|^2.
  virtual double density(std::size_t first, std::size_t last, const Vec& x) const;
  virtual cplx evaluate_sum(const CoefficientVector& f, const Vec& x) const;
  // Grid resolving frequencies up to lambda with >= 10 points per wavelength.
  virtual SampleGrid sample_grid(double lambda) const = 0;
  // Points around x at spacing h, `radius` steps each way.
  virtual std::vector<Vec> neighbourhood(const Vec& x, double h, int radius) const = 0;
  // Grid supremum of |f| on sample_grid of the top of its spectrum, then one
  // local refinement pass around the argmax.
  virtual SupResult sup(const CoefficientVector& f, Execution exec) const;

  std::size_t size() const { return lambda_.size(); }
  double eigenvalue(std::size_t j) const { return lambda_[j]; }
  const std::vector<double>& eigenvalues() const { return lambda_; }
  double max_eigenvalue() const { return lambda_.empty() ? 0.0 : lambda_.back(); }
  // First index with lambda_j >= v (lower) or > v (upper).
  std::size_t lower_index(double v) const;
  std::size_t upper_index(double v) const;
  std::vector<Cluster> clusters(double tol = 1e-9) const;

 protected:
  std::vector<double> lambda_;
};

// Window on the spectrum: the interval (lo, hi) with chosen closedness.
struct WindowSpec {
  enum class Kind { Sharp, Symmetric, LowPass, HighPass, UnitBand, Interval };
  Kind kind = Kind::Interval;
  double lo = 0.0, hi = 0.0;
  bool lo_closed = true, hi_closed = true;

  static WindowSpec sharp(double lambda, double delta);      // [lambda, lambda + delta]
  static WindowSpec symmetric(double lambda, double delta);  // [lambda - delta, lambda + delta]
  static WindowSpec low_pass(double mu);                     // [0, mu)
  static WindowSpec high_pass(double mu);                    // [mu, inf)
  static WindowSpec unit_band(double j);                     // [j, j + 1)
  static WindowSpec interval(double lo, double hi, bool lo_closed, bool hi_closed);

  bool contains(double lambda) const;
  // Index range [first, last) of eigenvalues inside the window.
  std::pair<std::size_t, std::size_t> index_range(const SpectralBasis& b) const;
};

CoefficientVector apply_window(const SpectralBasis& b, const WindowSpec& w, const CoefficientVector& f);
// Coefficients of (Delta + lambda^2) f, i.e. (lambda^2 - lambda_j^2) c_j.
CoefficientVector helmholtz(const SpectralBasis& b, const CoefficientVector& f, double lambda);
double helmholtz_norm(const SpectralBasis& b, const CoefficientVector& f, double lambda);

SupResult sup_norm(const SpectralBasis& b, const CoefficientVector& f, Execution exec = Execution::Parallel);

// Functions with a zonal part: basis functions invariant under rotation
// about a pole, evaluated as functions of the distance s from that pole.
class ZonalBasis {
 public:
  virtual ~ZonalBasis() = default;
  virtual std::vector<std::size_t> zonal_indices() const = 0;
  virtual double zonal_value(std::size_t j, double s) const = 0;
  // Length of the meridian and the profile f(s) of the metric ds^2 + f^2 dtheta^2.
  virtual double meridian_length() const = 0;
  virtual double profile(double s) const = 0;
  // Coefficients <u, e_j> of the rotation-invariant function u(s), in the
  // order of zonal_indices(), and its squared L^2 norm, both under the
  // basis' own quadrature.
  virtual std::vector<double> zonal_coefficients(const std::function<double(double)>& u) const = 0;
  virtual double zonal_mass(const std::function<double(double)>& u) const = 0;
};

// sup_s |e_j(s)| of a zonal basis function over the meridian: >= 10 points
// per wavelength plus one refinement pass, as for the grid suprema. The
// argmax holds the distance s from the pole.
SupResult zonal_sup(const SpectralBasis& basis, std::size_t j, Execution exec = Execution::Parallel);

}  // namespace qlab::spectral
