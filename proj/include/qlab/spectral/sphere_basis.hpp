#pragma once

#include "qlab/spectral/basis.hpp"

namespace qlab::spectral {

// Real spherical harmonics Y_lm on the unit S^2, l <= l_max, indexed by
// j = l^2 + l + m. Points are unit 3-vectors (the embedded sphere model).
// Y_l0 is the zonal harmonic about the north pole (0, 0, 1).
class SphereBasis final : public SpectralBasis, public ZonalBasis {
 public:
  explicit SphereBasis(int l_max);

  int l_max() const { return l_max_; }
  static std::size_t index(int l, int m) { return static_cast<std::size_t>(l * l + l + m); }
  static int degree(std::size_t j);

  int dim() const override { return 2; }
  std::string provenance() const override;
  double volume() const override { return 4.0 * kPi; }
  cplx evaluate(std::size_t j, const Vec& x) const override;
  // Whole clusters use the addition theorem, sum_m |Y_lm|^2 = (2l+1)/(4pi).
  double density(std::size_t first, std::size_t last, const Vec& x) const override;
  cplx evaluate_sum(const CoefficientVector& f, const Vec& x) const override;
  SampleGrid sample_grid(double lambda) const override;
  std::vector<Vec> neighbourhood(const Vec& x, double h, int radius) const override;

  std::vector<std::size_t> zonal_indices() const override;
  double zonal_value(std::size_t j, double s) const override;
  double meridian_length() const override { return kPi; }
  double profile(double s) const override;
  std::vector<double> zonal_coefficients(const std::function<double(double)>& u) const override;
  double zonal_mass(const std::function<double(double)>& u) const override;

  // Normalized associated Legendre values p[l][m] at cos(theta) = t for
  // l <= lmax, so that Y_l0 = p[l][0] and Y_l,+-m = sqrt(2) p[l][m] cos/sin.
  static std::vector<std::vector<double>> legendre_table(int lmax, double t);

 private:
  int l_max_;
};

}  // namespace qlab::spectral
