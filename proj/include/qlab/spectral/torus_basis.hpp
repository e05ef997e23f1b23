#pragma once

#include <vector>

#include "qlab/spectral/basis.hpp"

namespace qlab::spectral {

// Exponentials e^{i k.x} / sqrt(covolume) on R^n / (A Z^n), with k = 2 pi A^{-T} m
// for integer m and |k| <= lambda_max. Points are chart coordinates in R^n.
class TorusBasis final : public SpectralBasis {
 public:
  TorusBasis(Mat lattice, double lambda_max);
  static TorusBasis square(double side, double lambda_max);

  int dim() const override { return n_; }
  std::string provenance() const override;
  double volume() const override { return covol_; }
  const Mat& lattice() const { return A_; }
  // Integer label m_j and wave vector k_j.
  std::vector<int> label(std::size_t j) const;
  Vec wavevector(std::size_t j) const;

  cplx evaluate(std::size_t j, const Vec& x) const override;
  double density(std::size_t first, std::size_t last, const Vec& x) const override;
  cplx evaluate_sum(const CoefficientVector& f, const Vec& x) const override;
  SampleGrid sample_grid(double lambda) const override;
  std::vector<Vec> neighbourhood(const Vec& x, double h, int radius) const override;
  // n = 2 uses the FFT strip kernel; other dimensions use the generic grid pass.
  SupResult sup(const CoefficientVector& f, Execution exec) const override;

  // Grid size per axis resolving frequencies up to lambda (>= 10 points per
  // wavelength), rounded up to a 2-3-5-7 smooth FFT length.
  std::vector<int> grid_shape(double lambda, const CoefficientVector& f) const;
  // max |f| on the N1 x N2 grid u = (i1/N1, i2/N2), x = A u (n = 2 only).
  // Row FFTs followed by per-column FFTs with a running maximum; the column
  // stage is the parallel kernel.
  SupResult strip_sup(const CoefficientVector& f, int n1, int n2, Execution exec) const;
  // Same grid evaluated term by term; reference for small sizes.
  SupResult direct_sup(const CoefficientVector& f, int n1, int n2, Execution exec) const;

 private:
  int n_;
  Mat A_, Ainv_t_;
  double covol_;
  std::vector<int> labels_;  // n_ entries per basis function
};

}  // namespace qlab::spectral
