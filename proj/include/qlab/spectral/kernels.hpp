#pragma once

#include <vector>

#include "qlab/spectral/basis.hpp"

namespace qlab::spectral {

// rho = (phi * phi) / phi_hat(0)^2 with phi(t) = mollifier(4t), so rho is
// even, supported in [-1/2, 1/2] and rho_hat = (phi_hat / phi_hat(0))^2 >= 0
// with rho_hat(0) = 1. rho_hat is tabulated up to tau_cut, beyond which
// rho_hat^2 < 1e-12, and treated as zero there.
class SmoothingKernel {
 public:
  static const SmoothingKernel& standard();

  double rho_hat(double tau) const;
  double rho(double t) const;
  double tau_cut() const { return tau_cut_; }
  // (rho_hat(T (lambda - lambda_j)))^2
  double weight(double T, double lambda, double lambda_j) const {
    const double r = rho_hat(T * (lambda - lambda_j));
    return r * r;
  }

 private:
  SmoothingKernel();
  double phi_hat(double tau) const;
  double phi_hat_derivative(double tau) const;
  double step_ = 0.05;
  double tau_cut_ = 0.0;
  double norm_ = 1.0;  // phi_hat(0)
  std::vector<double> value_, slope_;
};

// Smooth cutoff on S^{n-1}: b(xi) = 1 within angle `inner` of `center`,
// 0 beyond `outer`, with B = 1 - b.
class DirectionCutoff {
 public:
  DirectionCutoff(Vec center, double inner, double outer);
  // Cap whose measure int b dxi equals `measure`, plateau to total radius
  // ratio 2:3 (n = 2, 3).
  static DirectionCutoff with_measure(const Vec& center, double measure);

  int dim() const { return static_cast<int>(center_.size()); }
  double value(const Vec& xi) const;
  double complement(const Vec& xi) const { return 1.0 - value(xi); }
  // int_{S^{n-1}} b, by quadrature in the angle from the centre.
  double measure() const;
  double inner() const { return inner_; }
  double outer() const { return outer_; }

 private:
  Vec center_;
  double inner_, outer_;
};

struct SmoothedSumOptions {
  double weight_floor = 1e-12;
};

// sum_j rho_hat(T (lambda - lambda_j))^2 |b(D) e_j(x)|^2. With a cutoff the
// basis must be a torus basis, where b(D) multiplies e_j by b(k_j / |k_j|);
// the constant mode gets b = 0.
double smoothed_sum(const SpectralBasis& basis, double T, double lambda, const Vec& x,
                    const DirectionCutoff* cutoff = nullptr, SmoothedSumOptions opts = {});

}  // namespace qlab::spectral
