#pragma once

#include <functional>
#include <utility>
#include <vector>

#include "qlab/common/fit.hpp"
#include "qlab/common/quadrature.hpp"
#include "qlab/common/types.hpp"
#include "qlab/dynamics/loop_set.hpp"
#include "qlab/geometry/manifold.hpp"
#include "qlab/spectral/basis.hpp"

namespace qlab::quasimode {

// r_k = (2 pi / T)(k + beta / 4).
double frequency(double T, int beta, int k);
std::vector<double> frequencies(double T, int beta, int k_min, int k_max);

// Local quasimode at a blow-down point z with return time T and Morse index
// beta, in dimension n = 2 or 3:
//   Phi_k(x) = (2 pi h)^{(1-n)/2} int e^{i <x, theta/|theta|> / h} chi_R(|theta|) dtheta,
// h = 1 / r_k, with x in normal coordinates at z.
struct QuasimodeSpec {
  geometry::ModelPtr model;  // optional; needed for evaluation at manifold points
  Vec z;
  int n = 2;
  double T = 2.0 * kPi;
  int beta = 0;
  int k = 0;
  double R = 2.0;
  double delta_ann = 0.75;         // annulus exponent in (1 - 1/n, 1)
  double eps0 = 0.5;               // radius of the normal ball B_1
  double nodes_per_oscillation = 10.0;
  double tol = 1e-9;               // relative quadrature tolerance

  // Defaults for dimension n: delta_ann = 1 - 1/(2n).
  static QuasimodeSpec make(int n, double T, int beta, int k);
  double r() const { return frequency(T, beta, k); }
  double hbar() const { return 1.0 / r(); }
  // DomainError unless r_k > 0, R > 1, delta_ann in (1 - 1/n, 1), n in {2, 3}.
  void validate() const;
};

struct QuasimodeValue {
  cplx value;
  double error = 0.0;
};

// <x, theta/|theta|>; DomainError for theta = 0.
double phase_eval(const Vec& x_nc, const Vec& theta);
// <x, theta>_g / |theta|_{g(0)} with g the metric in normal coordinates at x.
double gauss_phase(const geometry::Manifold& m, const Vec& z, const Vec& x_nc, const Vec& theta);
// |grad_x phi|_g^2 - 1 at (x, theta).
double eikonal_residual(const geometry::Manifold& m, const Vec& z, const Vec& x_nc, const Vec& theta);
// max of |g^{ij} d_i phi d_j a0| and |g^{ij} d_i d_j <x, theta> a0| for a0 = 1,
// by central differences.
double transport_residual(const geometry::Manifold& m, const Vec& z, const Vec& x_nc, const Vec& theta);

// int_{S^{n-1}} e^{i s <e, omega>} domega: 2 pi J0(s) for n = 2, 4 pi sin(s)/s for n = 3.
double angular_integral(int n, double s);
// The same integral by Gauss-Legendre panels, each spanning at most a tenth
// of an oscillation; the error compares against half as many panels.
QuadratureResult<cplx> angular_integral_quadrature(int n, double s);
// M_R = int_0^inf chi_R(r) r^{n-1} dr with chi_R = 1 on [0, R], 0 beyond 2R.
QuadratureResult<double> radial_mass(int n, double R);

// The theta integral in polar form. The phase is homogeneous of degree 0 in
// theta, so it factors into M_R times the angular integral at |x| / h.
QuasimodeValue quasimode_eval(const QuasimodeSpec& spec, const Vec& x_nc);
// Same at a manifold point inside the normal ball at spec.z.
QuasimodeValue quasimode_eval_at(const QuasimodeSpec& spec, const Vec& point);

// c_+ and c_- of |x|^{(1-n)/2} (c_+ e^{i|x|/h} + c_- e^{-i|x|/h}): both equal
// M_R e^{-+ i (n-1) pi / 4} from the large-argument asymptotics of the
// angular integral.
std::pair<cplx, cplx> stationary_phase_constants(const QuasimodeSpec& spec);
// DomainError when |x| < h^delta_ann.
cplx stationary_phase_approx(const QuasimodeSpec& spec, const Vec& x_nc);
// max |quasimode_eval - stationary_phase_approx| over one oscillation,
// |x| in [rho - pi h, rho + pi h]. The pointwise discrepancy oscillates
// with the phase of |x| / h; its envelope carries the O(h / |x|) scaling.
double stationary_phase_envelope(const QuasimodeSpec& spec, double rho, int samples = 64);

struct L2Normalization {
  double total = 0.0;    // C_k = int_{B_1} |Phi_k|^2 dx
  double ball = 0.0;     // |x| <= h^delta part
  double annulus = 0.0;  // h^delta < |x| < eps0
  double leading = 0.0;  // |S^{n-1}| (|c+|^2 + |c-|^2)(eps0 - h^delta)
  double error = 0.0;
  // Normalized local quasimode on B_1 (unit L^2 mass).
  std::function<cplx(const Vec&)> evaluate;
};
L2Normalization l2_normalize(const QuasimodeSpec& spec);

struct GrowthFit {
  std::vector<int> k;
  std::vector<double> r;       // r_k
  std::vector<double> value;   // normalized |Phi_k(z)|
  std::vector<double> norm;    // C_k
  PowerLawFit fit;
  double T = 0.0;
  int beta = 0;
};

struct GrowthOptions {
  double R = 2.0;
  double eps0 = 0.5;
  int stride = 1;
  dynamics::SweepParams sweep;
};

// Requires classify_point(model, z) to report a blow-down point with
// identity return map (PreconditionError otherwise); T and beta come from
// the classification and the Jacobi fields.
GrowthFit sup_growth(const geometry::Manifold& model, const Vec& z, int k_min, int k_max,
                     const GrowthOptions& opts = {});
// Growth fit for known T and beta.
GrowthFit growth_fit(int n, double T, int beta, int k_min, int k_max, const GrowthOptions& opts = {});

enum class ResidualMode {
  // Zonal profile patched from the pole pieces at both poles, converted to a
  // function by the half-density factor (s / f(s))^{1/2}.
  Patched,
  // Amplitude 1 copy of the local piece cut off inside B_1.
  LocalCutoff,
};

struct ResidualResult {
  double residual = 0.0;  // ||(-Delta - r_k^2) Phi_k||_2 for unit-norm Phi_k
  double captured = 0.0;  // fraction of ||Phi_k||^2 inside the basis
  std::size_t terms = 0;
};

// spec.z must be the pole s = 0 of a zonal basis (sphere or surface of
// revolution); UnsupportedError for bases without a zonal structure.
ResidualResult residual_norm(const QuasimodeSpec& spec, const spectral::SpectralBasis& basis,
                             ResidualMode mode = ResidualMode::Patched);

}  // namespace qlab::quasimode
