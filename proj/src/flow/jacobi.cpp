#include "qlab/flow/jacobi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qlab/common/errors.hpp"
#include "qlab/flow/returns.hpp"

namespace qlab::flow {

JacobiSolution::JacobiSolution(int position_size, int m, std::vector<ode::DenseStep> steps)
    : P_(position_size), m_(m), steps_(std::move(steps)) {}

const ode::DenseStep& JacobiSolution::step_at(double t) const {
  if (steps_.empty() || t < steps_.front().t0 || t > t_end()) throw DomainError("JacobiSolution: time out of range");
  auto it = std::upper_bound(steps_.begin(), steps_.end(), t,
                             [](double v, const ode::DenseStep& s) { return v < s.t1(); });
  if (it == steps_.end()) --it;
  return *it;
}

Mat JacobiSolution::J(double t) const {
  const auto y = step_at(t).eval(t);
  return Eigen::Map<const Mat>(y.data() + 2 * P_, m_, m_);
}

Mat JacobiSolution::Jdot(double t) const {
  const auto y = step_at(t).eval(t);
  return Eigen::Map<const Mat>(y.data() + 2 * P_ + m_ * m_, m_, m_);
}

JacobiSolution solve_jacobi(const Manifold& model, const Vec& z, const Vec& xi, double T, const GeodesicTolerance& tol) {
  const int P = model.position_size();
  const int m = model.dim() - 1;
  const int off = 2 * P, mm = m * m;
  auto y0 = model.initial_state(z, xi);
  y0.resize(off + 2 * mm, 0.0);
  for (int i = 0; i < m; ++i) y0[off + mm + i * m + i] = 1.0;

  auto rhs = [&model, P, m, off, mm](std::span<const double> y, std::span<double> dy) {
    model.geodesic_rhs(y.first(2 * P), dy.first(2 * P));
    const Mat K = model.jacobi_curvature(y.first(2 * P));
    Eigen::Map<const Mat> J(y.data() + off, m, m), Jd(y.data() + off + mm, m, m);
    Eigen::Map<Mat> dJ(dy.data() + off, m, m), dJd(dy.data() + off + mm, m, m);
    dJ = Jd;
    dJd = -K * J;
  };
  const double limit = tol.drift_limit;
  auto proj = [&model, P, limit](std::span<double> y) {
    const double d = model.renormalize(y.first(2 * P));
    if (!(d <= limit)) throw NumericalError("solve_jacobi: speed drift exceeds tolerance");
  };
  ode::Tolerance t;
  t.rtol = tol.rtol * model.tolerance_scale();
  t.atol = tol.atol * model.tolerance_scale();
  t.h_max = tol.h_max > 0.0 ? tol.h_max : model.injectivity_radius() / 8.0;
  ode::DormandPrince integ(rhs, t, proj);
  std::vector<ode::DenseStep> steps;
  integ.integrate(0.0, T, y0, [&](const ode::DenseStep& s) {
    steps.push_back(s);
    return true;
  });
  return JacobiSolution(P, m, std::move(steps));
}

namespace {

// Sum of principal arguments of the eigenvalues of (J - iJ')(J + iJ')^{-1}.
double phase_sum(const Mat& J, const Mat& Jd) {
  const cplx I(0.0, 1.0);
  if (J.rows() == 1) return std::arg((J(0, 0) - I * Jd(0, 0)) / (J(0, 0) + I * Jd(0, 0)));
  const Eigen::MatrixXcd A = J.cast<cplx>() - I * Jd.cast<cplx>();
  const Eigen::MatrixXcd B = J.cast<cplx>() + I * Jd.cast<cplx>();
  const Eigen::MatrixXcd W = A * B.inverse();
  Eigen::ComplexEigenSolver<Eigen::MatrixXcd> es(W, false);
  double s = 0.0;
  for (int i = 0; i < es.eigenvalues().size(); ++i) s += std::arg(es.eigenvalues()(i));
  return s;
}

}  // namespace

ConjugacyReport jacobi_conjugate_points(const Manifold& model, const Vec& z, const Vec& xi, double T,
                                        const GeodesicTolerance& tol) {
  if (!(T > 0.0)) throw DomainError("jacobi_conjugate_points: T must be positive");
  ConjugacyReport rep;
  rep.T = T;
  const int m = model.dim() - 1;
  if (m == 0) return rep;
  const double tol_end = 1e-6 * std::max(1.0, T);
  const JacobiSolution sol = solve_jacobi(model, z, xi, T + 10.0 * tol_end, tol);
  const int P = model.position_size();

  auto phase = [&](double t) { return phase_sum(sol.J(t), sol.Jdot(t)); };
  auto count = [&](double s_ref, double t) {
    return static_cast<int>(std::lround(-(phase(t) - s_ref) / (2.0 * kPi)));
  };

  bool have_prev = false;
  double t_prev = 0.0, s_prev = 0.0;
  for (const auto& st : sol.steps()) {
    const double kmax = model.jacobi_curvature(std::span<const double>(st.y0).first(2 * P)).cwiseAbs().maxCoeff();
    const int q = std::max(4, static_cast<int>(std::ceil(st.h * 2.0 * std::max(1.0, kmax) * m / (kPi / 8.0))));
    for (int k = 1; k <= q; ++k) {
      const double t = st.t0 + st.h * k / q;
      const double s = phase(t);
      // At t = 0 every eigenphase sits at pi; start counting after it moved.
      if (!have_prev) {
        have_prev = true;
        t_prev = t;
        s_prev = s;
        continue;
      }
      int c = static_cast<int>(std::lround(-(s - s_prev) / (2.0 * kPi)));
      double lo = t_prev, s_lo = s_prev;
      while (c > 0) {
        double a = lo, b = t;
        for (int it = 0; it < 80 && b - a > 1e-15 * std::max(1.0, t); ++it) {
          const double mid = 0.5 * (a + b);
          if (count(s_lo, mid) >= 1)
            b = mid;
          else
            a = mid;
        }
        const int mult = count(s_lo, b);
        if (mult <= 0) break;
        const double tc = 0.5 * (a + b);
        if (tc <= T + tol_end) {
          rep.points.push_back({tc, mult});
          rep.beta += mult;
          if (std::abs(tc - T) <= tol_end) rep.endpoint_degenerate = true;
        }
        c -= mult;
        lo = b;
        s_lo = phase(b);
      }
      t_prev = t;
      s_prev = s;
    }
  }
  return rep;
}

int morse_index_of_blowdown(const Manifold& model, const Vec& z, double T, std::size_t sample_count) {
  if (!(T > 0.0)) throw DomainError("morse_index_of_blowdown: T must be positive");
  const auto dirs = direction_grid(model.dim(), sample_count);
  const double tol_t = 1e-6 * std::max(1.0, T);
  int beta = -1;
  for (const Vec& d : dirs) {
    ReturnOptions opt;
    opt.max_returns = 1;
    const auto rets = detect_returns(model, z, d, T + 100.0 * tol_t, opt);
    if (rets.empty() || std::abs(rets.front().time - T) > tol_t) {
      std::ostringstream os;
      os << "morse_index_of_blowdown: direction (" << d.transpose() << ") does not return at T = " << T;
      throw PreconditionError(os.str());
    }
    const int b = jacobi_conjugate_points(model, z, d, rets.front().time).beta;
    if (beta >= 0 && b != beta) throw InconsistencyError("morse_index_of_blowdown: index differs between loops");
    beta = b;
  }
  return beta;
}

}  // namespace qlab::flow
