#include "qlab/common/ode.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "qlab/common/errors.hpp"

namespace qlab::ode {
namespace {

constexpr double c2 = 1.0 / 5, c3 = 3.0 / 10, c4 = 4.0 / 5, c5 = 8.0 / 9;
constexpr double a21 = 1.0 / 5;
constexpr double a31 = 3.0 / 40, a32 = 9.0 / 40;
constexpr double a41 = 44.0 / 45, a42 = -56.0 / 15, a43 = 32.0 / 9;
constexpr double a51 = 19372.0 / 6561, a52 = -25360.0 / 2187, a53 = 64448.0 / 6561,
                 a54 = -212.0 / 729;
constexpr double a61 = 9017.0 / 3168, a62 = -355.0 / 33, a63 = 46732.0 / 5247,
                 a64 = 49.0 / 176, a65 = -5103.0 / 18656;
constexpr double b1 = 35.0 / 384, b3 = 500.0 / 1113, b4 = 125.0 / 192, b5 = -2187.0 / 6784,
                 b6 = 11.0 / 84;
constexpr double e1 = 71.0 / 57600, e3 = -71.0 / 16695, e4 = 71.0 / 1920,
                 e5 = -17253.0 / 339200, e6 = 22.0 / 525, e7 = -1.0 / 40;
constexpr double d1 = -12715105075.0 / 11282082432.0, d3 = 87487479700.0 / 32700410799.0,
                 d4 = -10690763975.0 / 1880347072.0, d5 = 701980252875.0 / 199316789632.0,
                 d6 = -1453857185.0 / 822651844.0, d7 = 69997945.0 / 29380423.0;

struct Stages {
  std::vector<double> k1, k2, k3, k4, k5, k6, k7, tmp, y1;
  explicit Stages(std::size_t n) : k1(n), k2(n), k3(n), k4(n), k5(n), k6(n), k7(n), tmp(n), y1(n) {}
};

// Fills k2..k7 and y1 from y and k1.
void dp_stages(const Rhs& f, std::span<const double> y, double h, Stages& s) {
  const std::size_t n = y.size();
  for (std::size_t i = 0; i < n; ++i) s.tmp[i] = y[i] + h * a21 * s.k1[i];
  f(s.tmp, s.k2);
  for (std::size_t i = 0; i < n; ++i) s.tmp[i] = y[i] + h * (a31 * s.k1[i] + a32 * s.k2[i]);
  f(s.tmp, s.k3);
  for (std::size_t i = 0; i < n; ++i)
    s.tmp[i] = y[i] + h * (a41 * s.k1[i] + a42 * s.k2[i] + a43 * s.k3[i]);
  f(s.tmp, s.k4);
  for (std::size_t i = 0; i < n; ++i)
    s.tmp[i] = y[i] + h * (a51 * s.k1[i] + a52 * s.k2[i] + a53 * s.k3[i] + a54 * s.k4[i]);
  f(s.tmp, s.k5);
  for (std::size_t i = 0; i < n; ++i)
    s.tmp[i] = y[i] + h * (a61 * s.k1[i] + a62 * s.k2[i] + a63 * s.k3[i] + a64 * s.k4[i] +
                           a65 * s.k5[i]);
  f(s.tmp, s.k6);
  for (std::size_t i = 0; i < n; ++i)
    s.y1[i] = y[i] + h * (b1 * s.k1[i] + b3 * s.k3[i] + b4 * s.k4[i] + b5 * s.k5[i] + b6 * s.k6[i]);
  f(s.y1, s.k7);
}

}  // namespace

void DenseStep::eval(double t, std::span<double> out) const {
  const double th = h == 0.0 ? 0.0 : (t - t0) / h;
  const double th1 = 1.0 - th;
  for (std::size_t i = 0; i < y0.size(); ++i)
    out[i] = y0[i] + th * (rc2_[i] + th1 * (rc3_[i] + th * (rc4_[i] + th1 * rc5_[i])));
}

std::vector<double> DenseStep::eval(double t) const {
  std::vector<double> out(y0.size());
  eval(t, out);
  return out;
}

DormandPrince::DormandPrince(Rhs rhs, Tolerance tol, Projector projector)
    : rhs_(std::move(rhs)), tol_(tol), projector_(std::move(projector)) {}

std::vector<double> DormandPrince::step(std::span<const double> y, double h) const {
  Stages s(y.size());
  rhs_(y, s.k1);
  dp_stages(rhs_, y, h, s);
  return s.y1;
}

Summary DormandPrince::integrate(double t0, double t1, std::vector<double> y,
                                 const Observer& observer) const {
  const std::size_t n = y.size();
  Summary out;
  if (t1 < t0) throw DomainError("integrate: t1 < t0");
  if (t1 == t0) {
    out.t_end = t0;
    out.y_end = std::move(y);
    return out;
  }
  Stages s(n);
  rhs_(y, s.k1);

  // Initial step from the usual norm heuristic.
  double d0 = 0, d1n = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double sc = tol_.atol + tol_.rtol * std::abs(y[i]);
    d0 += (y[i] / sc) * (y[i] / sc);
    d1n += (s.k1[i] / sc) * (s.k1[i] / sc);
  }
  d0 = std::sqrt(d0 / n);
  d1n = std::sqrt(d1n / n);
  double h = (d0 < 1e-5 || d1n < 1e-5) ? 1e-6 : 0.01 * d0 / d1n;
  h = std::min({h, tol_.h_max, t1 - t0});

  double t = t0;
  double err_prev = 1e-4;
  DenseStep dense;
  dense.rc2_.resize(n);
  dense.rc3_.resize(n);
  dense.rc4_.resize(n);
  dense.rc5_.resize(n);
  std::vector<double> ydiff(n);

  while (t < t1) {
    if (out.accepted + out.rejected > tol_.max_steps)
      throw NumericalError("integrate: step budget exhausted");
    bool last = false;
    if (t + h >= t1 || t + 1.01 * h >= t1) {
      h = t1 - t;
      last = true;
    }
    dp_stages(rhs_, y, h, s);
    double err = 0;
    for (std::size_t i = 0; i < n; ++i) {
      const double e = h * (e1 * s.k1[i] + e3 * s.k3[i] + e4 * s.k4[i] + e5 * s.k5[i] +
                            e6 * s.k6[i] + e7 * s.k7[i]);
      const double sc = tol_.atol + tol_.rtol * std::max(std::abs(y[i]), std::abs(s.y1[i]));
      err += (e / sc) * (e / sc);
    }
    err = std::sqrt(err / n);
    if (!std::isfinite(err)) err = 1e10;

    if (err <= 1.0) {
      dense.t0 = t;
      dense.h = h;
      dense.y0 = y;
      for (std::size_t i = 0; i < n; ++i) {
        const double dy = s.y1[i] - y[i];
        const double bspl = h * s.k1[i] - dy;
        dense.rc2_[i] = dy;
        dense.rc3_[i] = bspl;
        dense.rc4_[i] = dy - h * s.k7[i] - bspl;
        dense.rc5_[i] = h * (d1 * s.k1[i] + d3 * s.k3[i] + d4 * s.k4[i] + d5 * s.k5[i] +
                             d6 * s.k6[i] + d7 * s.k7[i]);
      }
      y = s.y1;
      bool changed = false;
      if (projector_) {
        ydiff = y;
        projector_(y);
        changed = ydiff != y;
      }
      dense.y1 = y;
      t = last ? t1 : t + h;
      ++out.accepted;
      if (changed)
        rhs_(y, s.k1);
      else
        s.k1 = s.k7;
      if (observer && !observer(dense)) {
        out.stopped_by_observer = true;
        break;
      }
      // PI step control.
      const double fac = 0.9 * std::pow(std::max(err, 1e-10), -0.7 / 5) * std::pow(err_prev, 0.4 / 5);
      err_prev = std::max(err, 1e-4);
      h *= std::clamp(fac, 0.2, 10.0);
      h = std::min(h, tol_.h_max);
    } else {
      ++out.rejected;
      h *= std::max(0.2, 0.9 * std::pow(err, -0.2));
      if (h < tol_.h_min) {
        std::ostringstream os;
        os << "integrate: step size underflow at t=" << t;
        throw NumericalError(os.str());
      }
    }
  }
  out.t_end = t;
  out.y_end = std::move(y);
  return out;
}

}  // namespace qlab::ode
