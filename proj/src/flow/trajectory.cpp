#include "qlab/flow/trajectory.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>

#include "qlab/common/errors.hpp"

namespace qlab::flow {

CotangentState make_state(const Manifold& m, const Vec& z, const Vec& direction) {
  return unpack(m.initial_state(z, direction), m.position_size(), 0.0);
}

std::vector<double> pack(const CotangentState& s) {
  std::vector<double> y(s.x.size() + s.xi.size());
  for (int i = 0; i < s.x.size(); ++i) y[i] = s.x(i);
  for (int i = 0; i < s.xi.size(); ++i) y[s.x.size() + i] = s.xi(i);
  return y;
}

CotangentState unpack(std::span<const double> y, int position_size, double t) {
  CotangentState s;
  s.x = Eigen::Map<const Vec>(y.data(), position_size);
  s.xi = Eigen::Map<const Vec>(y.data() + position_size, position_size);
  s.t = t;
  return s;
}

Trajectory::Trajectory(const Manifold& m, std::vector<ode::DenseStep> steps, double max_drift)
    : m_(&m), steps_(std::move(steps)), max_drift_(max_drift) {}

CotangentState Trajectory::state_at(double t) const {
  if (steps_.empty() || t < steps_.front().t0 || t > t_end()) throw DomainError("Trajectory::state_at: time out of range");
  auto it = std::upper_bound(steps_.begin(), steps_.end(), t,
                             [](double v, const ode::DenseStep& s) { return v < s.t1(); });
  if (it == steps_.end()) --it;
  return unpack(it->eval(t), m_->position_size(), t);
}

double Trajectory::speed_deviation(int samples_per_step) const {
  double worst = 0.0;
  for (const auto& s : steps_)
    for (int k = 0; k <= samples_per_step; ++k) {
      const auto y = s.eval(s.t0 + s.h * k / samples_per_step);
      worst = std::max(worst, std::abs(m_->speed(y) - 1.0));
    }
  return worst;
}

double Trajectory::max_constraint_residual() const {
  double worst = 0.0;
  for (const auto& s : steps_) {
    const Vec x = Eigen::Map<const Vec>(s.y1.data(), m_->position_size());
    worst = std::max(worst, std::abs(m_->constraint(x)));
  }
  return worst;
}

void Trajectory::write_csv(std::ostream& os, double dt) const {
  const int P = m_->position_size();
  os << "t";
  for (int i = 0; i < P; ++i) os << ",x" << i;
  for (int i = 0; i < P; ++i) os << ",xi" << i;
  os << "\n";
  auto row = [&](double t) {
    const auto s = state_at(t);
    os << t;
    for (int i = 0; i < P; ++i) os << "," << s.x(i);
    for (int i = 0; i < P; ++i) os << "," << s.xi(i);
    os << "\n";
  };
  const double T = t_end();
  const long n = static_cast<long>(std::floor(T / dt + 1e-9));
  for (long k = 0; k <= n; ++k) row(std::min(T, k * dt));
  if (n * dt < T - 1e-12) row(T);
}

Trajectory integrate(const Manifold& m, const CotangentState& init, double T_max, const GeodesicTolerance& tol) {
  if (!(T_max >= 0.0) || !std::isfinite(T_max)) throw DomainError("integrate: T_max must be finite and >= 0");
  const auto y0 = pack(init);
  if (static_cast<int>(y0.size()) != 2 * m.position_size()) throw DomainError("integrate: state has wrong size");
  if (std::abs(m.speed(y0) - 1.0) > 1e-9) throw DomainError("integrate: state is not on the unit cosphere bundle");
  if (std::abs(m.constraint(init.x)) > 1e-9) throw DomainError("integrate: position is off the manifold");
  double drift = 0.0;
  auto integ = geometry::geodesic_integrator(m, tol, &drift);
  std::vector<ode::DenseStep> steps;
  integ.integrate(init.t, init.t + T_max, y0, [&](const ode::DenseStep& s) {
    steps.push_back(s);
    return true;
  });
  return Trajectory(m, std::move(steps), drift);
}

std::vector<Vec> direction_grid(int n, std::size_t count, bool staggered) {
  if (count == 0) throw DomainError("direction_grid: count must be positive");
  std::vector<Vec> out;
  out.reserve(count);
  if (n == 2) {
    for (std::size_t i = 0; i < count; ++i) {
      const double a = 2.0 * kPi * (i + (staggered ? 0.5 : 0.0)) / count;
      out.push_back(Eigen::Vector2d(std::cos(a), std::sin(a)));
    }
  } else if (n == 3) {
    const double golden = kPi * (3.0 - std::sqrt(5.0));
    for (std::size_t i = 0; i < count; ++i) {
      const double z = 1.0 - (2.0 * i + 1.0) / count;
      const double r = std::sqrt(std::max(0.0, 1.0 - z * z));
      const double phi = golden * i;
      out.push_back(Eigen::Vector3d(r * std::cos(phi), r * std::sin(phi), z));
    }
  } else {
    throw UnsupportedError("direction_grid: only n = 2, 3");
  }
  return out;
}

}  // namespace qlab::flow
