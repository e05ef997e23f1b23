#include "qlab/dynamics/loop_set.hpp"

#include <algorithm>
#include <cmath>

#include "qlab/common/errors.hpp"

namespace qlab::dynamics {
namespace {

flow::ReturnOptions return_options(const Manifold& m, const SweepParams& p) {
  flow::ReturnOptions o;
  o.epsilon_return = p.epsilon_return > 0.0 ? p.epsilon_return : flow::default_epsilon_return(m);
  o.t_min = p.t_min > 0.0 ? p.t_min : flow::default_t_min(m);
  o.tol = p.tol;
  return o;
}

double horizon(const Manifold& m, const SweepParams& p) { return p.T_max > 0.0 ? p.T_max : default_horizon(m); }

double angle_between(const Vec& a, const Vec& b) {
  const Vec ua = a.normalized(), ub = b.normalized();
  return 2.0 * std::atan2((ua - ub).norm(), (ua + ub).norm());
}

}  // namespace

double default_horizon(const Manifold& m) { return 30.0 * m.diameter(); }

double DirectionSample::first_return_time() const { return returns.empty() ? kInf : returns.front().time; }

double DirectionSample::first_return_time_within(double delta) const {
  for (const auto& r : returns)
    if (r.gap <= delta) return r.time;
  return kInf;
}

double LoopSetEstimate::fraction_within(double d) const {
  if (samples.empty()) return 0.0;
  std::size_t hit = 0;
  for (const auto& s : samples) hit += std::isfinite(s.first_return_time_within(d)) ? 1 : 0;
  return static_cast<double>(hit) / samples.size();
}

LoopSetEstimate sample_loop_set(const Manifold& m, const Vec& z, const SweepParams& p) {
  if (p.grid_size == 0) throw DomainError("sample_loop_set: empty grid");
  if (!(p.delta >= 0.0)) throw DomainError("sample_loop_set: delta must be >= 0");
  LoopSetEstimate est;
  est.T_max = horizon(m, p);
  const auto opt = return_options(m, p);
  est.epsilon_return = opt.epsilon_return;
  est.delta = p.delta;
  const auto dirs = flow::direction_grid(m.dim(), p.grid_size, p.staggered_grid);
  est.samples.resize(dirs.size());
  for_each_index(dirs.size(), p.exec, [&](std::size_t i) {
    est.samples[i].direction = dirs[i];
    est.samples[i].returns = flow::detect_returns(m, z, dirs[i], est.T_max, opt);
  });
  std::size_t any = 0;
  for (const auto& s : est.samples) any += s.returns.empty() ? 0 : 1;
  est.measure_fraction = static_cast<double>(any) / dirs.size();
  est.delta_fraction = est.fraction_within(p.delta);
  return est;
}

FirstReturn first_return_map(const Manifold& m, const Vec& z, const Vec& xi, const SweepParams& p) {
  auto opt = return_options(m, p);
  opt.max_returns = 1;
  const auto r = flow::detect_returns(m, z, xi, horizon(m, p), opt);
  if (r.empty()) throw HorizonError("first_return_map: no return within the horizon");
  return {r.front().time, r.front().direction, r.front().miss};
}

Orbit iterate_return_map(const Manifold& m, const Vec& z, const Vec& xi, std::size_t n_iter, const SweepParams& p) {
  Orbit o;
  o.directions.push_back(xi.normalized());
  for (std::size_t k = 0; k < n_iter; ++k) {
    try {
      const auto fr = first_return_map(m, z, o.directions.back(), p);
      o.directions.push_back(fr.direction);
      o.times.push_back(fr.time);
    } catch (const HorizonError&) {
      o.truncated = true;
      break;
    }
  }
  return o;
}

RecurrenceEstimate recurrence_estimate(const Manifold& m, const Vec& z, std::size_t n_iter, const SweepParams& p) {
  RecurrenceEstimate out;
  out.n_iter = n_iter;
  out.delta = p.delta;
  out.directions = flow::direction_grid(m.dim(), p.grid_size, p.staggered_grid);
  out.first_recurrence.assign(out.directions.size(), -1);
  for_each_index(out.directions.size(), p.exec, [&](std::size_t i) {
    Vec cur = out.directions[i];
    for (std::size_t k = 1; k <= n_iter; ++k) {
      try {
        cur = first_return_map(m, z, cur, p).direction;
      } catch (const HorizonError&) {
        return;
      }
      if (angle_between(cur, out.directions[i]) <= p.delta) {
        out.first_recurrence[i] = static_cast<int>(k);
        return;
      }
    }
  });
  std::size_t hit = 0;
  for (int k : out.first_recurrence) hit += k > 0 ? 1 : 0;
  out.fraction = static_cast<double>(hit) / out.directions.size();
  return out;
}

ReturnMapTable ReturnMapTable::from_estimate(const LoopSetEstimate& est) {
  ReturnMapTable t;
  for (const auto& s : est.samples) {
    if (s.direction.size() != 2) throw UnsupportedError("ReturnMapTable: only surfaces (n = 2)");
    t.angle_.push_back(std::atan2(s.direction(1), s.direction(0)));
    t.defined_.push_back(!s.returns.empty());
    t.image_.push_back(s.returns.empty() ? 0.0
                                         : std::atan2(s.returns.front().direction(1), s.returns.front().direction(0)));
  }
  return t;
}

double ReturnMapTable::displacement(std::size_t i) const {
  if (!defined_[i]) throw DomainError("ReturnMapTable: no return for this direction");
  return wrap_angle(image_[i] - angle_[i]);
}

double ReturnMapTable::evaluate(double a) const {
  const std::size_t n = angle_.size();
  if (n == 0) throw DomainError("ReturnMapTable: empty");
  // Grid angles are increasing modulo 2 pi; locate the bracketing pair.
  std::size_t best = 0;
  double best_off = kInf;
  for (std::size_t i = 0; i < n; ++i) {
    double off = a - angle_[i];
    off -= 2.0 * kPi * std::floor(off / (2.0 * kPi));
    if (off < best_off) {
      best_off = off;
      best = i;
    }
  }
  const std::size_t next = (best + 1) % n;
  double span = angle_[next] - angle_[best];
  span -= 2.0 * kPi * std::floor(span / (2.0 * kPi));
  const double d0 = displacement(best), d1 = displacement(next);
  if (std::abs(d1 - d0) > kPi || span == 0.0) return best_off < 0.5 * span ? d0 : d1;
  const double w = best_off / span;
  return (1.0 - w) * d0 + w * d1;
}

}  // namespace qlab::dynamics
