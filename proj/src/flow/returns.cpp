#include "qlab/flow/returns.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>

#include "qlab/common/errors.hpp"

namespace qlab::flow {

double default_epsilon_return(const Manifold& m) { return 1e-4 * m.diameter(); }
double default_t_min(const Manifold& m) { return 1e-3 * m.diameter(); }

std::vector<ReturnRecord> detect_returns(const Manifold& m, const Vec& z, const Vec& xi, double T_max,
                                         const ReturnOptions& opt) {
  const double eps = opt.epsilon_return > 0.0 ? opt.epsilon_return : default_epsilon_return(m);
  const double t_min = opt.t_min > 0.0 ? opt.t_min : default_t_min(m);
  if (eps >= m.injectivity_radius() / 10.0)
    throw PreconditionError("detect_returns: epsilon_return must be below injectivity radius / 10");
  if (!(T_max > 0.0) || !std::isfinite(T_max)) throw DomainError("detect_returns: T_max must be positive");

  const Vec xi_unit = xi / xi.norm();
  auto integ = geometry::geodesic_integrator(m, opt.tol);
  ode::DormandPrince raw([&m](std::span<const double> y, std::span<double> dy) { m.geodesic_rhs(y, dy); }, {});

  std::vector<ReturnRecord> out;
  constexpr int kSub = 8;
  std::vector<double> buf;

  auto observer = [&](const ode::DenseStep& st) {
    const double d0 = std::sqrt(std::max(0.0, m.sq_distance(z, st.y0).value));
    const double d1 = std::sqrt(std::max(0.0, m.sq_distance(z, st.y1).value));
    // Lower bound on the distance inside the step (unit speed, with slack
    // for coordinate distances that are only nearly 1-Lipschitz).
    if (0.5 * (d0 + d1 - 1.5 * st.h) > eps) return true;
    buf.resize(st.y0.size());
    auto rate = [&](double t) {
      st.eval(t, buf);
      return m.sq_distance(z, buf).rate;
    };
    double ta = st.t0, ra = rate(ta);
    for (int k = 1; k <= kSub; ++k) {
      const double tb = st.t0 + st.h * k / kSub;
      const double rb = rate(tb);
      if (ra < 0.0 && rb >= 0.0) {
        double ts = tb;
        if (rb > 0.0) {
          std::uintmax_t iters = 100;
          auto r = boost::math::tools::toms748_solve(rate, ta, tb, ra, rb,
                                                     boost::math::tools::eps_tolerance<double>(52), iters);
          ts = 0.5 * (r.first + r.second);
        }
        auto y = raw.step(st.y0, ts - st.t0);
        m.renormalize(y);
        const double d = std::sqrt(std::max(0.0, m.sq_distance(z, y).value));
        if (d <= eps && ts > t_min && (out.empty() || ts - out.back().time > 1e-9)) {
          ReturnRecord rec;
          rec.time = ts;
          rec.direction = m.frame_components(z, y);
          rec.direction.normalize();
          rec.miss = d;
          rec.gap = 2.0 * std::atan2((rec.direction - xi_unit).norm(), (rec.direction + xi_unit).norm());
          out.push_back(rec);
          if (out.size() >= opt.max_returns) return false;
          if (opt.stop_gap >= 0.0 && rec.gap <= opt.stop_gap) return false;
        }
      }
      ta = tb;
      ra = rb;
    }
    return true;
  };
  integ.integrate(0.0, T_max, m.initial_state(z, xi), observer);
  return out;
}

}  // namespace qlab::flow
