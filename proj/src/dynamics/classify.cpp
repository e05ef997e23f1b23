#include "qlab/dynamics/classify.hpp"

#include <algorithm>
#include <boost/math/tools/roots.hpp>
#include <cmath>

#include "qlab/common/errors.hpp"

namespace qlab::dynamics {

const char* to_string(PointClass c) {
  switch (c) {
    case PointClass::BlowDown: return "blow-down";
    case PointClass::PartialLoops: return "partial-loops";
    case PointClass::NegligibleLoops: return "negligible-loops";
    case PointClass::Undetermined: return "undetermined";
  }
  return "unknown";
}

const char* to_string(Stability s) {
  switch (s) {
    case Stability::Attracting: return "attracting";
    case Stability::Repelling: return "repelling";
    case Stability::Neutral: return "neutral";
  }
  return "unknown";
}

std::vector<FixedPoint> find_fixed_points(const Manifold& m, const Vec& z, const ReturnMapTable& table,
                                          const SweepParams& p, const ClassificationThresholds& th) {
  auto image = [&](double a) {
    const Vec d = first_return_map(m, z, Eigen::Vector2d(std::cos(a), std::sin(a)), p).direction;
    return std::atan2(d(1), d(0));
  };
  auto D = [&](double a) { return wrap_angle(image(a) - a); };

  std::vector<FixedPoint> out;
  const std::size_t n = table.size();
  for (std::size_t i = 0; i < n; ++i) {
    const std::size_t j = (i + 1) % n;
    if (!table.defined(i) || !table.defined(j)) continue;
    const double d0 = table.displacement(i), d1 = table.displacement(j);
    if (std::abs(d1 - d0) > kPi) continue;  // wrap jump, not a zero
    if (d0 == 0.0 || !(d0 * d1 < 0.0 || d1 == 0.0)) continue;
    double a = table.angle(i), b = table.angle(j);
    if (b <= a) b += 2.0 * kPi;
    double root = b;
    if (d1 != 0.0) {
      std::uintmax_t iters = 60;
      auto r = boost::math::tools::toms748_solve(D, a, b, d0, d1, boost::math::tools::eps_tolerance<double>(45), iters);
      root = 0.5 * (r.first + r.second);
    }
    const double h = 1e-4;
    FixedPoint fp;
    fp.angle = wrap_angle(root);
    fp.multiplier = wrap_angle(image(root + h) - image(root - h)) / (2.0 * h);
    if (std::abs(fp.multiplier) < 1.0 - th.neutral_band)
      fp.stability = Stability::Attracting;
    else if (std::abs(fp.multiplier) > 1.0 + th.neutral_band)
      fp.stability = Stability::Repelling;
    else
      fp.stability = Stability::Neutral;
    out.push_back(fp);
  }
  return out;
}

PointClassification classify_point(const Manifold& m, const Vec& z, const SweepParams& p,
                                   const ClassificationThresholds& th) {
  PointClassification pc;
  pc.estimate = sample_loop_set(m, z, p);
  pc.loop_fraction = pc.estimate.measure_fraction;
  double lo = kInf, hi = 0.0, sum = 0.0;
  std::size_t cnt = 0;
  for (const auto& s : pc.estimate.samples) {
    const double t = s.first_return_time();
    if (!std::isfinite(t)) continue;
    lo = std::min(lo, t);
    hi = std::max(hi, t);
    sum += t;
    ++cnt;
  }
  if (cnt > 0) {
    pc.mean_return_time = sum / cnt;
    pc.time_spread = (hi - lo) / pc.mean_return_time;
  }
  if (pc.loop_fraction >= th.blowdown_fraction && pc.time_spread <= th.time_spread)
    pc.cls = PointClass::BlowDown;
  else if (pc.loop_fraction >= th.partial_fraction)
    pc.cls = PointClass::PartialLoops;
  else if (pc.loop_fraction > 0.0)
    pc.cls = PointClass::NegligibleLoops;
  else
    pc.cls = PointClass::Undetermined;

  if (pc.cls == PointClass::BlowDown && m.dim() == 2 && pc.loop_fraction == 1.0) {
    const auto table = ReturnMapTable::from_estimate(pc.estimate);
    double worst = 0.0;
    for (std::size_t i = 0; i < table.size(); ++i) worst = std::max(worst, std::abs(table.displacement(i)));
    pc.identity_map = worst <= th.identity_tol;
    if (!pc.identity_map) pc.fixed_points = find_fixed_points(m, z, table, p, th);
  }
  return pc;
}

}  // namespace qlab::dynamics
