// Flow and dynamics experiments: trajectories, return maps, recurrence,
// point classification and the property suite of the geometry layer.

#include <algorithm>
#include <random>

#include "qlab/common/errors.hpp"
#include "qlab/dynamics/classify.hpp"
#include "qlab/flow/jacobi.hpp"
#include "qlab/flow/trajectory.hpp"
#include "qlab/geometry/maps.hpp"
#include "qlab/quasimode/quasimode.hpp"
#include "support.hpp"

namespace qlab::harness {

namespace {

using namespace geometry;
using detail::describe;
using detail::direction_angle;

void run_flow(const Config& cfg, Session& s) {
  const ModelSpec spec = cfg.model("sphere");
  const ModelPtr m = make_model(spec);
  const Vec z = resolve_point(*m, cfg.point("pole"));
  std::vector<double> dir = cfg.get_doubles("params.direction", std::vector<double>(1, 1.0));
  dir.resize(m->dim(), 0.0);
  const double T = cfg.get_double("params.T", 10.0, 1e-6, 1e6);
  const double dt = cfg.get_double("params.dt", 0.05, 1e-6, 1e6);
  s.set_model(describe(spec));
  s.begin();

  Vec c = Eigen::Map<const Vec>(dir.data(), m->dim());
  if (c.norm() == 0.0) throw ConfigError("params.direction: zero vector");
  const flow::Trajectory traj = flow::integrate(*m, flow::make_state(*m, z, c / c.norm()), T);

  std::vector<std::string> cols{"t"};
  for (int i = 0; i < m->position_size(); ++i) cols.push_back("x" + std::to_string(i));
  for (int i = 0; i < m->position_size(); ++i) cols.push_back("xi" + std::to_string(i));
  CsvWriter w = s.table("", cols);
  const std::size_t steps = static_cast<std::size_t>(std::ceil(T / dt));
  for (std::size_t i = 0; i <= steps; ++i) {
    const double t = std::min(T, i * dt);
    const auto st = traj.state_at(t);
    std::vector<Cell> row{t};
    for (int j = 0; j < st.x.size(); ++j) row.push_back(st.x(j));
    for (int j = 0; j < st.xi.size(); ++j) row.push_back(st.xi(j));
    w.row(row);
  }
  s.metric("speed_deviation", traj.speed_deviation());
  s.metric("max_speed_drift", traj.max_speed_drift());
  s.metric("constraint_residual", traj.max_constraint_residual());
}

void run_return_map(const Config& cfg, Session& s) {
  const ModelSpec spec = cfg.model("ellipsoid");
  const ModelPtr m = make_model(spec);
  const Vec z = resolve_point(*m, cfg.point(spec.kind == "ellipsoid" ? "umbilic" : "pole"));
  const dynamics::SweepParams p = detail::read_sweep(cfg, s, 64);
  s.set_model(describe(spec));
  s.begin();
  if (m->dim() != 2) throw UnsupportedError("return-map tables are for surfaces");

  const auto est = dynamics::sample_loop_set(*m, z, p);
  const auto table = dynamics::ReturnMapTable::from_estimate(est);
  CsvWriter w = s.table("", {"index", "angle", "defined", "image", "displacement", "return_time", "returns"});
  for (std::size_t i = 0; i < table.size(); ++i) {
    const bool d = table.defined(i);
    w.row({static_cast<long>(i), table.angle(i), static_cast<long>(d), d ? table.image(i) : 0.0,
           d ? table.displacement(i) : 0.0, d ? est.samples[i].first_return_time() : 0.0,
           static_cast<long>(est.samples[i].returns.size())});
  }
  s.metric("loop_fraction", est.measure_fraction);
  s.metric("delta_fraction", est.delta_fraction);
  s.metric("T_max", est.T_max);
}

void run_recurrence(const Config& cfg, Session& s) {
  const ModelSpec spec = cfg.model("ellipsoid");
  const ModelPtr m = make_model(spec);
  const Vec z = resolve_point(*m, cfg.point(spec.kind == "ellipsoid" ? "umbilic" : "pole"));
  dynamics::SweepParams p = detail::read_sweep(cfg, s, 64);
  const long n_iter = cfg.get_int("params.n_iter", 20, 1, 100000);
  s.set_model(describe(spec));
  s.begin();

  const auto rec = dynamics::recurrence_estimate(*m, z, static_cast<std::size_t>(n_iter), p);
  std::vector<std::string> cols;
  for (int i = 0; i < m->dim(); ++i) cols.push_back("xi" + std::to_string(i));
  cols.push_back("first_recurrence");
  CsvWriter w = s.table("", cols);
  for (std::size_t i = 0; i < rec.directions.size(); ++i) {
    std::vector<Cell> row;
    for (int j = 0; j < rec.directions[i].size(); ++j) row.push_back(rec.directions[i](j));
    row.push_back(static_cast<long>(rec.first_recurrence[i]));
    w.row(row);
  }
  const double g = static_cast<double>(p.grid_size);
  s.metric("recurrent_fraction", rec.fraction);
  s.metric("grid_bound", 2.0 / g + 2.0 / std::sqrt(g));
}

void write_fixed_points(Session& s, const dynamics::PointClassification& pc) {
  CsvWriter w = s.table("fixed_points", {"angle", "multiplier", "stability"});
  for (const auto& f : pc.fixed_points) w.row({f.angle, f.multiplier, std::string(dynamics::to_string(f.stability))});
}

void report_classification(Session& s, const dynamics::PointClassification& pc) {
  s.label("class", dynamics::to_string(pc.cls));
  s.label("identity_map", pc.identity_map ? "true" : "false");
  s.metric("loop_fraction", pc.loop_fraction);
  s.metric("mean_return_time", pc.mean_return_time);
  s.metric("time_spread", pc.time_spread);
  s.metric("fixed_points", static_cast<double>(pc.fixed_points.size()));
  int att = 0, rep = 0;
  for (const auto& f : pc.fixed_points) {
    att += f.stability == dynamics::Stability::Attracting;
    rep += f.stability == dynamics::Stability::Repelling;
  }
  s.metric("attracting", att);
  s.metric("repelling", rep);
}

void run_classify(const Config& cfg, Session& s) {
  const ModelSpec spec = cfg.model("sphere");
  const ModelPtr m = make_model(spec);
  const Vec z = resolve_point(*m, cfg.point(spec.kind == "ellipsoid" ? "umbilic" : "pole"));
  const dynamics::SweepParams p = detail::read_sweep(cfg, s, 64);
  s.set_model(describe(spec));
  s.begin();
  const auto pc = dynamics::classify_point(*m, z, p);
  write_fixed_points(s, pc);
  report_classification(s, pc);
}

// Classification at an umbilic, attraction of random orbits and the
// recurrence estimate.
void run_umbilic(const Config& cfg, Session& s) {
  const ModelSpec spec = cfg.model("ellipsoid");
  const ModelPtr m = make_model(spec);
  const Vec z = resolve_point(*m, cfg.point("umbilic"));
  dynamics::SweepParams p = detail::read_sweep(cfg, s, 64, 6.0);
  const long n_dirs = cfg.get_int("params.orbits", 100, 1, 100000);
  const long n_iter = cfg.get_int("params.n_iter", 40, 1, 100000);
  const long rec_iter = cfg.get_int("params.recurrence_iter", 20, 1, 100000);
  const double rec_delta = cfg.get_double("params.recurrence_delta", 1e-3, 0.0, kPi);
  s.set_model(describe(spec));
  s.begin();
  if (m->dim() != 2) throw UnsupportedError("umbilic return maps are for surfaces");

  const auto pc = dynamics::classify_point(*m, z, p);
  write_fixed_points(s, pc);
  report_classification(s, pc);
  const dynamics::FixedPoint* attractor = nullptr;
  for (const auto& f : pc.fixed_points)
    if (f.stability == dynamics::Stability::Attracting) attractor = &f;
  if (!attractor) throw NumericalError("no attracting fixed point found");

  std::mt19937_64 rng(s.seed());
  std::uniform_real_distribution<double> angle(-kPi, kPi);
  std::vector<double> start(static_cast<std::size_t>(n_dirs));
  for (double& a : start) a = angle(rng);
  std::vector<dynamics::Orbit> orbits(start.size());
  for_each_index(start.size(), s.exec(), [&](std::size_t i) {
    orbits[i] = dynamics::iterate_return_map(*m, z, Eigen::Vector2d(std::cos(start[i]), std::sin(start[i])),
                                             static_cast<std::size_t>(n_iter), p);
  });
  CsvWriter w = s.table("orbits", {"orbit", "iterate", "angle", "return_time"});
  double worst = 0.0;
  long truncated = 0;
  for (std::size_t i = 0; i < orbits.size(); ++i) {
    const auto& o = orbits[i];
    for (std::size_t k = 0; k < o.directions.size(); ++k)
      w.row({static_cast<long>(i), static_cast<long>(k), direction_angle(o.directions[k]),
             k == 0 ? 0.0 : o.times[k - 1]});
    if (o.truncated) {
      ++truncated;
      worst = std::max(worst, kPi);
      continue;
    }
    worst = std::max(worst, detail::angle_distance(direction_angle(o.directions.back()), attractor->angle));
  }
  s.metric("attractor_angle", attractor->angle);
  s.metric("attractor_multiplier", attractor->multiplier);
  s.metric("max_distance_to_attractor", worst);
  s.metric("truncated_orbits", static_cast<double>(truncated));

  dynamics::SweepParams rp = p;
  rp.delta = rec_delta;
  const auto rec = dynamics::recurrence_estimate(*m, z, static_cast<std::size_t>(rec_iter), rp);
  const double g = static_cast<double>(rp.grid_size);
  s.metric("recurrent_fraction", rec.fraction);
  s.metric("recurrence_bound", 2.0 / g + 2.0 / std::sqrt(g));
}

// Speed drift, exp/log roundtrip, the sphere return map and the first
// conjugate time on S^2.
void run_conservation(const Config& cfg, Session& s) {
  const double diameters = cfg.get_double("params.diameters", 30.0, 1.0, 1e4);
  const long n_dirs = cfg.get_int("params.directions", 4, 1, 1000);
  s.set_model("sphere; ellipsoid a=1 b=0.8 c=0.6; torus side=2pi; sor profile=bumped_sine");
  s.begin();

  const std::vector<std::pair<std::string, ModelPtr>> models{
      {"sphere", std::make_shared<RoundSphere>(2)},
      {"ellipsoid", std::make_shared<TriaxialEllipsoid>(1.0, 0.8, 0.6)},
      {"torus", std::make_shared<FlatTorus>(FlatTorus::square(2))},
      {"sor", std::make_shared<SurfaceOfRevolution>(Profile::bumped_sine(0.08, 1.2, 0.5))}};
  CsvWriter w = s.table("", {"model", "direction", "T", "step_drift", "dense_speed_deviation", "constraint_residual",
                             "roundtrip"});
  double drift = 0.0, dense = 0.0, roundtrip = 0.0;
  for (const auto& [label, m] : models) {
    const Vec z = resolve_point(*m, "generic");
    const auto dirs = flow::direction_grid(2, static_cast<std::size_t>(n_dirs), true);
    const double T = diameters * m->diameter();
    std::vector<double> dev(dirs.size()), dense_dev(dirs.size()), con(dirs.size()), rt(dirs.size());
    for_each_index(dirs.size(), s.exec(), [&](std::size_t i) {
      const auto traj = flow::integrate(*m, flow::make_state(*m, z, dirs[i]), T);
      // Energy error of the accepted steps; the dense interpolant between
      // steps is one order lower and reported separately.
      dev[i] = traj.max_speed_drift();
      dense_dev[i] = traj.speed_deviation();
      con[i] = traj.max_constraint_residual();
      const Vec c = dirs[i] * (0.4 * m->injectivity_radius());
      const Vec x = exp_map(*m, TangentVector(z, c));
      rt[i] = (log_map(*m, z, x).components() - c).norm();
    });
    for (std::size_t i = 0; i < dirs.size(); ++i) {
      w.row({label, static_cast<long>(i), T, dev[i], dense_dev[i], con[i], rt[i]});
      drift = std::max({drift, dev[i], con[i]});
      dense = std::max(dense, dense_dev[i]);
      roundtrip = std::max(roundtrip, rt[i]);
    }
  }
  s.metric("max_energy_drift", drift);
  s.metric("max_dense_output_deviation", dense);
  s.metric("max_roundtrip_error", roundtrip);

  RoundSphere sphere(2);
  const Vec pole = sphere.north_pole();
  dynamics::SweepParams p;
  p.T_max = 7.0;
  double identity = 0.0;
  for (const Vec& d : flow::direction_grid(2, static_cast<std::size_t>(n_dirs), true)) {
    const auto r = dynamics::first_return_map(sphere, pole, d, p);
    identity = std::max(identity, (r.direction - d).norm());
  }
  s.metric("sphere_return_identity", identity);
  const auto rep = flow::jacobi_conjugate_points(sphere, pole, Eigen::Vector2d(0.6, 0.8), 4.0);
  if (rep.points.empty()) throw NumericalError("no conjugate point before t = 4 on the sphere");
  s.metric("first_conjugate_time", rep.points.front().time);
  s.metric("conjugate_error", std::abs(rep.points.front().time - kPi));
}

// Maslov index from the Jacobi fields and the quantization condition against
// the exact sphere spectrum.
void run_maslov(const Config& cfg, Session& s) {
  const ModelSpec spec = cfg.model("sphere");
  const ModelPtr m = make_model(spec);
  const Vec z = resolve_point(*m, cfg.point("pole"));
  const long k_min = cfg.get_int("params.k_min", 10, 1, 1000000);
  const long k_max = cfg.get_int("params.k_max", 100, 1, 1000000);
  const dynamics::SweepParams p = detail::read_sweep(cfg, s, 16, 7.0);
  s.set_model(describe(spec));
  s.begin();
  if (k_max < k_min) throw ConfigError("params.k_max < params.k_min: empty k range");

  const auto pc = dynamics::classify_point(*m, z, p);
  if (pc.cls != dynamics::PointClass::BlowDown) throw PreconditionError("point is not a blow-down point");
  const double T = pc.mean_return_time;
  const int beta = flow::morse_index_of_blowdown(*m, z, T);
  CsvWriter w = s.table("", {"k", "r_k", "sqrt_k_k1", "difference", "bound"});
  double excess = -1e300;
  for (long k = k_min; k <= k_max; ++k) {
    const double r = quasimode::frequency(T, beta, static_cast<int>(k));
    const double exact = std::sqrt(static_cast<double>(k) * (k + 1));
    const double bound = 1.0 / (8.0 * k);
    w.row({k, r, exact, r - exact, bound});
    excess = std::max(excess, std::abs(r - exact) - bound);
  }
  s.metric("T", T);
  s.metric("beta", beta);
  s.metric("max_excess_over_bound", excess);
}

}  // namespace

void register_geometry_experiments(std::vector<ExperimentInfo>& out) {
  out.push_back({"flow", "geodesic trajectory from a point and direction", run_flow});
  out.push_back({"return-map", "tabulated first-return map on the circle of directions", run_return_map});
  out.push_back({"recurrence", "fraction of directions recurring under the return map", run_recurrence});
  out.push_back({"classify", "blow-down / partial / negligible loop classification", run_classify});
  out.push_back({"returnmap-ellipsoid-umbilic", "umbilic return map: fixed points, attraction, recurrence",
                 run_umbilic});
  out.push_back({"conservation-suite", "speed drift, exp/log roundtrip, sphere identity map, conjugate time",
                 run_conservation});
  out.push_back({"maslov-sphere", "Morse index on S^2 and quantized frequencies vs the exact spectrum", run_maslov});
}

}  // namespace qlab::harness
