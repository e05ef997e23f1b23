#pragma once

#include <cstddef>
#include <vector>

#include "qlab/common/execution.hpp"
#include "qlab/flow/returns.hpp"

namespace qlab::dynamics {

using flow::ReturnRecord;
using geometry::Manifold;

struct SweepParams {
  std::size_t grid_size = 64;
  double T_max = -1.0;           // <= 0: 30 diameters
  double epsilon_return = -1.0;  // <= 0: 1e-4 diameter
  double t_min = -1.0;           // <= 0: 1e-3 diameter
  double delta = 0.05;
  bool staggered_grid = true;
  Execution exec = Execution::Parallel;
  geometry::GeodesicTolerance tol;
};

double default_horizon(const Manifold& m);

struct DirectionSample {
  Vec direction;
  std::vector<ReturnRecord> returns;  // all returns up to T_max

  double first_return_time() const;
  // First return with gap <= delta (infinity if none).
  double first_return_time_within(double delta) const;
};

struct LoopSetEstimate {
  std::vector<DirectionSample> samples;
  double T_max = 0.0;
  double epsilon_return = 0.0;
  double delta = 0.0;
  double measure_fraction = 0.0;  // fraction of directions with a return (L)
  double delta_fraction = 0.0;    // fraction with a return of gap <= delta (L_delta)

  double fraction_within(double delta) const;
};

// Sweeps a direction grid at z and records every return.
LoopSetEstimate sample_loop_set(const Manifold& m, const Vec& z, const SweepParams& p = {});

struct FirstReturn {
  double time = 0.0;
  Vec direction;
  double miss = 0.0;
};

// Throws HorizonError if the geodesic does not return by T_max.
FirstReturn first_return_map(const Manifold& m, const Vec& z, const Vec& xi, const SweepParams& p = {});

struct Orbit {
  std::vector<Vec> directions;  // xi_0 .. xi_k
  std::vector<double> times;    // return time of each step
  bool truncated = false;       // stopped because an iterate did not return
};

Orbit iterate_return_map(const Manifold& m, const Vec& z, const Vec& xi, std::size_t n_iter, const SweepParams& p = {});

struct RecurrenceEstimate {
  std::size_t n_iter = 0;
  double delta = 0.0;
  double fraction = 0.0;                 // directions recurring within delta
  std::vector<int> first_recurrence;     // iterate index or -1
  std::vector<Vec> directions;
};

RecurrenceEstimate recurrence_estimate(const Manifold& m, const Vec& z, std::size_t n_iter, const SweepParams& p = {});

// Tabulated first-return map on the circle of directions (n = 2). Angles are
// atan2 of the frame components.
class ReturnMapTable {
 public:
  static ReturnMapTable from_estimate(const LoopSetEstimate& est);

  std::size_t size() const { return angle_.size(); }
  double angle(std::size_t i) const { return angle_[i]; }
  bool defined(std::size_t i) const { return defined_[i]; }
  double image(std::size_t i) const { return image_[i]; }
  // Wrapped displacement wrap(image - angle).
  double displacement(std::size_t i) const;
  // Linear interpolation of the displacement between defined neighbours.
  double evaluate(double angle) const;

 private:
  std::vector<double> angle_, image_;
  std::vector<bool> defined_;
};

}  // namespace qlab::dynamics
