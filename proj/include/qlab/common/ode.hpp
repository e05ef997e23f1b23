#pragma once

#include <cstddef>
#include <functional>
#include <limits>
#include <span>
#include <vector>

namespace qlab::ode {

struct Tolerance {
  double rtol = 1e-10;
  double atol = 1e-12;
  double h_max = std::numeric_limits<double>::infinity();
  double h_min = 1e-14;
  std::size_t max_steps = 20'000'000;
};

// One accepted Dormand-Prince step together with its continuous extension.
class DenseStep {
 public:
  double t0 = 0.0;
  double h = 0.0;
  std::vector<double> y0;
  std::vector<double> y1;  // after projection

  double t1() const { return t0 + h; }
  // Interpolated state at t in [t0, t0 + h].
  void eval(double t, std::span<double> out) const;
  std::vector<double> eval(double t) const;

 private:
  friend class DormandPrince;
  std::vector<double> rc2_, rc3_, rc4_, rc5_;
};

using Rhs = std::function<void(std::span<const double> y, std::span<double> dy)>;
// Post-step map (constraint projection / renormalization). May throw.
using Projector = std::function<void(std::span<double> y)>;
// Called per accepted step; return false to stop.
using Observer = std::function<bool(const DenseStep&)>;

struct Summary {
  double t_end = 0.0;
  std::vector<double> y_end;
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  bool stopped_by_observer = false;
};

// Adaptive Dormand-Prince 5(4) for autonomous systems.
class DormandPrince {
 public:
  DormandPrince(Rhs rhs, Tolerance tol, Projector projector = {});

  Summary integrate(double t0, double t1, std::vector<double> y, const Observer& observer = {}) const;

  // Single fixed step of size h (no error control, no projection).
  std::vector<double> step(std::span<const double> y, double h) const;

 private:
  Rhs rhs_;
  Tolerance tol_;
  Projector projector_;
};

}  // namespace qlab::ode
