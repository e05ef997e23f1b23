#include "qlab/common/smooth.hpp"

#include <algorithm>
#include <cmath>
#include <vector>

#include "qlab/common/quadrature.hpp"

namespace qlab {

double mollifier(double t) {
  const double q = 1.0 - t * t;
  return q <= 0.0 ? 0.0 : std::exp(-1.0 / q);
}

namespace {

constexpr int kCells = 4096;

// Density on [0, 1]: mollifier(2u - 1).
double density(double u) { return mollifier(2.0 * u - 1.0); }

struct StepTable {
  std::vector<double> value;  // cumulative integral at nodes
  double total = 0.0;
  StepTable() : value(kCells + 1, 0.0) {
    const double h = 1.0 / kCells;
    for (int i = 0; i < kCells; ++i)
      value[i + 1] = value[i] + integrate_panels(density, i * h, (i + 1) * h, 1, 16);
    total = value[kCells];
  }
};

const StepTable& table() {
  static const StepTable t;
  return t;
}

}  // namespace

double smooth_step(double t) {
  if (t <= 0.0) return 0.0;
  if (t >= 1.0) return 1.0;
  const StepTable& tb = table();
  const double h = 1.0 / kCells;
  int i = static_cast<int>(t / h);
  if (i >= kCells) i = kCells - 1;
  const double x0 = i * h;
  const double s = (t - x0) / h;
  const double p0 = tb.value[i], p1 = tb.value[i + 1];
  const double m0 = density(x0) * h, m1 = density(x0 + h) * h;
  const double s2 = s * s, s3 = s2 * s;
  const double v = (2 * s3 - 3 * s2 + 1) * p0 + (s3 - 2 * s2 + s) * m0 + (-2 * s3 + 3 * s2) * p1 +
                   (s3 - s2) * m1;
  return std::clamp(v, p0, p1) / tb.total;
}

double plateau_cutoff(double r, double inner, double outer) {
  if (r <= inner) return 1.0;
  if (r >= outer) return 0.0;
  return 1.0 - smooth_step((r - inner) / (outer - inner));
}

}  // namespace qlab
