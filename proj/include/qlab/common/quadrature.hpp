#pragma once

#include <algorithm>
#include <cmath>
#include <complex>
#include <vector>

namespace qlab {

struct GaussRule {
  std::vector<double> nodes;    // on [-1, 1]
  std::vector<double> weights;
};

// Gauss-Legendre rule of the given order (cached, thread safe).
const GaussRule& gauss_legendre(int order);

// Composite Gauss-Legendre over `panels` equal panels of [a, b].
// Works for any F whose result supports + and scalar *.
template <class F>
auto integrate_panels(F&& f, double a, double b, int panels, int order = 16) {
  const GaussRule& g = gauss_legendre(order);
  const double w = (b - a) / panels;
  using R = decltype(f(a));
  R sum{};
  for (int p = 0; p < panels; ++p) {
    const double lo = a + p * w;
    const double mid = lo + 0.5 * w;
    for (int i = 0; i < order; ++i) sum += (0.5 * w * g.weights[i]) * f(mid + 0.5 * w * g.nodes[i]);
  }
  return sum;
}

template <class R>
struct QuadratureResult {
  R value{};
  double error = 0.0;  // |fine - coarse|
  int panels = 0;
};

// Panel rule sized so no panel is wider than max_width; the error estimate
// compares against the rule on half as many panels.
template <class F>
auto integrate_with_estimate(F&& f, double a, double b, double max_width, int order = 16) {
  int panels = std::max(2, static_cast<int>(std::ceil((b - a) / max_width)));
  if (panels % 2) ++panels;
  using R = decltype(f(a));
  QuadratureResult<R> out;
  out.value = integrate_panels(f, a, b, panels, order);
  R coarse = integrate_panels(f, a, b, panels / 2, order);
  out.error = std::abs(out.value - coarse);
  out.panels = panels;
  return out;
}

}  // namespace qlab
