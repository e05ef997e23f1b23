#include "qlab/common/fit.hpp"

#include <cmath>
#include <vector>

#include "qlab/common/errors.hpp"

namespace qlab {

LineFit fit_line(std::span<const double> x, std::span<const double> y) {
  const std::size_t n = x.size();
  if (n != y.size()) throw DomainError("fit_line: size mismatch");
  if (n < 2) throw PreconditionError("fit_line: need at least 2 points");
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (y[i] - my);
  }
  if (sxx == 0.0) throw DomainError("fit_line: degenerate abscissae");
  LineFit f;
  f.slope = sxy / sxx;
  f.intercept = my - f.slope * mx;
  double ssr = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double r = y[i] - f.intercept - f.slope * x[i];
    ssr += r * r;
  }
  f.slope_stderr = n > 2 ? std::sqrt(ssr / (n - 2) / sxx) : 0.0;
  return f;
}

PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y,
                          std::size_t min_points) {
  if (x.size() != y.size()) throw DomainError("fit_power_law: size mismatch");
  if (x.size() < min_points)
    throw PreconditionError("fit_power_law: need at least " + std::to_string(min_points) + " points");
  std::vector<double> lx(x.size()), ly(y.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0)) throw DomainError("fit_power_law: nonpositive value");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  const LineFit lf = fit_line(lx, ly);
  PowerLawFit out;
  out.exponent = lf.slope;
  out.exponent_stderr = lf.slope_stderr;
  out.prefactor = std::exp(lf.intercept);
  double ssr = 0;
  for (std::size_t i = 0; i < lx.size(); ++i) {
    const double r = ly[i] - lf.intercept - lf.slope * lx[i];
    ssr += r * r;
  }
  out.residual_norm = std::sqrt(ssr);
  out.points = lx.size();
  return out;
}

}  // namespace qlab
