#pragma once

#include <cstddef>
#include <span>

namespace qlab {

// y ~ prefactor * x^exponent by least squares on (log x, log y).
struct PowerLawFit {
  double exponent = 0.0;
  double exponent_stderr = 0.0;
  double prefactor = 0.0;
  double residual_norm = 0.0;  // l2 norm of log residuals
  std::size_t points = 0;
};

// Throws DomainError on nonpositive input, PreconditionError for fewer than
// min_points pairs.
PowerLawFit fit_power_law(std::span<const double> x, std::span<const double> y,
                          std::size_t min_points = 5);

// Ordinary least squares y ~ a + b x. Returns {a, b}.
struct LineFit {
  double intercept = 0.0;
  double slope = 0.0;
  double slope_stderr = 0.0;
};
LineFit fit_line(std::span<const double> x, std::span<const double> y);

}  // namespace qlab
