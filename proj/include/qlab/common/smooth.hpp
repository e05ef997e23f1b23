#pragma once

namespace qlab {

// exp(-1/(1-t^2)) on (-1, 1), zero outside.
double mollifier(double t);

// C-infinity step: 0 for t <= 0, 1 for t >= 1. Normalized running integral
// of the mollifier rescaled to [0, 1], tabulated once and evaluated by
// cubic Hermite interpolation with exact node derivatives.
double smooth_step(double t);

// Radial cutoff equal to 1 on [0, inner] and 0 beyond outer.
double plateau_cutoff(double r, double inner, double outer);

}  // namespace qlab
