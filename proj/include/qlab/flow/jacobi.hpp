#pragma once

#include <vector>

#include "qlab/flow/trajectory.hpp"

namespace qlab::flow {

// Matrix Jacobi field J'' = -K J with J(0) = 0, J'(0) = I along a geodesic,
// in a parallel orthonormal frame of the normal bundle.
class JacobiSolution {
 public:
  JacobiSolution(int position_size, int m, std::vector<ode::DenseStep> steps);
  double t_end() const { return steps_.empty() ? 0.0 : steps_.back().t1(); }
  Mat J(double t) const;
  Mat Jdot(double t) const;
  const std::vector<ode::DenseStep>& steps() const { return steps_; }
  int normal_dim() const { return m_; }

 private:
  const ode::DenseStep& step_at(double t) const;
  int P_, m_;
  std::vector<ode::DenseStep> steps_;
};

JacobiSolution solve_jacobi(const Manifold& model, const Vec& z, const Vec& xi, double T,
                            const GeodesicTolerance& tol = {});

struct ConjugatePoint {
  double time = 0.0;
  int multiplicity = 0;
};

struct ConjugacyReport {
  std::vector<ConjugatePoint> points;  // in (0, T]
  int beta = 0;                        // sum of multiplicities
  bool endpoint_degenerate = false;    // a conjugate point sits at T
  double T = 0.0;
};

// Conjugate points of z along the geodesic in direction xi on (0, T],
// counted through the eigenphases of (J - iJ')(J + iJ')^{-1}.
ConjugacyReport jacobi_conjugate_points(const Manifold& model, const Vec& z, const Vec& xi, double T,
                                        const GeodesicTolerance& tol = {});

// Morse index of the loops at a blow-down point with common return time T,
// checked on `sample_count` directions. PreconditionError if some sampled
// direction does not return at T; InconsistencyError if indices disagree.
int morse_index_of_blowdown(const Manifold& model, const Vec& z, double T, std::size_t sample_count = 8);

}  // namespace qlab::flow
