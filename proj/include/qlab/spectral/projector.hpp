#pragma once

#include <optional>
#include <vector>

#include "qlab/spectral/basis.hpp"

namespace qlab::spectral {

struct ProjectorNorm {
  double value = 0.0;  // sqrt of the grid sup of sum_window |e_j(x)|^2
  Vec argmax;
  std::size_t count = 0;  // eigenfunctions in the window
};

// L^2 -> L^infinity norm of the spectral window projector. The grid defaults
// to the basis sample grid at the top of the window. Windows reaching past
// the computed spectrum are rejected.
ProjectorNorm projector_sup_norm(const SpectralBasis& basis, const WindowSpec& window,
                                 const std::optional<SampleGrid>& grid = std::nullopt,
                                 Execution exec = Execution::Parallel);

struct BandEstimate {
  int k = 0;
  double lhs = 0.0;     // ||Pi_[lambda+k, lambda+k+1) f||_inf
  double scale = 0.0;   // lambda^{(n-1)/2} (lambda k)^{-1} ||Pi (Delta + lambda^2) f||_2
  double ratio = 0.0;   // lhs / scale, or 0 when both vanish
};

struct Lemma2Report {
  double lambda = 0.0, delta = 0.0;
  double helmholtz = 0.0;   // ||(Delta + lambda^2) f||_2
  double near_lhs = 0.0;    // ||chi^1 (I - chi^delta) f||_inf
  double near_scale = 0.0;  // lambda^{(n-1)/2} (lambda delta)^{-1} ||(Delta + lambda^2) f||_2
  double mid_lhs = 0.0;     // ||(I - chi^1) S_{2 lambda} f||_inf
  double mid_scale = 0.0;   // lambda^{(n-1)/2} lambda^{-1} ||(Delta + lambda^2) f||_2
  std::vector<BandEstimate> bands;
  double near_ratio() const { return near_scale > 0.0 ? near_lhs / near_scale : 0.0; }
  double mid_ratio() const { return mid_scale > 0.0 ? mid_lhs / mid_scale : 0.0; }
};

// chi^delta_lambda = chi_[lambda - delta, lambda + delta]. Band estimates are
// computed for the listed k (nullopt: k = 1, 2, 4, ... below lambda; an
// empty list skips them).
Lemma2Report lemma2_check(const SpectralBasis& basis, const CoefficientVector& f, double lambda, double delta,
                          std::optional<std::vector<int>> band_ks = std::nullopt,
                          Execution exec = Execution::Parallel);

struct Admissibility {
  double helmholtz = 0.0;  // ||(Delta + lambda^2) f||_2
  double high_sup = 0.0;   // ||S^perp_{2 lambda} f||_inf
  double l2 = 0.0;         // ||f||_2
};

Admissibility admissibility_check(const SpectralBasis& basis, const CoefficientVector& f, double lambda,
                                  Execution exec = Execution::Parallel);

}  // namespace qlab::spectral
