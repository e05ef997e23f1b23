#include "qlab/spectral/projector.hpp"

#include <algorithm>
#include <cmath>

#include "qlab/common/errors.hpp"

namespace qlab::spectral {

namespace {

CoefficientVector mask(const SpectralBasis& b, const CoefficientVector& f, auto&& keep) {
  CoefficientVector out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j)
    if (keep(b.eigenvalue(j))) out.c[j] = f.c[j];
  return out;
}

void check_support(const SpectralBasis& b, const CoefficientVector& f) {
  if (f.size() > b.size()) throw DomainError("coefficient vector longer than the basis");
}

}  // namespace

ProjectorNorm projector_sup_norm(const SpectralBasis& basis, const WindowSpec& window,
                                 const std::optional<SampleGrid>& grid, Execution exec) {
  if (std::isfinite(window.hi) && window.hi > basis.max_eigenvalue() * (1.0 + 1e-12))
    throw DomainError("window reaches past the computed spectrum");
  const auto [first, last] = window.index_range(basis);
  ProjectorNorm out;
  out.count = last - first;
  if (last == first) return out;
  const SampleGrid g = grid ? *grid : basis.sample_grid(std::max(basis.eigenvalue(last - 1), 1.0));
  std::vector<double> vals(g.size);
  for_each_index(g.size, exec, [&](std::size_t i) { vals[i] = basis.density(first, last, g.point(i)); });
  const auto it = std::max_element(vals.begin(), vals.end());
  out.value = std::sqrt(std::max(0.0, *it));
  out.argmax = g.point(static_cast<std::size_t>(it - vals.begin()));
  return out;
}

Lemma2Report lemma2_check(const SpectralBasis& basis, const CoefficientVector& f, double lambda, double delta,
                          std::optional<std::vector<int>> band_ks, Execution exec) {
  check_support(basis, f);
  if (!(lambda > 0.0 && delta > 0.0 && delta <= 1.0)) throw DomainError("lemma2_check needs lambda > 0, 0 < delta <= 1");
  Lemma2Report r;
  r.lambda = lambda;
  r.delta = delta;
  const double growth = std::pow(lambda, 0.5 * (basis.dim() - 1));
  r.helmholtz = helmholtz_norm(basis, f, lambda);

  const CoefficientVector near = mask(basis, f, [&](double l) {
    const double d = std::abs(l - lambda);
    return d > delta && d <= 1.0;
  });
  const CoefficientVector mid = mask(basis, f, [&](double l) { return std::abs(l - lambda) > 1.0 && l < 2.0 * lambda; });
  r.near_lhs = sup_norm(basis, near, exec).value;
  r.near_scale = growth / (lambda * delta) * r.helmholtz;
  r.mid_lhs = sup_norm(basis, mid, exec).value;
  r.mid_scale = growth / lambda * r.helmholtz;

  if (!band_ks) {
    band_ks.emplace();
    for (int k = 1; k < lambda; k *= 2) band_ks->push_back(k);
  }
  for (int k : *band_ks) {
    if (lambda + k + 1.0 > basis.max_eigenvalue()) break;
    const WindowSpec w = WindowSpec::unit_band(lambda + k);
    const CoefficientVector band = apply_window(basis, w, f);
    BandEstimate e;
    e.k = k;
    e.lhs = sup_norm(basis, band, exec).value;
    e.scale = growth / (lambda * k) * helmholtz_norm(basis, band, lambda);
    e.ratio = e.scale > 0.0 ? e.lhs / e.scale : 0.0;
    r.bands.push_back(e);
  }
  return r;
}

Admissibility admissibility_check(const SpectralBasis& basis, const CoefficientVector& f, double lambda,
                                  Execution exec) {
  check_support(basis, f);
  Admissibility a;
  a.helmholtz = helmholtz_norm(basis, f, lambda);
  a.high_sup = sup_norm(basis, apply_window(basis, WindowSpec::high_pass(2.0 * lambda), f), exec).value;
  a.l2 = f.l2_norm();
  return a;
}

}  // namespace qlab::spectral
