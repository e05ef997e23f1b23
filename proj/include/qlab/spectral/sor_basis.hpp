#pragma once

#include <string>
#include <vector>

#include "qlab/geometry/profile.hpp"
#include "qlab/spectral/basis.hpp"

namespace qlab::spectral {

struct SorOptions {
  // Radial intervals; 0 picks max(4000, ceil(100 lambda_max L / pi)).
  int intervals = 0;
  // Re-solve at twice the resolution and require every eigenvalue to move
  // by at most `resolution_tol` relative.
  bool check_resolution = true;
  double resolution_tol = 1e-4;
  // Guard on stored eigenvector entries.
  double max_entries = 5e7;
};

// Separated eigenbasis U(s) e^{i m theta} / sqrt(2 pi) of ds^2 + f(s)^2 dtheta^2.
// The radial operator -(f u')'/f + m^2 u / f^2 is discretized by finite
// volumes on a uniform vertex grid: control-volume weights W_i = int f,
// interface fluxes f(s_{i+1/2}) / h and potential m^2 int 1/f. The flux
// vanishes at the poles; m != 0 modes are pinned to zero there.
// Points are (s, theta) with s in [0, L].
class SorBasis final : public SpectralBasis, public ZonalBasis {
 public:
  // m_max < 0 collects every angular mode with eigenvalues below lambda_max.
  SorBasis(geometry::Profile profile, int m_max, double lambda_max, SorOptions opts = {});

  int dim() const override { return 2; }
  std::string provenance() const override;
  double volume() const override { return volume_; }
  const geometry::Profile& profile_model() const { return profile_; }
  int angular(std::size_t j) const { return entries_[j].m; }
  int intervals() const { return intervals_; }
  double lambda_max() const { return lambda_max_; }
  int m_max() const { return m_max_; }
  // Largest relative eigenvalue change seen by the resolution check.
  double resolution_change() const { return resolution_change_; }

  cplx evaluate(std::size_t j, const Vec& x) const override;
  cplx evaluate_sum(const CoefficientVector& f, const Vec& x) const override;
  SampleGrid sample_grid(double lambda) const override;
  std::vector<Vec> neighbourhood(const Vec& x, double h, int radius) const override;

  std::vector<std::size_t> zonal_indices() const override;
  double zonal_value(std::size_t j, double s) const override;
  double meridian_length() const override { return profile_.length(); }
  double profile(double s) const override;
  std::vector<double> zonal_coefficients(const std::function<double(double)>& u) const override;
  double zonal_mass(const std::function<double(double)>& u) const override;

  // Radial nodes, control-volume weights and the radial values U_j at the nodes.
  const std::vector<double>& nodes() const { return nodes_; }
  const std::vector<double>& weights() const { return weights_; }
  std::vector<double> radial_values(std::size_t j) const;

  // Binary cache keyed by profile parameters, m_max, lambda_max and resolution.
  std::string cache_key() const;
  void save(const std::string& path) const;
  // Loads `path` if its key matches, otherwise solves and writes it.
  static SorBasis cached(const geometry::Profile& profile, int m_max, double lambda_max, const std::string& dir,
                         SorOptions opts = {});

 private:
  SorBasis() = default;
  struct Entry {
    int m = 0;
    std::size_t block = 0;  // index into blocks_
    std::size_t column = 0;
  };
  struct Block {
    int m = 0;
    std::size_t offset = 0;  // first node index used by this block
    std::size_t rows = 0;
    std::vector<double> mu;   // Laplace eigenvalues
    std::vector<double> vec;  // column-major rows x mu.size(), values U at nodes
  };
  static Block solve_block(const geometry::Profile& p, int m, int intervals, double mu_max, bool vectors);
  void assemble(double lambda_max);
  double radial(std::size_t j, double s) const;
  static std::string key_for(const geometry::Profile& p, int m_max, double lambda_max, int intervals);

  geometry::Profile profile_ = geometry::Profile::sine();
  int m_requested_ = 0;
  int m_max_ = 0;
  int intervals_ = 0;
  double lambda_max_ = 0.0;
  double volume_ = 0.0;
  double f_max_ = 1.0;
  double resolution_change_ = 0.0;
  std::vector<double> nodes_, weights_;
  std::vector<Block> blocks_;
  std::vector<Entry> entries_;
};

}  // namespace qlab::spectral
