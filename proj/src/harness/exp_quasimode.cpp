// Quasimode experiments: tables at a blow-down point, growth fits, the
// stationary phase discrepancy and the L^2 normalization constant.

#include <algorithm>
#include <memory>

#include <Eigen/Dense>

#include "qlab/common/errors.hpp"
#include "qlab/dynamics/classify.hpp"
#include "qlab/flow/jacobi.hpp"
#include "qlab/quasimode/quasimode.hpp"
#include "qlab/spectral/sor_basis.hpp"
#include "qlab/spectral/sphere_basis.hpp"
#include "support.hpp"

namespace qlab::harness {

namespace {

using namespace geometry;
using namespace quasimode;
using detail::describe;

struct KRange {
  int k_min, k_max, stride;
};

KRange read_k_range(const Config& cfg, long k_min, long k_max) {
  KRange r;
  r.k_min = static_cast<int>(cfg.get_int("params.k_min", k_min, 0, 1000000));
  r.k_max = static_cast<int>(cfg.get_int("params.k_max", k_max, 0, 1000000));
  r.stride = static_cast<int>(cfg.get_int("params.stride", 1, 1, 1000000));
  return r;
}

void check_k_range(const KRange& r) {
  if (r.k_max < r.k_min) throw ConfigError("params.k_max < params.k_min: empty k range");
}

std::unique_ptr<spectral::SpectralBasis> zonal_basis(const Manifold& m, double lambda_max) {
  if (dynamic_cast<const RoundSphere*>(&m) && m.dim() == 2)
    return std::make_unique<spectral::SphereBasis>(static_cast<int>(std::ceil(lambda_max)));
  if (const auto* r = dynamic_cast<const SurfaceOfRevolution*>(&m))
    return std::make_unique<spectral::SorBasis>(r->profile(), 0, lambda_max);
  throw UnsupportedError("residual needs a zonal eigenbasis (sphere or surface of revolution)");
}

// Table of r_k, |Phi_k(z)| and C_k at a blow-down point, with the residual
// against a zonal eigenbasis when requested.
void run_quasimode(const Config& cfg, Session& s) {
  const ModelSpec spec = cfg.model("sphere");
  const ModelPtr m = make_model(spec);
  const Vec z = resolve_point(*m, cfg.point("pole"));
  const KRange kr = read_k_range(cfg, 10, 100);
  const double R = cfg.get_double("params.R", 2.0, 1.0 + 1e-9, 100.0);
  const double eps0 = cfg.get_double("params.eps0", 0.5, 1e-6, 10.0);
  const bool residual = cfg.get_bool("params.residual", false);
  const double margin = cfg.get_double("params.basis_margin", 40.0, 0.0, 1e4);
  const dynamics::SweepParams p = detail::read_sweep(cfg, s, 16, 7.0);
  s.set_model(describe(spec));
  s.begin();
  check_k_range(kr);

  const auto pc = dynamics::classify_point(*m, z, p);
  if (pc.cls != dynamics::PointClass::BlowDown)
    throw PreconditionError(std::string("quasimodes need a blow-down point; got ") + dynamics::to_string(pc.cls));
  const double T = pc.mean_return_time;
  const int beta = flow::morse_index_of_blowdown(*m, z, T);
  std::unique_ptr<spectral::SpectralBasis> basis;
  if (residual) basis = zonal_basis(*m, frequency(T, beta, kr.k_max) + margin);

  CsvWriter w = s.table("", {"k", "r_k", "hbar", "phi_at_z", "C_k", "normalized", "residual"});
  for (int k = kr.k_min; k <= kr.k_max; k += kr.stride) {
    QuasimodeSpec q = QuasimodeSpec::make(m->dim(), T, beta, k);
    q.R = R;
    q.eps0 = eps0;
    if (!(q.r() > 0.0)) continue;
    const double at_z = std::abs(quasimode_eval(q, Vec::Zero(m->dim())).value);
    const L2Normalization norm = l2_normalize(q);
    const double res = basis ? residual_norm(q, *basis).residual : 0.0;
    w.row({static_cast<long>(k), q.r(), q.hbar(), at_z, norm.total, at_z / std::sqrt(norm.total), res});
  }
  s.metric("T", T);
  s.metric("beta", beta);
}

// Normalized |Phi_k(z)| against r_k, fitted exponent and constancy of
// |Phi_k(z)| / r_k^{(n-1)/2}.
void run_growth(const Config& cfg, Session& s) {
  const ModelSpec spec = cfg.model("sor");
  const ModelPtr m = make_model(spec);
  const Vec z = resolve_point(*m, cfg.point("pole"));
  const KRange kr = read_k_range(cfg, 20, 200);
  GrowthOptions o;
  o.R = cfg.get_double("params.R", 2.0, 1.0 + 1e-9, 100.0);
  o.eps0 = cfg.get_double("params.eps0", 0.5, 1e-6, 10.0);
  o.stride = kr.stride;
  o.sweep = detail::read_sweep(cfg, s, 16, 7.0);
  s.set_model(describe(spec));
  s.begin();
  check_k_range(kr);

  const GrowthFit g = sup_growth(*m, z, kr.k_min, kr.k_max, o);
  const double half = 0.5 * (m->dim() - 1);
  std::vector<double> scaled;
  CsvWriter w = s.table("", {"k", "r_k", "normalized_phi_at_z", "C_k", "scaled"});
  for (std::size_t i = 0; i < g.k.size(); ++i) {
    scaled.push_back(g.value[i] / std::pow(g.r[i], half));
    w.row({static_cast<long>(g.k[i]), g.r[i], g.value[i], g.norm[i], scaled.back()});
  }
  double mean = 0.0;
  for (double v : scaled) mean += v / scaled.size();
  double dev = 0.0;
  for (double v : scaled) dev = std::max(dev, std::abs(v / mean - 1.0));
  const auto [lo, hi] = std::minmax_element(scaled.begin(), scaled.end());
  s.metric("T", g.T);
  s.metric("beta", g.beta);
  s.metric("exponent", g.fit.exponent);
  s.metric("exponent_stderr", g.fit.exponent_stderr);
  s.metric("prefactor", g.fit.prefactor);
  s.metric("fit_residual", g.fit.residual_norm);
  s.metric("scaled_mean", mean);
  s.metric("scaled_max_relative_deviation", dev);
  s.metric("scaled_spread", *hi / *lo - 1.0);
}

// Envelope of quasimode_eval - stationary_phase_approx at fixed |x| while
// h halves.
void run_stationary_phase(const Config& cfg, Session& s) {
  const std::vector<double> radii = cfg.get_doubles("params.radii", {0.1, 0.2});
  const long k0 = cfg.get_int("params.k0", 100, 1, 1000000);
  const long halvings = cfg.get_int("params.halvings", 4, 1, 12);
  const long samples = cfg.get_int("params.samples", 64, 4, 100000);
  const double T = cfg.get_double("params.T", 2.0 * kPi, 1e-6, 1e6);
  const long beta = cfg.get_int("params.beta", 2, 0, 1000);
  const long n = cfg.get_int("params.n", 2, 2, 3);
  s.set_model("local model: T and beta only");
  s.begin();

  CsvWriter w = s.table("", {"rho", "k", "hbar", "envelope", "ratio_to_previous"});
  double lo = 1e300, hi = -1e300;
  for (double rho : radii) {
    double prev = 0.0;
    for (long j = 0; j <= halvings; ++j) {
      const int k = static_cast<int>(k0 << j);
      const QuasimodeSpec q = QuasimodeSpec::make(static_cast<int>(n), T, static_cast<int>(beta), k);
      const double d = stationary_phase_envelope(q, rho, static_cast<int>(samples));
      const double ratio = prev > 0.0 ? prev / d : 0.0;
      if (prev > 0.0) {
        lo = std::min(lo, ratio);
        hi = std::max(hi, ratio);
      }
      w.row({rho, static_cast<long>(k), q.hbar(), d, ratio});
      prev = d;
    }
  }
  s.metric("min_halving_ratio", lo);
  s.metric("max_halving_ratio", hi);
}

// C_k against C_inf + A h + B h^2 and the decay rate of the dyadic block
// envelopes of |C_k - C_inf|.
void run_l2_normalization(const Config& cfg, Session& s) {
  const KRange kr = read_k_range(cfg, 20, 640);
  const double T = cfg.get_double("params.T", 2.0 * kPi, 1e-6, 1e6);
  const long beta = cfg.get_int("params.beta", 2, 0, 1000);
  const long n = cfg.get_int("params.n", 2, 2, 3);
  const double delta_ann = cfg.get_double("params.delta_ann", 0.75, 0.0, 1.0);
  const double R = cfg.get_double("params.R", 2.0, 1.0 + 1e-9, 100.0);
  const double eps0 = cfg.get_double("params.eps0", 0.5, 1e-6, 10.0);
  s.set_model("local model: T and beta only");
  s.begin();
  check_k_range(kr);

  std::vector<int> ks;
  std::vector<double> h, c;
  std::vector<QuasimodeSpec> specs;
  for (int k = kr.k_min; k <= kr.k_max; k += kr.stride) {
    QuasimodeSpec q = QuasimodeSpec::make(static_cast<int>(n), T, static_cast<int>(beta), k);
    q.delta_ann = delta_ann;
    q.R = R;
    q.eps0 = eps0;
    q.validate();
    ks.push_back(k);
    specs.push_back(q);
  }
  c.resize(specs.size());
  for_each_index(specs.size(), s.exec(), [&](std::size_t i) { c[i] = l2_normalize(specs[i]).total; });
  for (const auto& q : specs) h.push_back(q.hbar());
  if (ks.size() < 5) throw ConfigError("params: need at least 5 values of k");

  Eigen::MatrixXd A(ks.size(), 3);
  Eigen::VectorXd b(ks.size());
  for (std::size_t i = 0; i < ks.size(); ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = h[i];
    A(i, 2) = h[i] * h[i];
    b(i) = c[i];
  }
  const Eigen::Vector3d coef = A.colPivHouseholderQr().solve(b);
  const double c_inf = coef(0);

  CsvWriter w = s.table("", {"k", "hbar", "C_k", "abs_deviation"});
  for (std::size_t i = 0; i < ks.size(); ++i) w.row({static_cast<long>(ks[i]), h[i], c[i], std::abs(c[i] - c_inf)});

  // Dyadic blocks [k0 2^j, k0 2^{j+1}).
  std::vector<double> block_h, block_env;
  CsvWriter bw = s.table("blocks", {"k_start", "hbar_start", "envelope"});
  for (long start = kr.k_min; start <= kr.k_max; start *= 2) {
    double env = 0.0;
    for (std::size_t i = 0; i < ks.size(); ++i)
      if (ks[i] >= start && ks[i] < 2 * start) env = std::max(env, std::abs(c[i] - c_inf));
    if (env > 0.0 && 2 * start - 1 <= kr.k_max) {
      const double r_start = frequency(T, static_cast<int>(beta), static_cast<int>(start));
      block_h.push_back(1.0 / r_start);
      block_env.push_back(env);
      bw.row({start, 1.0 / r_start, env});
    }
    if (start == 0) break;
  }
  const QuasimodeSpec ref = specs.front();
  const double dprime = std::min(1.0 - (1.0 - delta_ann) * n, delta_ann);
  const auto [cp, cm] = stationary_phase_constants(ref);
  const double sphere = n == 2 ? 2.0 * kPi : 4.0 * kPi;
  s.metric("C_inf_fit", c_inf);
  s.metric("C_inf_leading", sphere * (std::norm(cp) + std::norm(cm)) * eps0);
  s.metric("fit_A", coef(1));
  s.metric("fit_B", coef(2));
  s.metric("delta_prime", dprime);
  if (block_h.size() >= 2) {
    std::vector<double> lx, ly;
    for (std::size_t i = 0; i < block_h.size(); ++i) {
      lx.push_back(std::log(block_h[i]));
      ly.push_back(std::log(block_env[i]));
    }
    s.metric("rate_exponent", fit_line(lx, ly).slope);
  } else {
    throw ConfigError("params: k range spans fewer than two complete dyadic blocks");
  }
}

}  // namespace

void register_quasimode_experiments(std::vector<ExperimentInfo>& out) {
  out.push_back({"quasimode", "r_k, |Phi_k(z)|, C_k and optional residual at a blow-down point", run_quasimode});
  out.push_back({"growth", "growth of the normalized quasimode at a blow-down point", run_growth});
  out.push_back({"stationary-phase", "halving of the stationary phase discrepancy at fixed |x|", run_stationary_phase});
  out.push_back({"l2-normalization", "convergence rate of the L^2 normalization constant", run_l2_normalization});
}

}  // namespace qlab::harness
