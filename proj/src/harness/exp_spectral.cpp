// Spectral experiments: zonal growth on the sphere, window projector norms,
// the near and mid window inequalities on the torus and smoothed cap sums.

#include <algorithm>
#include <memory>
#include <random>

#include "qlab/common/errors.hpp"
#include "qlab/spectral/kernels.hpp"
#include "qlab/spectral/projector.hpp"
#include "qlab/spectral/sor_basis.hpp"
#include "qlab/spectral/sphere_basis.hpp"
#include "qlab/spectral/torus_basis.hpp"
#include "support.hpp"

namespace qlab::harness {

namespace {

using namespace geometry;
using namespace spectral;
using detail::describe;

std::unique_ptr<SpectralBasis> make_basis(const Manifold& m, double lambda_max) {
  if (const auto* t = dynamic_cast<const FlatTorus*>(&m)) return std::make_unique<TorusBasis>(t->lattice(), lambda_max);
  if (dynamic_cast<const RoundSphere*>(&m) && m.dim() == 2)
    return std::make_unique<SphereBasis>(static_cast<int>(std::ceil(lambda_max)) + 1);
  if (const auto* r = dynamic_cast<const SurfaceOfRevolution*>(&m))
    return std::make_unique<SorBasis>(r->profile(), -1, lambda_max);
  throw UnsupportedError("no eigenbasis for " + m.description());
}

std::vector<double> lambda_grid(const Config& cfg, double lo, double hi, double step) {
  const double a = cfg.get_double("params.lambda_min", lo, 0.0, 1e5);
  const double b = cfg.get_double("params.lambda_max", hi, 0.0, 1e5);
  const double h = cfg.get_double("params.lambda_step", step, 1e-6, 1e5);
  if (b < a) throw ConfigError("params.lambda_max < params.lambda_min: empty lambda range");
  std::vector<double> out;
  for (long i = 0;; ++i) {
    const double v = a + i * h;
    if (v > b + 1e-9 * h) break;
    out.push_back(v);
  }
  return out;
}

double log_slope(const std::vector<double>& x, const std::vector<double>& y) {
  std::vector<double> lx, ly;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!(y[i] > 0.0)) throw NumericalError("log slope of a nonpositive series");
    lx.push_back(std::log(x[i]));
    ly.push_back(std::log(y[i]));
  }
  return fit_line(lx, ly).slope;
}

// sup |Y_l0| against lambda_l = sqrt(l (l + 1)) and the closed form
// sqrt((2l + 1) / 4 pi) attained at the poles.
void run_sphere_zonal(const Config& cfg, Session& s) {
  const long l_min = cfg.get_int("params.l_min", 10, 0, 400);
  const long l_max = cfg.get_int("params.l_max", 200, 0, 400);
  s.set_model("sphere n=2 radius=1");
  s.begin();
  if (l_max < l_min) throw ConfigError("params.l_max < params.l_min: empty degree range");

  const SphereBasis b(static_cast<int>(l_max));
  CsvWriter w = s.table("", {"l", "lambda", "sup_abs_Y_l0", "closed_form", "argmax_s"});
  std::vector<std::pair<double, double>> pairs;
  double worst = 0.0;
  for (long l = l_min; l <= l_max; ++l) {
    const std::size_t j = SphereBasis::index(static_cast<int>(l), 0);
    const SupResult r = zonal_sup(b, j, s.exec());
    const double closed = std::sqrt((2.0 * l + 1.0) / (4.0 * kPi));
    w.row({l, b.eigenvalue(j), r.value, closed, r.argmax(0)});
    pairs.emplace_back(b.eigenvalue(j), r.value);
    worst = std::max(worst, std::abs(r.value / closed - 1.0));
  }
  const FitResult fit = fit_exponent(pairs);
  s.metric("exponent", fit.exponent);
  s.metric("exponent_stderr", fit.exponent_stderr);
  s.metric("prefactor", fit.prefactor);
  s.metric("fit_residual", fit.residual_norm);
  s.metric("prefactor_reference", 1.0 / std::sqrt(2.0 * kPi));
  s.metric("max_relative_closed_form_error", worst);
}

// Table of projector_sup_norm over (lambda, delta) windows.
void run_projector(const Config& cfg, Session& s) {
  const ModelSpec spec = cfg.model("torus");
  const ModelPtr m = make_model(spec);
  const std::vector<double> lambdas = lambda_grid(cfg, 50.0, 300.0, 25.0);
  const std::vector<double> deltas = cfg.get_doubles("params.deltas", {0.1, 0.5, 1.0});
  const std::string kind = cfg.get_string("params.window", "sharp");
  s.set_model(describe(spec));
  s.begin();
  if (kind != "sharp" && kind != "symmetric") throw ConfigError("params.window: expected sharp or symmetric");
  for (double d : deltas)
    if (!(d > 0.0)) throw ConfigError("params.deltas: window widths must be positive");

  const double top = lambdas.back() + *std::max_element(deltas.begin(), deltas.end()) + 1.0;
  const auto basis = make_basis(*m, top);
  const double growth = m->dim() - 1.0;
  CsvWriter w = s.table("", {"lambda", "delta", "sup_norm", "count", "sup2_over_lambda", "sup2_over_delta_lambda"});
  double c_max = 0.0;
  for (double d : deltas) {
    for (double lam : lambdas) {
      const WindowSpec win = kind == "sharp" ? WindowSpec::sharp(lam, d) : WindowSpec::symmetric(lam, d);
      const ProjectorNorm p = projector_sup_norm(*basis, win, std::nullopt, s.exec());
      const double sq = p.value * p.value, scale = std::pow(lam, growth);
      w.row({lam, d, p.value, static_cast<long>(p.count), sq / scale, sq / (d * scale)});
      c_max = std::max(c_max, sq / (d * scale));
    }
  }
  s.metric("fitted_C", c_max);
}

// Torus window norms against C delta lambda, and the sphere at windows that
// capture one eigenvalue cluster.
void run_window_dichotomy(const Config& cfg, Session& s) {
  const std::vector<double> lambdas = lambda_grid(cfg, 50.0, 300.0, 25.0);
  const std::vector<double> deltas = cfg.get_doubles("params.deltas", {0.1, 0.5, 1.0});
  const double side = cfg.get_double("params.side", 2.0 * kPi, 1e-3, 1e3);
  s.set_model("square torus side=" + format_cell(side) + "; round sphere radius=1");
  s.begin();
  for (double d : deltas)
    if (!(d > 0.0 && d < 1.0 + 1e-12)) throw ConfigError("params.deltas: window widths must lie in (0, 1]");
  if (lambdas.size() < 2) throw ConfigError("params: the lambda grid needs at least two points for a slope");

  const double top = lambdas.back() + 2.0;
  const TorusBasis torus = TorusBasis::square(side, top);
  const SphereBasis sphere(static_cast<int>(std::ceil(top)) + 1);
  CsvWriter w = s.table("", {"model", "lambda", "delta", "l", "sup_norm", "count", "sup2_over_delta_lambda",
                             "sup2_over_cluster_size"});
  double c_torus = 0.0;
  std::vector<double> per_lambda_max(lambdas.size(), 0.0);
  for (double d : deltas) {
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      const double lam = lambdas[i];
      const ProjectorNorm p = projector_sup_norm(torus, WindowSpec::sharp(lam, d), std::nullopt, s.exec());
      const double r = p.value * p.value / (d * lam);
      w.row({std::string("torus"), lam, d, -1L, p.value, static_cast<long>(p.count), r, 0.0});
      c_torus = std::max(c_torus, r);
      per_lambda_max[i] = std::max(per_lambda_max[i], r);
    }
  }
  // Sphere: the window [lambda_l - delta/2, lambda_l + delta/2] around the
  // cluster nearest lambda.
  double sphere_min = 1e300, excess_min = 1e300;
  const double d_min = *std::min_element(deltas.begin(), deltas.end());
  for (double d : deltas) {
    for (double lam : lambdas) {
      const int l = static_cast<int>(std::lround(std::sqrt(lam * lam + 0.25) - 0.5));
      const double ll = std::sqrt(l * (l + 1.0));
      const WindowSpec win = WindowSpec::interval(ll - 0.5 * d, ll + 0.5 * d, true, true);
      const ProjectorNorm p = projector_sup_norm(sphere, win, std::nullopt, s.exec());
      const double sq = p.value * p.value;
      const double r = sq / (d * ll);
      w.row({std::string("sphere"), ll, d, static_cast<long>(l), p.value, static_cast<long>(p.count), r,
             sq / (2.0 * l + 1.0)});
      sphere_min = std::min(sphere_min, sq / (2.0 * l + 1.0));
      if (d == d_min) excess_min = std::min(excess_min, r);
    }
  }
  s.metric("torus_fitted_C", c_torus);
  s.metric("torus_weyl_density", 1.0 / (2.0 * kPi));
  s.metric("torus_ratio_log_slope", log_slope(lambdas, per_lambda_max));
  s.metric("sphere_min_cluster_ratio", sphere_min);
  s.metric("sphere_cluster_reference", 1.0 / (4.0 * kPi));
  s.metric("sphere_over_torus_C_at_min_delta", excess_min / c_torus);
}

// Random coefficient vectors g_j (1 + |lambda_j - lambda|)^{-p}, complex
// Gaussian g_j, on a square torus; near and mid inequality ratios.
void run_lemma2(const Config& cfg, Session& s) {
  // lambda_min / lambda_max are shorthand for a two-point list.
  std::vector<double> lambdas;
  if (cfg.has("params.lambda_min") || cfg.has("params.lambda_max")) {
    if (cfg.has("params.lambdas")) throw ConfigError("params.lambdas conflicts with params.lambda_min/lambda_max");
    const double lo = cfg.get_double("params.lambda_min", 100.0), hi = cfg.get_double("params.lambda_max", 200.0);
    if (hi < lo) throw ConfigError("params.lambda_max < params.lambda_min");
    lambdas = hi > lo ? std::vector<double>{lo, hi} : std::vector<double>{lo};
  } else {
    lambdas = cfg.get_doubles("params.lambdas", {100.0, 200.0});
  }
  const std::vector<double> deltas = cfg.get_doubles("params.deltas", {0.1, 1.0});
  const long trials = cfg.get_int("params.trials", 50, 1, 100000);
  const double spectrum_max = cfg.get_double("params.spectrum_max", 400.0, 1.0, 2000.0);
  const double decay = cfg.get_double("params.decay", 2.0, 0.0, 20.0);
  const long band_trials = cfg.get_int("params.band_trials", 2, 0, 100000);
  const double side = cfg.get_double("params.side", 2.0 * kPi, 1e-3, 1e3);
  s.set_model("square torus side=" + format_cell(side));
  s.begin();
  for (double l : lambdas)
    if (!(l > 0.0 && 2.0 * l <= spectrum_max + 1e-9))
      throw ConfigError("params.lambdas: need 0 < lambda <= spectrum_max / 2");
  for (double d : deltas)
    if (!(d > 0.0 && d <= 1.0)) throw ConfigError("params.deltas: need 0 < delta <= 1");

  const TorusBasis basis = TorusBasis::square(side, spectrum_max);
  CsvWriter w = s.table("", {"trial", "lambda", "delta", "helmholtz", "near_lhs", "near_scale", "near_ratio",
                             "mid_lhs", "mid_scale", "mid_ratio"});
  CsvWriter bw = s.table("bands", {"trial", "lambda", "k", "lhs", "scale", "ratio"});
  std::vector<double> near_max(lambdas.size(), 0.0), mid_max(lambdas.size(), 0.0), band_max(lambdas.size(), 0.0);
  std::vector<cplx> g(basis.size());
  for (long t = 0; t < trials; ++t) {
    std::seed_seq seq{static_cast<std::uint32_t>(s.seed()), static_cast<std::uint32_t>(s.seed() >> 32),
                      static_cast<std::uint32_t>(t)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal;
    for (cplx& v : g) {
      const double re = normal(rng);
      v = cplx(re, normal(rng));
    }
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      const double lam = lambdas[i];
      CoefficientVector f(basis.size());
      for (std::size_t j = 0; j < basis.size(); ++j)
        f.c[j] = g[j] * std::pow(1.0 + std::abs(basis.eigenvalue(j) - lam), -decay);
      for (std::size_t di = 0; di < deltas.size(); ++di) {
        const bool bands = t < band_trials && di == 0;
        const Lemma2Report r = lemma2_check(basis, f, lam, deltas[di],
                                            bands ? std::nullopt : std::optional<std::vector<int>>(std::vector<int>{}),
                                            s.exec());
        w.row({t, lam, deltas[di], r.helmholtz, r.near_lhs, r.near_scale, r.near_ratio(), r.mid_lhs, r.mid_scale,
               r.mid_ratio()});
        near_max[i] = std::max(near_max[i], r.near_ratio());
        mid_max[i] = std::max(mid_max[i], r.mid_ratio());
        for (const BandEstimate& b : r.bands) {
          bw.row({t, lam, static_cast<long>(b.k), b.lhs, b.scale, b.ratio});
          band_max[i] = std::max(band_max[i], b.ratio);
        }
      }
    }
  }
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    const std::string tag = format_cell(lambdas[i]);
    s.metric("near_max_ratio_lambda_" + tag, near_max[i]);
    s.metric("mid_max_ratio_lambda_" + tag, mid_max[i]);
    if (band_trials > 0) s.metric("band_max_ratio_lambda_" + tag, band_max[i]);
  }
  s.metric("near_max_ratio", *std::max_element(near_max.begin(), near_max.end()));
  s.metric("mid_max_ratio", *std::max_element(mid_max.begin(), mid_max.end()));
  // A window with no eigenvalues gives a zero ratio; no slope then.
  const auto positive = [](const std::vector<double>& v) {
    return std::all_of(v.begin(), v.end(), [](double x) { return x > 0.0; });
  };
  if (lambdas.size() >= 2) {
    if (positive(near_max)) s.metric("near_log_slope", log_slope(lambdas, near_max));
    if (positive(mid_max)) s.metric("mid_log_slope", log_slope(lambdas, mid_max));
  }
}

// Smoothed cap sums on the torus: for each cap measure the sum divided by
// lambda^{n-1}, averaged over the lambda range, against the measure.
void run_cap_sum(const Config& cfg, Session& s) {
  const std::vector<double> measures = cfg.get_doubles("params.measures", {0.01, 0.04, 0.16});
  const std::vector<double> lambdas = lambda_grid(cfg, 100.0, 300.0, 2.0);
  const double T = cfg.get_double("params.T", 1.0, 1e-3, 1e3);
  const double angle = cfg.get_double("params.cap_angle", 0.3, -10.0, 10.0);
  const double side = cfg.get_double("params.side", 2.0 * kPi, 1e-3, 1e3);
  s.set_model("square torus side=" + format_cell(side));
  s.begin();
  for (double m : measures)
    if (!(m > 0.0 && m < 2.0 * kPi)) throw ConfigError("params.measures: cap measure must lie in (0, 2 pi)");
  if (measures.size() < 2) throw ConfigError("params.measures: need at least two cap measures");

  const double reach = SmoothingKernel::standard().tau_cut() / T;
  const TorusBasis basis = TorusBasis::square(side, lambdas.back() + reach + 1.0);
  const Vec center = Eigen::Vector2d(std::cos(angle), std::sin(angle));
  const Vec x = Vec::Zero(2);
  CsvWriter w = s.table("", {"measure", "lambda", "smoothed_sum", "over_lambda"});
  std::vector<double> mean(measures.size(), 0.0);
  std::vector<std::vector<double>> value(measures.size(), std::vector<double>(lambdas.size()));
  for (std::size_t mi = 0; mi < measures.size(); ++mi) {
    const DirectionCutoff cap = DirectionCutoff::with_measure(center, measures[mi]);
    for_each_index(lambdas.size(), s.exec(), [&](std::size_t i) {
      value[mi][i] = smoothed_sum(basis, T, lambdas[i], x, &cap) / lambdas[i];
    });
    for (std::size_t i = 0; i < lambdas.size(); ++i) {
      w.row({measures[mi], lambdas[i], value[mi][i] * lambdas[i], value[mi][i]});
      mean[mi] += value[mi][i] / lambdas.size();
    }
  }
  CsvWriter mw = s.table("means", {"measure", "mean_over_lambda"});
  for (std::size_t mi = 0; mi < measures.size(); ++mi) mw.row({measures[mi], mean[mi]});
  s.metric("measure_exponent", log_slope(measures, mean));
  // Spread of the per-lambda exponent.
  double lo = 1e300, hi = -1e300;
  for (std::size_t i = 0; i < lambdas.size(); ++i) {
    std::vector<double> v;
    for (std::size_t mi = 0; mi < measures.size(); ++mi) v.push_back(value[mi][i]);
    bool positive = true;
    for (double y : v) positive = positive && y > 0.0;
    if (!positive) continue;
    const double e = log_slope(measures, v);
    lo = std::min(lo, e);
    hi = std::max(hi, e);
  }
  s.metric("per_lambda_exponent_min", lo);
  s.metric("per_lambda_exponent_max", hi);
  s.metric("tau_cut", SmoothingKernel::standard().tau_cut());
}

}  // namespace

void register_spectral_experiments(std::vector<ExperimentInfo>& out) {
  out.push_back({"growth-sphere-zonal", "sup |Y_l0| against lambda_l with a power-law fit", run_sphere_zonal});
  out.push_back({"projector", "window projector sup norms over (lambda, delta)", run_projector});
  out.push_back({"window-dichotomy", "torus window bound C delta lambda vs sphere cluster windows",
                 run_window_dichotomy});
  out.push_back({"lemma2", "near and mid window inequalities for random torus coefficient vectors", run_lemma2});
  out.push_back({"smoothed-cap-sum", "smoothed direction-cap sums on the torus against the cap measure",
                 run_cap_sum});
}

}  // namespace qlab::harness
