// Acceptance runner: executes the shipped config of each criterion and
// prints one PASS/FAIL line per criterion with the measured values.
//
//   qlab_acceptance [--criterion N] [--configs DIR] [--out DIR]
//
// Exit status is the number of failed criteria (capped at 100).

#include <algorithm>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qlab/common/errors.hpp"
#include "qlab/common/types.hpp"
#include "qlab/harness/experiment.hpp"

#ifndef QLAB_CONFIG_DIR
#define QLAB_CONFIG_DIR "configs"
#endif

namespace {

using namespace qlab;
using namespace qlab::harness;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    pass = pass && ok;
    detail << (detail.tellp() > 0 ? "; " : "") << what << (ok ? "" : " [violated]");
  }
};

std::string num(double v) {
  std::ostringstream os;
  os.precision(4);
  os << v;
  return os.str();
}

struct Criterion {
  int id;
  const char* title;
  const char* config;
  std::function<void(const ExperimentResult&, Verdict&)> judge;
};

const std::vector<Criterion>& criteria() {
  static const std::vector<Criterion> all{
      {1, "sphere zonal growth", "a01_growth_sphere_zonal.cfg",
       [](const ExperimentResult& r, Verdict& v) {
         const double e = r.metric("exponent"), p = r.metric("prefactor");
         const double ref = 1.0 / std::sqrt(2.0 * kPi);
         v.check(std::abs(e - 0.5) <= 0.02, "exponent " + num(e) + " in 0.50 +- 0.02");
         v.check(std::abs(p / ref - 1.0) <= 0.03, "prefactor " + num(p) + " within 3% of (2pi)^-1/2 = " + num(ref));
       }},
      {2, "quasimode lower bound on the sine surface", "a02_quasimode_growth.cfg",
       [](const ExperimentResult& r, Verdict& v) {
         const double d = r.metric("scaled_max_relative_deviation");
         v.check(d <= 0.05, "max |scaled/mean - 1| = " + num(d) + " <= 0.05");
         v.check(r.metric("beta") == 2.0, "beta = " + num(r.metric("beta")));
       }},
      {3, "Maslov index and quantization on S^2", "a03_maslov_sphere.cfg",
       [](const ExperimentResult& r, Verdict& v) {
         v.check(r.metric("beta") == 2.0, "beta = " + num(r.metric("beta")) + " (expect 2)");
         const double x = r.metric("max_excess_over_bound");
         v.check(x <= 1e-3, "max(|r_k - sqrt(k(k+1))| - 1/(8k)) = " + num(x) + " <= 1e-3");
       }},
      {4, "stationary phase discrepancy halves with h", "a04_stationary_phase.cfg",
       [](const ExperimentResult& r, Verdict& v) {
         const double lo = r.metric("min_halving_ratio"), hi = r.metric("max_halving_ratio");
         v.check(lo >= 1.7 && hi <= 2.3, "halving ratios in [" + num(lo) + ", " + num(hi) + "] within 2 +- 0.3");
       }},
      {5, "L2 normalization convergence rate", "a05_l2_normalization.cfg",
       [](const ExperimentResult& r, Verdict& v) {
         const double rate = r.metric("rate_exponent"), dp = r.metric("delta_prime");
         v.check(rate >= dp - 0.1, "rate exponent " + num(rate) + " >= delta' - 0.1 = " + num(dp - 0.1));
         v.detail << "; C_inf fit " << num(r.metric("C_inf_fit")) << " vs leading " << num(r.metric("C_inf_leading"));
       }},
      {6, "ellipsoid umbilic dynamics", "a06_umbilic_return_map.cfg",
       [](const ExperimentResult& r, Verdict& v) {
         v.check(r.label("class") == "blow-down", "class " + r.label("class"));
         v.check(r.metric("fixed_points") == 2.0 && r.metric("attracting") == 1.0 && r.metric("repelling") == 1.0,
                 "fixed points " + num(r.metric("fixed_points")) + " (1 attracting, 1 repelling)");
         const double d = r.metric("max_distance_to_attractor");
         v.check(d <= 1e-3 && r.metric("truncated_orbits") == 0.0, "max distance to attractor " + num(d) + " <= 1e-3");
         const double f = r.metric("recurrent_fraction"), b = r.metric("recurrence_bound");
         v.check(f <= b, "recurrent fraction " + num(f) + " <= " + num(b));
       }},
      {7, "torus window bound vs sphere clusters", "a07_window_dichotomy.cfg",
       [](const ExperimentResult& r, Verdict& v) {
         const double c = r.metric("torus_fitted_C"), slope = r.metric("torus_ratio_log_slope");
         v.check(std::isfinite(c) && c > 0.0, "torus C = " + num(c));
         v.check(slope <= 0.1, "torus max ratio log-slope in lambda " + num(slope) + " <= 0.1");
         const double s = r.metric("sphere_min_cluster_ratio");
         v.check(s >= 1.0 / (4.0 * kPi) - 0.01, "sphere sup^2/(2l+1) = " + num(s) + " >= 1/(4pi) - 0.01");
         const double x = r.metric("sphere_over_torus_C_at_min_delta");
         v.check(x > 1.0, "sphere exceeds torus C by " + num(x) + "x at the smallest delta");
       }},
      {8, "window inequalities on random torus data", "a08_lemma2_torus.cfg",
       [](const ExperimentResult& r, Verdict& v) {
         const double a = r.metric("near_log_slope"), b = r.metric("mid_log_slope");
         v.check(a <= 0.1, "near max ratio " + num(r.metric("near_max_ratio")) + ", log-slope " + num(a) + " <= 0.1");
         v.check(b <= 0.1, "mid max ratio " + num(r.metric("mid_max_ratio")) + ", log-slope " + num(b) + " <= 0.1");
       }},
      {9, "smoothed cap sum scales with the cap measure", "a09_smoothed_cap_sum.cfg",
       [](const ExperimentResult& r, Verdict& v) {
         const double e = r.metric("measure_exponent");
         v.check(std::abs(e - 1.0) <= 0.15, "exponent in eps^2 " + num(e) + " in 1.0 +- 0.15");
       }},
      {10, "conservation and roundtrip properties", "a10_conservation_suite.cfg",
       [](const ExperimentResult& r, Verdict& v) {
         const double d = r.metric("max_energy_drift"), rt = r.metric("max_roundtrip_error");
         const double id = r.metric("sphere_return_identity"), cj = r.metric("conjugate_error");
         v.check(d <= 1e-9, "energy drift " + num(d) + " <= 1e-9");
         v.check(rt <= 1e-7, "exp/log roundtrip " + num(rt) + " <= 1e-7");
         v.check(id <= 1e-6, "sphere return identity " + num(id) + " <= 1e-6");
         v.check(cj <= 1e-6, "|t_conj - pi| = " + num(cj) + " <= 1e-6");
       }},
  };
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"acceptance criteria runner"};
  int only = 0;
  std::string config_dir = QLAB_CONFIG_DIR, out_dir = "acceptance_out";
  app.add_option("--criterion", only, "run a single criterion (1-10)")->check(CLI::Range(1, 10));
  app.add_option("--configs", config_dir, "directory with the shipped configs");
  app.add_option("--out", out_dir, "output directory");
  CLI11_PARSE(app, argc, argv);

  int failed = 0;
  for (const Criterion& c : criteria()) {
    if (only != 0 && c.id != only) continue;
    Verdict v;
    try {
      const Config cfg = Config::from_file(config_dir + "/" + c.config);
      RunOptions ro;
      ro.out_dir = out_dir + "/a" + std::to_string(c.id);
      const ExperimentResult r = run_experiment(cfg, ro);
      c.judge(r, v);
    } catch (const std::exception& e) {
      v.check(false, std::string("error: ") + e.what());
    }
    failed += v.pass ? 0 : 1;
    std::cout << "A" << c.id << " " << (v.pass ? "PASS" : "FAIL") << "  " << c.title << ": " << v.detail.str()
              << std::endl;
  }
  return std::min(failed, 100);
}
