// Command line front end for the named experiments.
//
//   qlab list
//   qlab run <experiment> [--config F] [--out D] [--seed S] [--threads N] [--set key=value ...]
//   qlab <subcommand> [same options]          subcommand = flow, return-map, ...
//
// Exit codes: 0 success, 2 invalid configuration or request, 3 numerical
// failure, 1 anything else.

#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qlab/common/errors.hpp"
#include "qlab/harness/experiment.hpp"

namespace {

using namespace qlab;
using namespace qlab::harness;

struct Options {
  std::string config;
  std::string out;
  std::string model;
  std::string point;
  std::vector<std::string> sets;
  long long seed = -1;
  int threads = 0;
  bool serial = false;
  bool quiet = false;
  // Shortcuts for the most common parameters.
  long k_min = -1, k_max = -1;
  double R = -1.0, lambda_min = -1.0, lambda_max = -1.0;
};

void add_common(CLI::App* app, Options& o) {
  app->add_option("--config", o.config, "experiment config file (INI with dotted sections)")->check(CLI::ExistingFile);
  app->add_option("--out", o.out, "output directory");
  app->add_option("--seed", o.seed, "64-bit seed for Monte-Carlo sampling")->check(CLI::NonNegativeNumber);
  app->add_option("--threads", o.threads, "OpenMP thread count (0: runtime default)")->check(CLI::NonNegativeNumber);
  app->add_flag("--serial", o.serial, "use the serial reference kernels");
  app->add_option("--set", o.sets, "override a config key, key=value (repeatable)");
  app->add_option("--model", o.model, "model kind: sphere, torus, sor, ellipsoid");
  app->add_option("--point", o.point, "base point: pole, south_pole, umbilic, origin or coordinates");
  app->add_flag("--quiet", o.quiet, "do not print the summary");
}

void add_k_range(CLI::App* app, Options& o) {
  app->add_option("--k-min", o.k_min, "smallest quantum number");
  app->add_option("--k-max", o.k_max, "largest quantum number");
  app->add_option("--R", o.R, "radial cutoff chi_R");
}

void add_lambda_range(CLI::App* app, Options& o) {
  app->add_option("--lambda-min", o.lambda_min, "smallest frequency");
  app->add_option("--lambda-max", o.lambda_max, "largest frequency");
}

std::string number(double v) {
  std::ostringstream os;
  os.precision(17);
  os << v;
  return os.str();
}

int run(const std::string& name, const Options& o) {
  Config cfg = o.config.empty() ? Config::from_string("", "<defaults>") : Config::from_file(o.config);
  if (!o.config.empty() && cfg.has("experiment.name") && cfg.name() != name)
    throw ConfigError(o.config + ": experiment.name is '" + cfg.name() + "', not '" + name + "'");
  cfg.set("experiment.name", name);
  if (o.seed >= 0) cfg.set("experiment.seed", std::to_string(o.seed));
  if (!o.model.empty()) cfg.set("model.kind", o.model);
  if (!o.point.empty()) cfg.set("point.name", o.point);
  if (o.k_min >= 0) cfg.set("params.k_min", std::to_string(o.k_min));
  if (o.k_max >= 0) cfg.set("params.k_max", std::to_string(o.k_max));
  if (o.R > 0.0) cfg.set("params.R", number(o.R));
  if (o.lambda_min >= 0.0) cfg.set("params.lambda_min", number(o.lambda_min));
  if (o.lambda_max >= 0.0) cfg.set("params.lambda_max", number(o.lambda_max));
  for (const std::string& kv : o.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  if (o.threads > 0) set_thread_count(o.threads);

  RunOptions ro;
  ro.out_dir = o.out;
  ro.exec = o.serial ? Execution::Serial : Execution::Parallel;
  ro.log = o.quiet ? nullptr : &std::cout;
  if (!o.quiet) std::cout << name << " (" << code_version() << ", " << thread_count() << " threads)\n";
  const ExperimentResult r = run_experiment(cfg, ro);
  if (!o.quiet)
    for (const auto& f : r.files) std::cout << "  wrote " << f.string() << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qlab: geodesic loops, quasimodes and spectral window experiments"};
  app.require_subcommand(1);
  Options opts;
  std::string run_name;

  app.add_subcommand("list", "list the named experiments");
  CLI::App* run_cmd = app.add_subcommand("run", "run a named experiment");
  run_cmd->add_option("experiment", run_name, "experiment name (see list)")->required();
  add_common(run_cmd, opts);
  add_k_range(run_cmd, opts);
  add_lambda_range(run_cmd, opts);

  const std::vector<std::pair<std::string, std::string>> direct{
      {"flow", "flow"},         {"return-map", "return-map"}, {"recurrence", "recurrence"},
      {"classify", "classify"}, {"quasimode", "quasimode"},   {"projector", "projector"},
      {"growth", "growth"},     {"lemma2", "lemma2"}};
  for (const auto& [sub, experiment] : direct) {
    const ExperimentInfo* info = find_experiment(experiment);
    CLI::App* cmd = app.add_subcommand(sub, info ? info->description : sub);
    add_common(cmd, opts);
    if (sub == "quasimode" || sub == "growth") add_k_range(cmd, opts);
    if (sub == "projector" || sub == "lemma2") add_lambda_range(cmd, opts);
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  }

  try {
    if (app.got_subcommand("list")) {
      for (const auto& e : experiments()) std::cout << e.name << "\t" << e.description << "\n";
      return 0;
    }
    if (app.got_subcommand("run")) return run(run_name, opts);
    for (const auto& [sub, experiment] : direct)
      if (app.got_subcommand(sub)) return run(experiment, opts);
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const DomainError& e) {
    std::cerr << "invalid request: " << e.what() << "\n";
    return 2;
  } catch (const PreconditionError& e) {
    std::cerr << "invalid request: " << e.what() << "\n";
    return 2;
  } catch (const UnsupportedError& e) {
    std::cerr << "unsupported: " << e.what() << "\n";
    return 2;
  } catch (const NumericalError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const HorizonError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const InconsistencyError& e) {
    std::cerr << "numerical failure: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
