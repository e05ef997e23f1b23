#include "qlab/harness/experiment.hpp"

#include <algorithm>
#include <ostream>

#include "qlab/common/errors.hpp"

#ifndef QLAB_VERSION
#define QLAB_VERSION "unknown"
#endif

namespace qlab::harness {

const char* code_version() { return "qlab " QLAB_VERSION; }

FitResult fit_exponent(std::span<const std::pair<double, double>> pairs) {
  std::vector<double> x, y;
  for (const auto& [a, b] : pairs) {
    x.push_back(a);
    y.push_back(b);
  }
  return fit_power_law(x, y, 5);
}

double ExperimentResult::metric(const std::string& key) const {
  for (const auto& [k, v] : metrics)
    if (k == key) return v;
  throw PreconditionError(name + ": no metric " + key);
}

const std::string& ExperimentResult::label(const std::string& key) const {
  for (const auto& [k, v] : labels)
    if (k == key) return v;
  throw PreconditionError(name + ": no label " + key);
}

Session::Session(const Config& cfg, std::string name, std::filesystem::path out_dir, Execution exec,
                 std::ostream* log)
    : cfg_(cfg), out_dir_(std::move(out_dir)), exec_(exec), log_(log), seed_(cfg.seed()) {
  result_.name = std::move(name);
}

void Session::begin() {
  cfg_.reject_unused();
  begun_ = true;
}

Metadata Session::metadata() const {
  Metadata m;
  m.emplace_back("experiment", result_.name);
  m.emplace_back("model", model_.empty() ? "none" : model_);
  std::string params;
  for (const auto& [k, v] : cfg_.resolved()) {
    if (k == "experiment.name" || k == "experiment.out") continue;
    params += (params.empty() ? "" : "; ") + k + "=" + v;
  }
  m.emplace_back("parameters", params);
  m.emplace_back("seed", std::to_string(seed_));
  m.emplace_back("version", code_version());
  return m;
}

CsvWriter Session::table(const std::string& suffix, std::vector<std::string> columns) {
  if (!begun_) throw PreconditionError("Session::table before begin()");
  const std::string file = suffix.empty() ? result_.name + ".csv" : result_.name + "_" + suffix + ".csv";
  CsvWriter w(out_dir_ / file, metadata(), std::move(columns));
  result_.files.push_back(w.path());
  return w;
}

void Session::metric(const std::string& key, double value) {
  result_.metrics.emplace_back(key, value);
  log(key + " = " + format_cell(value));
}

void Session::label(const std::string& key, const std::string& value) {
  result_.labels.emplace_back(key, value);
  log(key + " = " + value);
}

void Session::log(const std::string& line) const {
  if (log_) *log_ << "  " << line << std::endl;
}

ExperimentResult Session::finish() {
  if (!begun_) begin();
  CsvWriter w = table("summary", {"key", "value"});
  for (const auto& [k, v] : result_.metrics) w.row({k, v});
  for (const auto& [k, v] : result_.labels) w.row({k, v});
  return result_;
}

const std::vector<ExperimentInfo>& experiments() {
  static const std::vector<ExperimentInfo> all = [] {
    std::vector<ExperimentInfo> v;
    register_geometry_experiments(v);
    register_quasimode_experiments(v);
    register_spectral_experiments(v);
    return v;
  }();
  return all;
}

const ExperimentInfo* find_experiment(const std::string& name) {
  for (const auto& e : experiments())
    if (name == e.name) return &e;
  return nullptr;
}

ExperimentResult run_experiment(const Config& cfg, const RunOptions& opts) {
  const std::string name = cfg.name();
  const ExperimentInfo* info = find_experiment(name);
  if (!info) throw ConfigError("experiment.name: unknown experiment '" + name + "'");
  std::filesystem::path out = opts.out_dir;
  const std::string configured = cfg.get_string("experiment.out", "out");
  if (out.empty()) out = configured;
  Session session(cfg, name, out, opts.exec, opts.log);
  info->run(cfg, session);
  return session.finish();
}

}  // namespace qlab::harness
