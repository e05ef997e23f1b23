#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "qlab/common/execution.hpp"
#include "qlab/common/fit.hpp"
#include "qlab/harness/config.hpp"
#include "qlab/harness/csv.hpp"

namespace qlab::harness {

// Exponent, standard error, prefactor and residual norm of a log-log OLS fit.
using FitResult = PowerLawFit;

// Needs >= 5 pairs (PreconditionError); DomainError on nonpositive entries.
FitResult fit_exponent(std::span<const std::pair<double, double>> pairs);

struct ExperimentResult {
  std::string name;
  std::vector<std::filesystem::path> files;
  std::vector<std::pair<std::string, double>> metrics;
  std::vector<std::pair<std::string, std::string>> labels;

  // PreconditionError if absent.
  double metric(const std::string& key) const;
  const std::string& label(const std::string& key) const;
};

// Handed to an experiment body: output tables, summary entries and the
// execution policy. Tables land in out_dir as <name>.csv or
// <name>_<suffix>.csv with a shared metadata block.
class Session {
 public:
  Session(const Config& cfg, std::string name, std::filesystem::path out_dir, Execution exec, std::ostream* log);

  const Config& config() const { return cfg_; }
  const std::string& name() const { return result_.name; }
  std::uint64_t seed() const { return seed_; }
  Execution exec() const { return exec_; }

  // Call once every parameter has been read; rejects unknown keys before any
  // expensive work starts.
  void begin();
  void set_model(const std::string& description) { model_ = description; }

  CsvWriter table(const std::string& suffix, std::vector<std::string> columns);
  void metric(const std::string& key, double value);
  void label(const std::string& key, const std::string& value);
  void log(const std::string& line) const;

  ExperimentResult finish();

 private:
  Metadata metadata() const;

  const Config& cfg_;
  std::filesystem::path out_dir_;
  Execution exec_;
  std::ostream* log_;
  std::uint64_t seed_;
  std::string model_;
  bool begun_ = false;
  ExperimentResult result_;
};

struct ExperimentInfo {
  const char* name;
  const char* description;
  void (*run)(const Config&, Session&);
};

const std::vector<ExperimentInfo>& experiments();
const ExperimentInfo* find_experiment(const std::string& name);

struct RunOptions {
  std::filesystem::path out_dir;  // empty: experiment.out, else "out"
  Execution exec = Execution::Parallel;
  std::ostream* log = nullptr;
};

// Runs the experiment named by experiment.name. ConfigError for unknown
// names or keys; numerical failures propagate as thrown by the modules.
// Also writes <name>_summary.csv with the metrics and labels.
ExperimentResult run_experiment(const Config& cfg, const RunOptions& opts = {});

const char* code_version();

// Registration tables, one per source file.
void register_geometry_experiments(std::vector<ExperimentInfo>& out);
void register_quasimode_experiments(std::vector<ExperimentInfo>& out);
void register_spectral_experiments(std::vector<ExperimentInfo>& out);

}  // namespace qlab::harness
