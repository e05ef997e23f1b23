#include <cmath>
#include <filesystem>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include <gtest/gtest.h>

#include "qlab/common/errors.hpp"
#include "qlab/common/types.hpp"
#include "qlab/harness/experiment.hpp"

namespace fs = std::filesystem;
using namespace qlab;
using namespace qlab::harness;

namespace {

fs::path scratch(const std::string& name) {
  const fs::path p = fs::temp_directory_path() / ("qlab_test_harness_" + name);
  fs::remove_all(p);
  return p;
}

std::string body_without_timestamp(const fs::path& p) {
  std::ifstream in(p);
  std::ostringstream os;
  for (std::string line; std::getline(in, line);)
    if (line.rfind("# generated:", 0) != 0) os << line << "\n";
  return os.str();
}

std::string message_of(const std::function<void()>& f) {
  try {
    f();
  } catch (const ConfigError& e) {
    return e.what();
  }
  return "";
}

}  // namespace

TEST(Config, SectionsBecomeDottedKeys) {
  const Config c = Config::from_string("[experiment]\nname = flow\nseed = 42\n[params]\nk_min = 10\nlist = 1, 2.5,4\n");
  EXPECT_EQ(c.name(), "flow");
  EXPECT_EQ(c.seed(), 42u);
  EXPECT_EQ(c.get_int("params.k_min", 0), 10);
  EXPECT_EQ(c.get_int("params.k_max", 7), 7);
  EXPECT_EQ(c.get_doubles("params.list", {}), (std::vector<double>{1.0, 2.5, 4.0}));
  EXPECT_EQ(c.resolved().at("params.k_max"), "7");
}

TEST(Config, BadValueNamesKeyPath) {
  const Config c = Config::from_string("[params]\nT_max = soon\n");
  const std::string msg = message_of([&] { c.get_double("params.T_max", 1.0); });
  EXPECT_NE(msg.find("params.T_max"), std::string::npos) << msg;
}

TEST(Config, OutOfRangeNamesKeyPath) {
  const Config c = Config::from_string("[params]\norbits = -3\n");
  const std::string msg = message_of([&] { c.get_int("params.orbits", 1, 1, 100); });
  EXPECT_NE(msg.find("params.orbits"), std::string::npos) << msg;
}

TEST(Config, MalformedFileReportsLine) {
  const std::string msg = message_of([] { Config::from_string("[params\nk = 1\n", "broken.cfg"); });
  EXPECT_NE(msg.find("broken.cfg"), std::string::npos) << msg;
}

TEST(Config, UnknownKeysRejected) {
  const Config c = Config::from_string("[experiment]\nname = flow\n[params]\nT_max = 3\nbogus = 1\n");
  c.name();
  c.get_double("params.T_max", 1.0);
  const std::string msg = message_of([&] { c.reject_unused(); });
  EXPECT_NE(msg.find("params.bogus"), std::string::npos) << msg;
  EXPECT_EQ(msg.find("params.T_max"), std::string::npos) << msg;
}

TEST(Config, MissingNameIsConfigError) { EXPECT_THROW(Config::from_string("").name(), ConfigError); }

TEST(FitExponent, Square) {
  std::vector<std::pair<double, double>> pts;
  for (double x = 1.0; x <= 6.0; x += 1.0) pts.emplace_back(x, x * x);
  const FitResult f = fit_exponent(pts);
  EXPECT_NEAR(f.exponent, 2.0, 1e-12);
  EXPECT_LE(f.exponent_stderr, 1e-12);
  EXPECT_NEAR(f.prefactor, 1.0, 1e-12);
}

TEST(FitExponent, ConstantHasZeroExponent) {
  std::vector<std::pair<double, double>> pts;
  for (double x = 1.0; x <= 5.0; x += 1.0) pts.emplace_back(x, 3.0);
  EXPECT_NEAR(fit_exponent(pts).exponent, 0.0, 1e-12);
}

TEST(FitExponent, Preconditions) {
  std::vector<std::pair<double, double>> few{{1, 1}, {2, 2}, {3, 3}, {4, 4}};
  EXPECT_THROW(fit_exponent(few), PreconditionError);
  few.emplace_back(5.0, -1.0);
  EXPECT_THROW(fit_exponent(few), DomainError);
}

TEST(Csv, HeaderMetadataAndWidth) {
  const fs::path dir = scratch("csv");
  {
    CsvWriter w(dir / "sub" / "t.csv", {{"experiment", "x"}, {"seed", "3"}}, {"a", "b", "c"});
    w.row({1.5, 2L, std::string("z")});
    EXPECT_THROW(w.row({1.0}), PreconditionError);
  }
  const CsvData d = read_csv(dir / "sub" / "t.csv");
  ASSERT_EQ(d.header, (std::vector<std::string>{"a", "b", "c"}));
  ASSERT_EQ(d.rows.size(), 1u);
  EXPECT_EQ(d.rows[0][d.column("c")], "z");
  std::ifstream in(dir / "sub" / "t.csv");
  std::string first;
  std::getline(in, first);
  EXPECT_EQ(first, "# experiment: x");
  fs::remove_all(dir);
}

TEST(Harness, UnknownExperimentIsConfigError) {
  EXPECT_THROW(run_experiment(Config::from_string("[experiment]\nname = nope\n")), ConfigError);
}

TEST(Harness, UnknownParameterRejectedBeforeWork) {
  const fs::path dir = scratch("unknown");
  const Config c = Config::from_string("[experiment]\nname = growth-sphere-zonal\n[params]\nl_mni = 3\n");
  RunOptions ro;
  ro.out_dir = dir;
  EXPECT_THROW(run_experiment(c, ro), ConfigError);
  fs::remove_all(dir);
}

TEST(Harness, EmptyKRangeIsConfigError) {
  const fs::path dir = scratch("krange");
  const Config c = Config::from_string("[experiment]\nname = growth\n[params]\nk_min = 40\nk_max = 20\n");
  RunOptions ro;
  ro.out_dir = dir;
  EXPECT_THROW(run_experiment(c, ro), ConfigError);
  fs::remove_all(dir);
}

// sup |Y_l0| = sqrt((2l + 1) / 4 pi), attained at the poles.
TEST(Harness, SphereZonalClosedForm) {
  const fs::path dir = scratch("zonal");
  const Config c = Config::from_string("[experiment]\nname = growth-sphere-zonal\n[params]\nl_min = 2\nl_max = 12\n");
  RunOptions ro;
  ro.out_dir = dir;
  const ExperimentResult r = run_experiment(c, ro);
  EXPECT_LE(r.metric("max_relative_closed_form_error"), 1e-10);
  const CsvData d = read_csv(dir / "growth-sphere-zonal.csv");
  ASSERT_EQ(d.rows.size(), 11u);
  const double l = std::stod(d.rows[3][d.column("l")]);
  EXPECT_NEAR(std::stod(d.rows[3][d.column("sup_abs_Y_l0")]), std::sqrt((2.0 * l + 1.0) / (4.0 * kPi)), 1e-10);
  fs::remove_all(dir);
}

TEST(Harness, ParameterBlockAndDeterminism) {
  const fs::path a = scratch("det_a"), b = scratch("det_b");
  const std::string text =
      "[experiment]\nname = lemma2\nseed = 11\n[params]\nlambdas = 20, 30\ndeltas = 1\ntrials = 2\n"
      "spectrum_max = 60\nband_trials = 0\n";
  RunOptions ro;
  ro.out_dir = a;
  const ExperimentResult ra = run_experiment(Config::from_string(text), ro);
  ro.out_dir = b;
  run_experiment(Config::from_string(text), ro);
  ASSERT_FALSE(ra.files.empty());
  for (const fs::path& f : ra.files) {
    const std::string x = body_without_timestamp(f), y = body_without_timestamp(b / f.filename());
    EXPECT_EQ(x, y) << f;
    EXPECT_NE(x.find("# seed: 11"), std::string::npos);
    EXPECT_NE(x.find("params.trials=2"), std::string::npos) << x.substr(0, 400);
  }
  fs::remove_all(a);
  fs::remove_all(b);
}

TEST(Harness, UmbilicReturnMapSmall) {
  const fs::path dir = scratch("umbilic");
  const Config c = Config::from_string(
      "[experiment]\nname = returnmap-ellipsoid-umbilic\nseed = 5\n[model]\nkind = ellipsoid\na = 1\nb = 0.8\nc = 0.6\n"
      "[params]\norbits = 6\nn_iter = 25\nrecurrence_iter = 5\n");
  RunOptions ro;
  ro.out_dir = dir;
  const ExperimentResult r = run_experiment(c, ro);
  EXPECT_EQ(r.label("class"), "blow-down");
  EXPECT_EQ(r.metric("fixed_points"), 2.0);
  EXPECT_EQ(r.metric("attracting"), 1.0);
  EXPECT_LE(r.metric("max_distance_to_attractor"), 1e-3);
  fs::remove_all(dir);
}
