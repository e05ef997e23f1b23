#pragma once

#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <boost/property_tree/ptree.hpp>

#include "qlab/geometry/models.hpp"

namespace qlab::harness {

// Experiment configuration: an INI file whose sections become dotted key
// prefixes ("[params] k_min = 10" is "params.k_min"). Reserved sections:
//
//   [experiment]  name, seed, out
//   [model]       kind plus the kind-specific parameters of make_model
//   [point]       name (pole, south_pole, umbilic, origin or "x,y,...")
//   [params]      experiment-specific numbers
//
// Every getter marks its key as known, so reject_unused() after parsing
// catches misspelt keys. Errors are ConfigError naming the key path.
class Config {
 public:
  static Config from_file(const std::string& path);
  static Config from_string(const std::string& text, const std::string& origin = "<string>");

  const std::string& origin() const { return origin_; }

  void set(const std::string& key, const std::string& value);
  bool has(const std::string& key) const;

  std::string name() const;
  std::uint64_t seed() const;

  std::string get_string(const std::string& key, const std::string& fallback) const;
  double get_double(const std::string& key, double fallback) const;
  double get_double(const std::string& key, double fallback, double lo, double hi) const;
  long get_int(const std::string& key, long fallback) const;
  long get_int(const std::string& key, long fallback, long lo, long hi) const;
  bool get_bool(const std::string& key, bool fallback) const;
  // Comma separated list.
  std::vector<double> get_doubles(const std::string& key, const std::vector<double>& fallback) const;

  // Model section as a factory spec; all model.* keys count as used (the
  // factory rejects parameters the kind does not know).
  geometry::ModelSpec model(const std::string& default_kind) const;
  std::string point(const std::string& fallback) const;

  // Throws ConfigError listing every key no getter asked for.
  void reject_unused() const;

  // All key/value pairs in path order as written.
  std::vector<std::pair<std::string, std::string>> entries() const;
  // Effective value of every key a getter asked for, defaults included.
  const std::map<std::string, std::string>& resolved() const { return resolved_; }

 private:
  std::string raw(const std::string& key) const;
  template <class T>
  T note(const std::string& key, T v) const;

  boost::property_tree::ptree tree_;
  std::string origin_;
  mutable std::set<std::string> used_;
  mutable std::map<std::string, std::string> resolved_;
};

}  // namespace qlab::harness
