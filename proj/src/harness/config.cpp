#include "qlab/harness/config.hpp"

#include <cstdio>
#include <sstream>

#include <boost/property_tree/ini_parser.hpp>

#include "qlab/common/errors.hpp"

namespace qlab::harness {

namespace pt = boost::property_tree;

namespace {

pt::ptree::path_type path_of(const std::string& key) { return pt::ptree::path_type(key, '.'); }

void collect(const pt::ptree& node, const std::string& prefix, std::vector<std::pair<std::string, std::string>>& out) {
  for (const auto& [k, child] : node) {
    const std::string key = prefix.empty() ? k : prefix + "." + k;
    if (child.empty())
      out.emplace_back(key, child.data());
    else
      collect(child, key, out);
  }
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t");
  return s.substr(b, e - b + 1);
}

std::string show(const std::string& v) { return v; }
std::string show(bool v) { return v ? "true" : "false"; }
std::string show(long v) { return std::to_string(v); }
std::string show(std::uint64_t v) { return std::to_string(v); }
std::string show(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.15g", v);
  return buf;
}
std::string show(const std::vector<double>& v) {
  std::string out;
  for (double x : v) out += (out.empty() ? "" : ",") + show(x);
  return out;
}

}  // namespace

template <class T>
T Config::note(const std::string& key, T v) const {
  used_.insert(key);
  resolved_[key] = show(v);
  return v;
}

Config Config::from_string(const std::string& text, const std::string& origin) {
  Config c;
  c.origin_ = origin;
  std::istringstream is(text);
  try {
    pt::read_ini(is, c.tree_);
  } catch (const pt::ini_parser_error& e) {
    throw ConfigError(origin + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  return c;
}

Config Config::from_file(const std::string& path) {
  Config c;
  c.origin_ = path;
  try {
    pt::read_ini(path, c.tree_);
  } catch (const pt::ini_parser_error& e) {
    if (e.line() == 0) throw ConfigError(path + ": " + e.message());
    throw ConfigError(path + ":" + std::to_string(e.line()) + ": " + e.message());
  }
  return c;
}

void Config::set(const std::string& key, const std::string& value) { tree_.put(path_of(key), value); }

bool Config::has(const std::string& key) const {
  auto node = tree_.get_child_optional(path_of(key));
  return node && node->empty();
}

std::string Config::raw(const std::string& key) const {
  used_.insert(key);
  return trim(tree_.get<std::string>(path_of(key)));
}

std::string Config::name() const {
  if (!has("experiment.name")) throw ConfigError(origin_ + ": missing key experiment.name");
  return raw("experiment.name");
}

std::uint64_t Config::seed() const {
  if (!has("experiment.seed")) return note<std::uint64_t>("experiment.seed", 1);
  const std::string s = raw("experiment.seed");
  try {
    std::size_t pos = 0;
    const unsigned long long v = std::stoull(s, &pos, 0);
    if (pos != s.size() || s.front() == '-') throw std::invalid_argument("trailing");
    return note<std::uint64_t>("experiment.seed", v);
  } catch (const std::exception&) {
    throw ConfigError("experiment.seed: not an unsigned 64-bit integer: '" + s + "'");
  }
}

std::string Config::get_string(const std::string& key, const std::string& fallback) const {
  return note(key, has(key) ? raw(key) : fallback);
}

double Config::get_double(const std::string& key, double fallback) const {
  if (!has(key)) return note(key, fallback);
  const std::string s = raw(key);
  try {
    std::size_t pos = 0;
    const double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return note(key, v);
  } catch (const std::exception&) {
    throw ConfigError(key + ": not a number: '" + s + "'");
  }
}

double Config::get_double(const std::string& key, double fallback, double lo, double hi) const {
  const double v = get_double(key, fallback);
  if (!(v >= lo && v <= hi)) {
    std::ostringstream os;
    os << key << " = " << v << " outside [" << lo << ", " << hi << "]";
    throw ConfigError(os.str());
  }
  return v;
}

long Config::get_int(const std::string& key, long fallback) const {
  if (!has(key)) return note(key, fallback);
  const std::string s = raw(key);
  try {
    std::size_t pos = 0;
    const long v = std::stol(s, &pos);
    if (pos != s.size()) throw std::invalid_argument("trailing");
    return note(key, v);
  } catch (const std::exception&) {
    throw ConfigError(key + ": not an integer: '" + s + "'");
  }
}

long Config::get_int(const std::string& key, long fallback, long lo, long hi) const {
  const long v = get_int(key, fallback);
  if (v < lo || v > hi)
    throw ConfigError(key + " = " + std::to_string(v) + " outside [" + std::to_string(lo) + ", " +
                      std::to_string(hi) + "]");
  return v;
}

bool Config::get_bool(const std::string& key, bool fallback) const {
  if (!has(key)) return note(key, fallback);
  const std::string s = raw(key);
  if (s == "true" || s == "1" || s == "yes" || s == "on") return note(key, true);
  if (s == "false" || s == "0" || s == "no" || s == "off") return note(key, false);
  throw ConfigError(key + ": not a boolean: '" + s + "'");
}

std::vector<double> Config::get_doubles(const std::string& key, const std::vector<double>& fallback) const {
  if (!has(key)) return note(key, fallback);
  const std::string s = raw(key);
  std::vector<double> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    try {
      std::size_t pos = 0;
      out.push_back(std::stod(item, &pos));
      if (pos != item.size()) throw std::invalid_argument("trailing");
    } catch (const std::exception&) {
      throw ConfigError(key + ": bad list entry '" + item + "'");
    }
  }
  if (out.empty()) throw ConfigError(key + ": empty list");
  return note(key, out);
}

geometry::ModelSpec Config::model(const std::string& default_kind) const {
  geometry::ModelSpec spec;
  spec.kind = get_string("model.kind", default_kind);
  if (auto node = tree_.get_child_optional("model")) {
    for (const auto& [k, child] : *node) {
      if (k == "kind") continue;
      if (!child.empty()) throw ConfigError("model." + k + ": nested keys are not allowed");
      spec.params[k] = note("model." + k, trim(child.data()));
    }
  }
  return spec;
}

std::string Config::point(const std::string& fallback) const { return get_string("point.name", fallback); }

void Config::reject_unused() const {
  std::string unknown;
  for (const auto& [k, v] : entries()) {
    if (used_.count(k)) continue;
    unknown += unknown.empty() ? k : ", " + k;
  }
  if (!unknown.empty()) throw ConfigError(origin_ + ": unknown key(s): " + unknown);
}

std::vector<std::pair<std::string, std::string>> Config::entries() const {
  std::vector<std::pair<std::string, std::string>> out;
  collect(tree_, "", out);
  for (auto& [k, v] : out) v = trim(v);
  return out;
}

}  // namespace qlab::harness
