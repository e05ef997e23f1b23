#include <cmath>
#include <sstream>

#include "qlab/common/errors.hpp"
#include "qlab/geometry/models.hpp"

namespace qlab::geometry {
namespace {

double get_double(const ModelSpec& s, const std::string& key, double fallback) {
  auto it = s.params.find(key);
  if (it == s.params.end()) return fallback;
  try {
    std::size_t pos = 0;
    const double v = std::stod(it->second, &pos);
    if (pos != it->second.size()) throw std::invalid_argument("trailing");
    return v;
  } catch (const std::exception&) {
    throw ConfigError("model." + key + ": not a number: " + it->second);
  }
}

std::vector<double> parse_list(const std::string& text, char sep) {
  std::vector<double> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, sep)) {
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw ConfigError("bad number in list: " + text);
    }
  }
  return out;
}

void check_keys(const ModelSpec& s, std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : s.params) {
    bool ok = false;
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw ConfigError("unknown model parameter '" + k + "' for kind " + s.kind);
  }
}

}  // namespace

ModelPtr make_model(const ModelSpec& spec) {
  if (spec.kind == "sphere") {
    check_keys(spec, {"n", "radius"});
    return std::make_shared<RoundSphere>(static_cast<int>(get_double(spec, "n", 2)), get_double(spec, "radius", 1.0));
  }
  if (spec.kind == "torus") {
    check_keys(spec, {"n", "side", "lattice"});
    auto it = spec.params.find("lattice");
    if (it != spec.params.end()) {
      std::vector<std::vector<double>> vecs;
      std::stringstream ss(it->second);
      std::string item;
      while (std::getline(ss, item, ';')) vecs.push_back(parse_list(item, ','));
      const int n = static_cast<int>(vecs.size());
      Mat A(n, n);
      for (int j = 0; j < n; ++j) {
        if (static_cast<int>(vecs[j].size()) != n) throw ConfigError("model.lattice: need n vectors of length n");
        for (int i = 0; i < n; ++i) A(i, j) = vecs[j][i];
      }
      return std::make_shared<FlatTorus>(A);
    }
    return std::make_shared<FlatTorus>(
        FlatTorus::square(static_cast<int>(get_double(spec, "n", 2)), get_double(spec, "side", 2.0 * kPi)));
  }
  if (spec.kind == "sor") {
    check_keys(spec, {"profile", "bump_amplitude", "bump_center", "bump_width"});
    auto it = spec.params.find("profile");
    const std::string prof = it == spec.params.end() ? "sine" : it->second;
    if (prof == "sine") return std::make_shared<SurfaceOfRevolution>(Profile::sine());
    if (prof == "bumped_sine")
      return std::make_shared<SurfaceOfRevolution>(Profile::bumped_sine(
          get_double(spec, "bump_amplitude", 0.05), get_double(spec, "bump_center", 1.2),
          get_double(spec, "bump_width", 0.5)));
    throw ConfigError("model.profile: unknown profile " + prof);
  }
  if (spec.kind == "ellipsoid") {
    check_keys(spec, {"a", "b", "c"});
    return std::make_shared<TriaxialEllipsoid>(get_double(spec, "a", 1.0), get_double(spec, "b", 0.8),
                                               get_double(spec, "c", 0.6));
  }
  throw ConfigError("unknown model kind '" + spec.kind + "'");
}

Vec resolve_point(const Manifold& m, const std::string& name) {
  if (const auto* s = dynamic_cast<const RoundSphere*>(&m)) {
    if (name == "pole" || name == "north_pole") return s->north_pole();
    if (name == "south_pole") return s->south_pole();
    if (name == "generic") {
      Vec u = Vec::Constant(s->dim(), 1.1);
      u(0) = 0.7 * s->radius();
      return s->chart_to_point(u);
    }
  }
  if (const auto* r = dynamic_cast<const SurfaceOfRevolution*>(&m)) {
    if (name == "pole" || name == "north_pole") return r->north_pole();
    if (name == "south_pole") return r->south_pole();
    if (name == "generic") return Eigen::Vector2d(0.37 * r->length(), 0.4);
  }
  if (const auto* e = dynamic_cast<const TriaxialEllipsoid*>(&m)) {
    if (name == "umbilic") return e->umbilics()[0];
    if (name.rfind("umbilic:", 0) == 0) {
      const int k = std::stoi(name.substr(8));
      if (k < 0 || k > 3) throw ConfigError("umbilic index must be 0..3");
      return e->umbilics()[k];
    }
    if (name == "generic") return e->chart_to_point(Eigen::Vector2d(1.0, 0.6));
  }
  if (const auto* t = dynamic_cast<const FlatTorus*>(&m)) {
    if (name == "origin" || name == "pole") return Vec::Zero(t->dim());
    if (name == "generic") {
      Vec u = Vec::Constant(t->dim(), 0.37);
      u(0) = 0.61;
      return t->lattice() * u;
    }
  }
  // Explicit coordinates.
  std::vector<double> c;
  try {
    c = parse_list(name, ',');
  } catch (const ConfigError&) {
    throw ConfigError("unknown point '" + name + "' for " + m.description());
  }
  if (static_cast<int>(c.size()) != m.position_size())
    throw ConfigError("point '" + name + "' has wrong number of coordinates");
  Vec x = Eigen::Map<Vec>(c.data(), c.size());
  if (std::abs(m.constraint(x)) > 1e-9) throw DomainError("point '" + name + "' is not on the manifold");
  return x;
}

}  // namespace qlab::geometry
