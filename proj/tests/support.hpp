#pragma once

#include <defexp/family.hpp>
#include <defexp/json_io.hpp>

#include <fstream>
#include <random>
#include <sstream>
#include <string>

namespace testsupport {

inline std::string fixtures_dir() { return DEFEXP_FIXTURES_DIR; }
inline std::string golden_dir() { return DEFEXP_GOLDEN_DIR; }

inline std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  REQUIRE_MESSAGE(bool(in), ("cannot open " + path).c_str());
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

inline const nlohmann::json& derived_values() {
  static const nlohmann::json fixture =
      nlohmann::json::parse(read_file(fixtures_dir() + "/derived_values.json"));
  return fixture;
}

inline double derived_value(const std::string& id) {
  return derived_values().at(id).at("value").get<double>();
}

inline double derived_tolerance(const std::string& id) {
  return derived_values().at(id).at("tolerance").get<double>();
}

inline defexp::Vector derived_vector(const std::string& id) {
  return defexp::vector_from_json(derived_values().at(id).at("value"), id);
}

// The worked two-point space: mu = (1/2, 1/2), p = (1, 1), H = (0, 1).
inline defexp::PhiExponentialFamily two_point_family(const defexp::Deformation& d) {
  defexp::SampleSpace space({"a", "b"}, defexp::Vector::Constant(2, 0.5));
  defexp::Density p = space.density(defexp::Vector::Ones(2));
  defexp::Matrix H(1, 2);
  H << 0.0, 1.0;
  return defexp::PhiExponentialFamily(d, space, p, H);
}

// The worked three-point space: mu = 1, p = (0.2, 0.3, 0.5), H = (1, 2, 3).
inline defexp::PhiExponentialFamily three_point_family(const defexp::Deformation& d) {
  defexp::SampleSpace space({"x1", "x2", "x3"}, defexp::Vector::Ones(3));
  defexp::Density p = space.density((defexp::Vector(3) << 0.2, 0.3, 0.5).finished());
  defexp::Matrix H(1, 3);
  H << 1.0, 2.0, 3.0;
  return defexp::PhiExponentialFamily(d, space, p, H);
}

// Deterministic random families at desk scale for property tests.
struct RandomFamilies {
  explicit RandomFamilies(std::uint64_t seed) : rng(seed) {}

  defexp::PhiExponentialFamily make(const defexp::Deformation& d, int points, int dims) {
    std::uniform_real_distribution<double> mu_dist(0.3, 2.0);
    std::uniform_real_distribution<double> p_dist(0.2, 1.0);
    std::uniform_real_distribution<double> stat_dist(-2.0, 2.0);
    defexp::Vector mu(points), p(points);
    std::vector<std::string> labels;
    for (int i = 0; i < points; ++i) {
      mu[i] = mu_dist(rng);
      p[i] = p_dist(rng);
      labels.push_back("x" + std::to_string(i));
    }
    p /= p.dot(mu);
    defexp::Matrix H(dims, points);
    for (int j = 0; j < dims; ++j) {
      for (int i = 0; i < points; ++i) H(j, i) = stat_dist(rng);
    }
    defexp::SampleSpace space(labels, mu);
    return defexp::PhiExponentialFamily(d, space, space.density(p), H);
  }

  defexp::Vector theta(int dims, double box = 2.0) {
    std::uniform_real_distribution<double> dist(-box, box);
    defexp::Vector t(dims);
    for (int j = 0; j < dims; ++j) t[j] = dist(rng);
    return t;
  }

  defexp::Vector direction(int points) {
    std::normal_distribution<double> dist(0.0, 1.0);
    defexp::Vector v(points);
    for (int i = 0; i < points; ++i) v[i] = dist(rng);
    return v;
  }

  std::mt19937_64 rng;
};

}  // namespace testsupport
