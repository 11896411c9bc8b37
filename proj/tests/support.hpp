#pragma once

#include "mincomplex/fan.hpp"

#include <initializer_list>
#include <memory>
#include <string>
#include <vector>

namespace test {

namespace mc = mincomplex;

inline std::string data_path(const std::string& name) { return std::string(MINCOMPLEX_DATA_DIR) + "/" + name; }

inline mc::FanPtr corpus(const std::string& name) {
  return std::make_shared<const mc::Fan>(mc::read_fan_file(data_path("fans/" + name + ".fan")));
}

inline mc::RayVector ray(std::initializer_list<std::int64_t> xs) {
  mc::RayVector v(static_cast<Eigen::Index>(xs.size()));
  Eigen::Index i = 0;
  for (auto x : xs) v(i++) = x;
  return v;
}

inline mc::FanPtr make_fan(int n, const std::vector<mc::RayVector>& rays, const std::vector<std::vector<int>>& cones) {
  return std::make_shared<const mc::Fan>(mc::Fan::from_cones(n, rays, cones));
}

/// Cone id from ambient ray coordinates; fails the test run if absent.
inline int cone_of(const mc::Fan& fan, const std::vector<mc::RayVector>& rays) {
  auto id = fan.find_cone(rays);
  if (!id) throw std::runtime_error("cone not in fan");
  return *id;
}

inline mc::FanMap corpus_map(const std::string& coarse, const std::string& fine) {
  return mc::subdivision_map(corpus(fine), corpus(coarse));
}

}  // namespace test
