#pragma once

#include <algorithm>
#include <cstdint>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "eulerprof/core.hpp"
#include "eulerprof/cubical.hpp"
#include "eulerprof/io.hpp"
#include "eulerprof/vr.hpp"

namespace eulerprof::testing {

using Rng = std::mt19937_64;

inline vr::PointCloud random_cloud(Rng& rng, std::size_t n, std::size_t d) {
  std::uniform_real_distribution<double> u(0.0, 1.0);
  std::vector<double> coords(n * d);
  for (auto& c : coords) c = u(rng);
  return vr::PointCloud(d, std::move(coords));
}

inline std::vector<std::size_t> random_permutation(Rng& rng, std::size_t n) {
  std::vector<std::size_t> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = i;
  std::shuffle(p.begin(), p.end(), rng);
  return p;
}

/// Integer voxel values so that ties (and exact aggregation) are common.
inline cubical::Image random_image(Rng& rng, std::vector<std::size_t> shape, std::size_t channels,
                                   int max_value = 255) {
  std::size_t count = channels;
  for (auto s : shape) count *= s;
  std::uniform_int_distribution<int> u(0, max_value);
  std::vector<double> values(count);
  for (auto& v : values) v = u(rng);
  return cubical::Image(std::move(shape), channels, std::move(values));
}

/// Random raw 1-D contributions with small integer-ish filtrations.
inline ContributionList random_raw_curve(Rng& rng, std::size_t n, int levels = 20) {
  std::uniform_int_distribution<int> level(0, levels);
  std::uniform_int_distribution<int> sign(0, 1);
  ContributionList raw(1);
  for (std::size_t i = 0; i < n; ++i) raw.push(level(rng) * 0.25, sign(rng) ? 1 : -1);
  return raw;
}

inline std::string csv(const ContributionList& raw) {
  std::ostringstream s;
  std::visit([&](const auto& c) { io::write_contributions(s, c); }, canonicalize(raw));
  return s.str();
}

/// Three points with all pairwise distances exactly 1.0 in double arithmetic.
inline vr::PointCloud unit_triangle() {
  return vr::PointCloud::from_rows({{0.0, 0.0}, {1.0, 0.0}, {0.5, 0.8660254037844387}});
}

}  // namespace eulerprof::testing
