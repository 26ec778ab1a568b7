#include <gtest/gtest.h>

#include <cmath>
#include <map>
#include <set>

#include "eulerprof/vr.hpp"
#include "oracle.hpp"
#include "support.hpp"

namespace eulerprof::vr {
namespace {

using testing::Rng;

std::uint64_t binomial(std::uint64_t n, std::uint64_t k) {
  std::uint64_t r = 1;
  for (std::uint64_t i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// n points in a tiny box: every pair is within t_max = 1.
PointCloud complete_cloud(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::uniform_real_distribution<double> u(0.0, 0.1);
  std::vector<double> coords(n * 3);
  for (auto& c : coords) c = u(rng);
  return PointCloud(3, std::move(coords));
}

TEST(LocalGraph, TwoPoints) {
  const auto cloud = PointCloud::from_rows({{0.0}, {1.0}});
  const auto g = build_local_graph(cloud, 0, 2.0);
  ASSERT_EQ(g.size(), 2u);
  EXPECT_EQ(g.edge_length(0, 1), 1.0);
  EXPECT_EQ(build_local_graph(cloud, 0, 0.5).size(), 1u);
}

TEST(LocalGraph, UnitSquareCorner) {
  const auto cloud = PointCloud::from_rows({{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  const auto g = build_local_graph(cloud, 0, 1.0);
  ASSERT_EQ(g.size(), 3u);
  EXPECT_EQ(g.point_index(1), 1u);
  EXPECT_EQ(g.point_index(2), 2u);
  EXPECT_FALSE(g.has_edge(1, 2));
  EXPECT_TRUE(g.has_edge(0, 1));
  EXPECT_TRUE(g.has_edge(0, 2));
}

TEST(LocalGraph, OnlySubsequentVertices) {
  const auto cloud = PointCloud::from_rows({{0, 0}, {0, 1}, {1, 0}, {1, 1}});
  const auto g = build_local_graph(cloud, 3, 1.0);
  EXPECT_EQ(g.size(), 1u);
  const auto n = build_subsequent_neighbours(cloud, 1.0);
  EXPECT_EQ(n.ranks_of(0).size(), 2u);
  EXPECT_EQ(n.ranks_of(3).size(), 0u);
}

TEST(IncreaseDimension, OneStep) {
  // A, B, C with all edges of length 1.
  const auto cloud = testing::unit_triangle();
  const auto g = build_local_graph(cloud, 0, 1.0);
  const auto root = LocalCliqueFrontier::root(g);
  ASSERT_EQ(root.size(), 1u);
  ASSERT_EQ(root.common_neighbours(0).size(), 2u);
  const auto edges = increase_dimension(root, g);
  ASSERT_EQ(edges.size(), 2u);
  EXPECT_EQ(edges.simplex_size(), 2u);
  EXPECT_EQ(edges.filtration(0)[0], 1.0);
  EXPECT_EQ(edges.filtration(1)[0], 1.0);
  ASSERT_EQ(edges.common_neighbours(0).size(), 1u);
  EXPECT_EQ(edges.common_neighbours(0)[0], 2u);
  EXPECT_TRUE(edges.common_neighbours(1).empty());

  const auto triangles = increase_dimension(edges, g);
  ASSERT_EQ(triangles.size(), 1u);
  EXPECT_EQ(triangles.filtration(0)[0], 1.0);
  EXPECT_TRUE(increase_dimension(triangles, g).empty());
}

TEST(IncreaseDimension, FourCliqueFiltrationIsLongestEdge) {
  const auto cloud = PointCloud::from_rows({{0, 0, 0}, {1, 0, 0}, {0, 1.3, 0}, {0, 0, 1.7}});
  const auto g = build_local_graph(cloud, 0, 10.0);
  auto f = increase_dimension(increase_dimension(LocalCliqueFrontier::root(g), g), g);
  ASSERT_EQ(f.size(), 3u);
  for (std::size_t i = 0; i < f.size(); ++i) {
    double longest = 0;
    const auto s = f.simplex(i);
    for (std::size_t a = 0; a < s.size(); ++a) {
      for (std::size_t b = a + 1; b < s.size(); ++b) {
        longest = std::max(longest, cloud.distance(g.point_index(s[a]), g.point_index(s[b])));
      }
    }
    EXPECT_EQ(f.filtration(i)[0], longest);
  }
}

TEST(Contributions, SinglePoint) {
  const auto raw = compute_contributions_vr(PointCloud::from_rows({{3.0, 4.0}}), 1.0);
  ASSERT_EQ(raw.size(), 1u);
  EXPECT_EQ(raw.at(0)[0], 0.0);
  EXPECT_EQ(raw.delta(0), 1);
}

TEST(Contributions, EmptyCloud) {
  EXPECT_TRUE(compute_contributions_vr(PointCloud(), 1.0).empty());
}

TEST(Contributions, Triangle) {
  const auto c = canonicalize_curve(compute_contributions_vr(testing::unit_triangle(), 1.0));
  ASSERT_EQ(c.size(), 2u);
  EXPECT_EQ(c.filtrations()[0], 0.0);
  EXPECT_EQ(c.deltas()[0], 3);
  EXPECT_EQ(c.filtrations()[1], 1.0);
  EXPECT_EQ(c.deltas()[1], -2);
}

TEST(Contributions, CompleteGraphCount) {
  for (std::size_t n : {5u, 8u, 12u}) {
    const auto raw = compute_contributions_vr(complete_cloud(n, n), 1.0, nullptr, 2);
    EXPECT_EQ(raw.size(), (std::size_t{1} << n) - 1);
    EXPECT_EQ(raw.total(), 1);
  }
}

TEST(Contributions, ParameterErrors) {
  const auto cloud = testing::unit_triangle();
  EXPECT_THROW(compute_contributions_vr(cloud, 0.0), Error);
  EXPECT_THROW(compute_contributions_vr(cloud, 1.0, nullptr, 0), Error);
  VertexFiltrationSpec bad;
  bad.extra_axes.push_back({{1.0, 2.0}, {}});
  EXPECT_THROW(compute_contributions_vr(cloud, 1.0, &bad), Error);
}

TEST(Contributions, MatchesOracle) {
  Rng rng(101);
  std::uniform_int_distribution<std::size_t> size(1, 10);
  std::uniform_int_distribution<std::size_t> dim(2, 4);
  std::uniform_real_distribution<double> t(0.05, 1.5);
  for (int trial = 0; trial < 60; ++trial) {
    const auto cloud = testing::random_cloud(rng, size(rng), dim(rng));
    const double t_max = t(rng);
    EXPECT_EQ(canonicalize_curve(compute_contributions_vr(cloud, t_max, nullptr, 3)),
              canonicalize_curve(oracle::brute_force_vr(cloud, t_max)));
  }
}

TEST(Contributions, SerialMatchesParallel) {
  Rng rng(5);
  for (int trial = 0; trial < 10; ++trial) {
    const auto cloud = testing::random_cloud(rng, 60, 3);
    EXPECT_EQ(testing::csv(compute_contributions_vr_serial(cloud, 0.35)),
              testing::csv(compute_contributions_vr(cloud, 0.35, nullptr, 4)));
  }
}

TEST(Contributions, ExactlyOnceAndMonotone) {
  Rng rng(17);
  for (int trial = 0; trial < 30; ++trial) {
    const auto cloud = testing::random_cloud(rng, 9, 2).with_ordering(testing::random_permutation(rng, 9));
    const double t_max = 0.6;
    std::map<std::vector<std::size_t>, double> seen;
    for_each_simplex(cloud, t_max, [&](std::span<const std::size_t> pts, std::span<const double> f) {
      std::vector<std::size_t> key(pts.begin(), pts.end());
      std::sort(key.begin(), key.end());
      EXPECT_TRUE(seen.emplace(key, f[0]).second) << "simplex generated twice";
    });
    const auto expected = oracle::brute_force_vr_simplices(cloud, t_max);
    ASSERT_EQ(seen.size(), expected.size());
    for (const auto& s : expected) {
      auto it = seen.find(s.vertices);
      ASSERT_NE(it, seen.end());
      EXPECT_EQ(it->second, s.filtration[0]);
      // Every facet is present with a filtration no larger.
      for (std::size_t drop = 0; s.vertices.size() > 1 && drop < s.vertices.size(); ++drop) {
        auto face = s.vertices;
        face.erase(face.begin() + static_cast<std::ptrdiff_t>(drop));
        EXPECT_LE(seen.at(face), it->second);
      }
    }
  }
}

TEST(Contributions, DeterministicAcrossWorkersAndOrderings) {
  Rng rng(23);
  for (int trial = 0; trial < 5; ++trial) {
    const auto cloud = testing::random_cloud(rng, 40, 3);
    const auto reference = testing::csv(compute_contributions_vr(cloud, 0.4, nullptr, 1));
    for (int workers : {2, 8}) {
      EXPECT_EQ(testing::csv(compute_contributions_vr(cloud, 0.4, nullptr, workers)), reference);
    }
    for (int k = 0; k < 5; ++k) {
      const auto shuffled = cloud.with_ordering(testing::random_permutation(rng, cloud.size()));
      EXPECT_EQ(testing::csv(compute_contributions_vr(shuffled, 0.4, nullptr, 3)), reference);
    }
  }
}

TEST(Counters, CompleteGraphClosedForm) {
  for (std::size_t n = 1; n <= 14; ++n) {
    KernelCounters counters;
    (void)compute_contributions_vr_serial(complete_cloud(n, 100 + n), 1.0, nullptr, &counters);
    const std::uint64_t expected = (std::uint64_t{1} << (n - 1)) * n - (std::uint64_t{1} << n) + 1;
    EXPECT_EQ(counters.filtration_comparisons, expected) << "n=" << n;
    EXPECT_EQ(counters.simplices, (std::uint64_t{1} << n) - 1);
  }
}

TEST(Counters, PeakFrontierOfFirstVertex) {
  for (std::size_t n = 1; n <= 14; ++n) {
    const auto cloud = complete_cloud(n, 200 + n);
    KernelCounters counters;
    ContributionList out(1);
    compute_local_contributions(build_local_graph(cloud, 0, 1.0), out, &counters);
    EXPECT_EQ(counters.peak_frontier, binomial(n - 1, (n - 1) / 2)) << "n=" << n;
    EXPECT_EQ(out.size(), std::size_t{1} << (n - 1));
  }
}

TEST(Reorder, PathGraph) {
  const auto cloud = PointCloud::from_rows({{1.0}, {0.0}, {2.0}});  // B, A, C
  const auto r = reorder_by_degree(cloud, 1.0);
  EXPECT_EQ(r.ordering()[0], 1u);
  EXPECT_EQ(r.ordering()[1], 2u);
  EXPECT_EQ(r.ordering()[2], 0u);
}

// Non-root nodes of the simplex tree grown from each vertex, in rank order.
std::vector<std::size_t> tree_sizes(const PointCloud& cloud, double t_max) {
  const auto neighbours = build_subsequent_neighbours(cloud, t_max);
  std::vector<std::size_t> sizes;
  for (std::size_t r = 0; r < cloud.size(); ++r) {
    ContributionList out(1);
    compute_local_contributions(build_local_graph(cloud, neighbours, r), out);
    sizes.push_back(out.size() - 1);
  }
  return sizes;
}

TEST(Reorder, FigureConfiguration) {
  // A, B, C, D
  const auto cloud = PointCloud::from_rows({{0, 0}, {-1.42, 1}, {-1, -1}, {2, 1}});
  const double t_max = 2.3;
  const auto ascending = reorder_by_degree(cloud, t_max);
  EXPECT_EQ(std::vector<std::size_t>(ascending.ordering().begin(), ascending.ordering().end()),
            (std::vector<std::size_t>{3, 1, 2, 0}));
  EXPECT_EQ(tree_sizes(ascending, t_max), (std::vector<std::size_t>{1, 3, 1, 0}));
  EXPECT_EQ(tree_sizes(cloud, t_max), (std::vector<std::size_t>{4, 1, 0, 0}));
  EXPECT_EQ(canonicalize_curve(compute_contributions_vr(ascending, t_max)),
            canonicalize_curve(compute_contributions_vr(cloud, t_max)));
}

TEST(Codensity, Examples) {
  EXPECT_EQ(codensity(PointCloud::from_rows({{0.0}, {3.0}}), 1), (std::vector<double>{3, 3}));
  EXPECT_EQ(codensity(PointCloud::from_rows({{0.0}, {1.0}, {3.0}}), 2),
            (std::vector<double>{2, 1.5, 2.5}));
  EXPECT_EQ(codensity(PointCloud::from_rows({{1.0, 1.0}, {1.0, 1.0}, {5.0, 5.0}}), 1),
            (std::vector<double>{0, 0, std::sqrt(32.0)}));
  try {
    (void)codensity(PointCloud::from_rows({{0.0}, {3.0}}), 2);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParameter);
  }
}

TEST(Multiparameter, MatchesOracle) {
  Rng rng(31);
  for (int trial = 0; trial < 30; ++trial) {
    const auto cloud = testing::random_cloud(rng, 8, 2);
    VertexFiltrationSpec spec;
    spec.extra_axes.push_back({codensity(cloud, 3), {}});
    spec.extra_axes.push_back({{}, [&](std::size_t i, std::size_t j) {
                                 return std::abs(cloud.point(i)[0] - cloud.point(j)[0]);
                               }});
    const auto ours = compute_contributions_vr(cloud, 0.7, &spec, 2);
    EXPECT_EQ(ours.dim(), 3u);
    EXPECT_EQ(canonicalize_profile(ours), canonicalize_profile(oracle::brute_force_vr(cloud, 0.7, &spec)));
  }
}

}  // namespace
}  // namespace eulerprof::vr
