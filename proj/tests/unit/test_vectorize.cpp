#include <gtest/gtest.h>

#include "eulerprof/analysis.hpp"
#include "eulerprof/vectorize.hpp"
#include "support.hpp"

namespace eulerprof {
namespace {

using testing::Rng;

EulerCharacteristicCurve curve(std::initializer_list<std::pair<double, std::int64_t>> items) {
  ContributionList raw(1);
  for (auto [f, d] : items) raw.push(f, d);
  return canonicalize_curve(raw);
}

TEST(VectorizeEcc, Examples) {
  EXPECT_EQ(vectorize_ecc(curve({{0, 1}}), 5, 4.0), (std::vector<std::int64_t>{1, 1, 1, 1, 1}));
  EXPECT_EQ(vectorize_ecc(curve({{0, 3}, {1, -2}}), 2, 1.0), (std::vector<std::int64_t>{3, 1}));
  EXPECT_EQ(vectorize_ecc(curve({}), 3, 1.0), (std::vector<std::int64_t>{0, 0, 0}));
}

TEST(VectorizeEcc, ParameterErrors) {
  EXPECT_THROW(vectorize_ecc(curve({}), 1, 1.0), Error);
  EXPECT_THROW(vectorize_ecc(curve({}), 3, 0.0), Error);
}

TEST(VectorizeEcp, Examples) {
  ContributionList a(2);
  a.push(std::vector<double>{0, 0}, 1);
  const std::vector<std::size_t> n22{2, 2};
  const auto t = vectorize_ecp(canonicalize_profile(a), n22, {1, 1});
  EXPECT_EQ(t.values, (std::vector<std::int64_t>{1, 1, 1, 1}));

  ContributionList b(2);
  b.push(std::vector<double>{1, 0}, 1);
  b.push(std::vector<double>{0, 1}, 1);
  b.push(std::vector<double>{1, 1}, -1);
  const std::vector<std::size_t> n33{3, 3};
  const auto u = vectorize_ecp(canonicalize_profile(b), n33, {2, 2});
  EXPECT_EQ(u.values, (std::vector<std::int64_t>{0, 1, 1, 1, 1, 1, 1, 1, 1}));

  const auto z = vectorize_ecp(EulerCharacteristicProfile(2), n33, {2, 2});
  EXPECT_EQ(z.values, std::vector<std::int64_t>(9, 0));
  EXPECT_THROW(vectorize_ecp(EulerCharacteristicProfile(2), n33, {2}), Error);
}

TEST(VectorizeEcp, RowMajorOrderAndIndexRoundTrip) {
  ContributionList raw(3);
  raw.push(std::vector<double>{0, 0, 1}, 1);  // only the last axis matters
  const std::vector<std::size_t> n{2, 3, 2};
  const auto t = vectorize_ecp(canonicalize_profile(raw), n, {1, 1, 1});
  EXPECT_EQ(t.values, (std::vector<std::int64_t>{0, 1, 0, 1, 0, 1, 0, 1, 0, 1, 0, 1}));
  for (std::size_t f = 0; f < t.values.size(); ++f) {
    EXPECT_EQ(t.flat_index(t.multi_index(f)), f);
  }
  const std::vector<std::size_t> idx{1, 2, 1};
  EXPECT_EQ(t.flat_index(idx), 11u);
  EXPECT_EQ(t.at(idx), 1);
}

TEST(CurveFromSamples, StepFunction) {
  const std::vector<std::int64_t> s{3, 1, 1};
  const auto c = curve_from_samples(s, 2.0);
  EXPECT_EQ(euler_characteristic_at(c, -0.1), 0);
  EXPECT_EQ(euler_characteristic_at(c, 0.0), 3);
  EXPECT_EQ(euler_characteristic_at(c, 0.99), 3);
  EXPECT_EQ(euler_characteristic_at(c, 1.0), 1);
}

TEST(ErrorBound, Examples) {
  auto constant = curve({{0, 1}});
  const auto e0 = vectorization_error_bound(constant, 10, 3.0);
  EXPECT_EQ(e0.measured, 0.0);

  auto triangle = curve({{0, 1}, {0, 1}, {0, 1}, {1, -1}, {1, -1}, {1, -1}, {1, 1}});
  const auto e1 = vectorization_error_bound(triangle, 2, 1.0);
  EXPECT_EQ(e1.measured, 0.0);
  EXPECT_EQ(e1.bound, 1.0 * (7.0 / 2.0 + 2.0));
}

TEST(ErrorBound, NeedsRawCount) {
  auto c = curve({{0, 1}});
  c.set_raw_count(std::nullopt);
  try {
    (void)vectorization_error_bound(c, 4, 1.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::kParameter);
  }
}

TEST(ErrorBound, HoldsOnRandomCloudsAndUnderRefinement) {
  Rng rng(77);
  for (int trial = 0; trial < 40; ++trial) {
    const auto cloud = testing::random_cloud(rng, 10, 2);
    const auto c = canonicalize_curve(vr::compute_contributions_vr(cloud, 0.8));
    std::size_t n = 3 + static_cast<std::size_t>(trial % 7);
    auto previous = vectorization_error_bound(c, n, 1.0);
    EXPECT_LE(previous.measured, previous.bound);
    for (int k = 0; k < 4; ++k) {
      n = 2 * n - 1;
      const auto next = vectorization_error_bound(c, n, 1.0);
      EXPECT_LE(next.measured, previous.measured + next.bound);
      previous = next;
    }
  }
}

// Two curves far apart in L1 with identical vectorizations: a tall spike
// between two samples is invisible.
TEST(Instability, FarCurvesSameVector) {
  const auto flat = curve({{0, 1}});
  const auto spiked = curve({{0, 1}, {0.1, 1000}, {0.9, -1000}});
  EXPECT_EQ(vectorize_ecc(flat, 3, 2.0), vectorize_ecc(spiked, 3, 2.0));
  EXPECT_DOUBLE_EQ(distance_ecc(flat, spiked), 800.0);
}

// Two curves arbitrarily close in L1 whose vectors differ a lot: a jump just
// past a sample point.
TEST(Instability, CloseCurvesDifferentVectors) {
  const auto a = curve({{0, 1}, {1.0, 1000}});
  const auto b = curve({{0, 1}, {1.0 + 1e-9, 1000}});
  EXPECT_LT(distance_ecc(a, b), 1e-5);
  const auto va = vectorize_ecc(a, 3, 2.0);
  const auto vb = vectorize_ecc(b, 3, 2.0);
  EXPECT_EQ(va[1] - vb[1], 1000);
}

}  // namespace
}  // namespace eulerprof
