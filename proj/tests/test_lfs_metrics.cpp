#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <numeric>
#include <set>
#include <vector>

#include "mskel/errors.hpp"
#include "mskel/lfs.hpp"
#include "mskel/metrics.hpp"
#include "oracles.hpp"

using namespace mskel;

namespace {

Skeleton skeleton_at(std::vector<Vec3> centers) {
  Skeleton s;
  for (std::size_t i = 0; i < centers.size(); ++i) {
    SkeletalSphere sphere;
    sphere.center = centers[i];
    sphere.source_index = static_cast<std::uint32_t>(i);
    s.spheres.push_back(sphere);
  }
  return s;
}

}  // namespace

TEST_CASE("local feature size is the distance to the nearest center") {
  const auto centers = testutil::random_points(50, 91, {-1, -1, -1}, {1, 1, 1});
  const auto surface = testutil::random_points(400, 92, {-2, -2, -2}, {2, 2, 2});
  const Skeleton skeleton = skeleton_at(centers);
  const std::vector<double> lfs = local_feature_size(surface, skeleton);
  REQUIRE(lfs.size() == surface.size());
  for (std::size_t i = 0; i < surface.size(); ++i) {
    CHECK(std::abs(lfs[i] - testutil::brute_nearest_distance(centers, surface[i])) <= 1e-12);
  }
  CHECK_THROWS_AS(local_feature_size(surface, Skeleton{}), EmptySkeleton);
}

TEST_CASE("prior weights follow the documented two-point example") {
  const SamplingPrior prior = prior_weights({1.0, 3.0});
  REQUIRE(prior.weight.size() == 2);
  CHECK(prior.weight[0] == doctest::Approx(0.75).epsilon(1e-3));
  CHECK(prior.weight[1] == doctest::Approx(0.25).epsilon(1e-3));
  CHECK(prior.weight[0] + prior.weight[1] == doctest::Approx(1.0).epsilon(1e-12));
  // The exact values carry the epsilon floor: eps = 1e-3 * median = 2e-3.
  const double eps = 2e-3;
  const double raw0 = 1.0 / (1.0 + eps), raw1 = 1.0 / (3.0 + eps);
  CHECK(prior.weight[0] == doctest::Approx(raw0 / (raw0 + raw1)).epsilon(1e-14));
}

TEST_CASE("prior weights are uniform for constant lfs and sum to one") {
  const SamplingPrior flat = prior_weights(std::vector<double>(7, 0.42));
  for (double w : flat.weight) CHECK(w == doctest::Approx(1.0 / 7.0).epsilon(1e-12));

  const SamplingPrior zeros = prior_weights(std::vector<double>(5, 0.0));
  for (double w : zeros.weight) CHECK(w == doctest::Approx(0.2).epsilon(1e-12));

  std::vector<double> lfs;
  for (std::size_t i = 0; i < 100; ++i) lfs.push_back(0.01 + 0.03 * static_cast<double>(i % 17));
  const SamplingPrior prior = prior_weights(lfs, 1.7);
  CHECK(std::accumulate(prior.weight.begin(), prior.weight.end(), 0.0) ==
        doctest::Approx(1.0).epsilon(1e-9));
  for (double w : prior.weight) CHECK(w > 0.0);
}

TEST_CASE("prior weights decrease when lfs increases") {
  std::vector<double> lfs = {0.05, 0.1, 0.2, 0.4, 0.8, 1.6};
  const SamplingPrior prior = prior_weights(lfs);
  for (std::size_t i = 1; i < lfs.size(); ++i) CHECK(prior.weight[i] < prior.weight[i - 1]);
}

TEST_CASE("prior weights commute with permutations") {
  const std::vector<double> lfs = {0.3, 1.1, 0.05, 0.6, 2.0};
  const std::vector<std::size_t> perm = {4, 2, 0, 1, 3};
  std::vector<double> shuffled(lfs.size());
  for (std::size_t i = 0; i < lfs.size(); ++i) shuffled[i] = lfs[perm[i]];
  const SamplingPrior base = prior_weights(lfs);
  const SamplingPrior mixed = prior_weights(shuffled);
  for (std::size_t i = 0; i < lfs.size(); ++i) {
    // The normalizing sum accumulates in permuted order, so allow an ulp.
    CHECK(mixed.weight[i] == doctest::Approx(base.weight[perm[i]]).epsilon(1e-14));
  }
}

TEST_CASE("sharpness steepens the prior") {
  const std::vector<double> lfs = {1.0, 3.0};
  const double eps = 2e-3;
  const SamplingPrior sharp = prior_weights(lfs, 2.0);
  const double expect = std::pow((3.0 + eps) / (1.0 + eps), 2.0);
  CHECK(sharp.weight[0] / sharp.weight[1] == doctest::Approx(expect).epsilon(1e-12));
  CHECK_THROWS_AS(prior_weights(lfs, 0.0), InvalidConfig);
  CHECK_THROWS_AS(prior_weights(std::vector<double>{}), EmptySet);
}

TEST_CASE("weighted_sample draws distinct indices and honors m") {
  const auto points = testutil::random_points(40, 7, {0, 0, 0}, {1, 1, 1});
  SamplingPrior prior;
  prior.lfs.assign(points.size(), 1.0);
  prior.weight.assign(points.size(), 1.0 / static_cast<double>(points.size()));

  const std::vector<std::size_t> all = weighted_sample(points, prior, points.size(), 3);
  std::set<std::size_t> unique(all.begin(), all.end());
  CHECK(unique.size() == points.size());

  const std::vector<std::size_t> again = weighted_sample(points, prior, 10, 3);
  const std::vector<std::size_t> same = weighted_sample(points, prior, 10, 3);
  CHECK(again == same);

  bool any_difference = false;
  for (std::uint64_t seed = 4; seed < 9; ++seed)
    if (weighted_sample(points, prior, 10, seed) != again) any_difference = true;
  CHECK(any_difference);

  CHECK_THROWS_AS(weighted_sample(points, prior, 0, 1), InvalidConfig);
  CHECK_THROWS_AS(weighted_sample(points, prior, points.size() + 1, 1), SubsetTooLarge);
  SamplingPrior short_prior;
  short_prior.weight = {0.5, 0.5};
  CHECK_THROWS_AS(weighted_sample(points, short_prior, 1, 1), LengthMismatch);
}

TEST_CASE("a dominant weight is picked almost always") {
  const auto points = testutil::random_points(4, 8, {0, 0, 0}, {1, 1, 1});
  SamplingPrior prior;
  prior.lfs.assign(4, 1.0);
  prior.weight = {0.99997, 0.00001, 0.00001, 0.00001};
  std::size_t hits = 0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    if (weighted_sample(points, prior, 1, seed)[0] == 0) ++hits;
  }
  CHECK(hits > 9990);
}

TEST_CASE("single-draw frequencies match the weights (chi-squared)") {
  const auto points = testutil::random_points(10, 9, {0, 0, 0}, {1, 1, 1});
  SamplingPrior prior;
  prior.lfs.assign(10, 1.0);
  double total = 0.0;
  for (std::size_t i = 0; i < 10; ++i) total += static_cast<double>(i + 1);
  for (std::size_t i = 0; i < 10; ++i)
    prior.weight.push_back(static_cast<double>(i + 1) / total);

  std::vector<std::size_t> counts(10, 0);
  const std::size_t draws = 100000;
  for (std::uint64_t seed = 0; seed < draws; ++seed)
    ++counts[weighted_sample(points, prior, 1, seed)[0]];

  double chi2 = 0.0;
  for (std::size_t i = 0; i < 10; ++i) {
    const double expect = prior.weight[i] * static_cast<double>(draws);
    const double diff = static_cast<double>(counts[i]) - expect;
    chi2 += diff * diff / expect;
  }
  // 9 degrees of freedom, alpha = 0.001.
  CHECK(chi2 < 27.88);
}

TEST_CASE("chamfer and hausdorff match their definitions on tiny sets") {
  const std::vector<Vec3> a = {{0, 0, 0}};
  const std::vector<Vec3> b = {{1, 0, 0}};
  CHECK(chamfer(a, b) == 2.0);
  CHECK(hausdorff(a, b) == 1.0);
  CHECK(chamfer(a, a) == 0.0);
  CHECK(hausdorff(a, a) == 0.0);

  const std::vector<Vec3> c = {{0, 0, 0}, {1, 0, 0}};
  const std::vector<Vec3> d = {{0, 0, 0}};
  // Directed means: c->d = (0 + 1)/2, d->c = 0.
  CHECK(chamfer(c, d) == 0.5);
  CHECK(hausdorff(c, d) == 1.0);

  CHECK_THROWS_AS(chamfer({}, a), EmptySet);
  CHECK_THROWS_AS(hausdorff(a, {}), EmptySet);
}

TEST_CASE("metrics equal brute force and are symmetric") {
  for (std::uint64_t trial = 0; trial < 20; ++trial) {
    const auto a = testutil::random_points(45, 100 + trial, {-1, -1, -1}, {1, 1, 1});
    const auto b = testutil::random_points(55, 200 + trial, {-1, -1, -1}, {1, 1, 1});
    const double cd = chamfer(a, b);
    const double hd = hausdorff(a, b);
    CHECK(std::abs(cd - testutil::brute_chamfer(a, b)) <= 1e-12);
    CHECK(std::abs(hd - testutil::brute_hausdorff(a, b)) <= 1e-12);
    CHECK(chamfer(b, a) == cd);
    CHECK(hausdorff(b, a) == hd);
    CHECK(cd <= 2.0 * hd + 1e-12);
  }
}

TEST_CASE("metrics are translation invariant") {
  const auto a = testutil::random_points(60, 301, {-1, -1, -1}, {1, 1, 1});
  const auto b = testutil::random_points(60, 302, {-1, -1, -1}, {1, 1, 1});
  const Vec3 t{10.0, -3.0, 0.5};
  std::vector<Vec3> at, bt;
  for (const Vec3& p : a) at.push_back(p + t);
  for (const Vec3& p : b) bt.push_back(p + t);
  CHECK(std::abs(chamfer(at, bt) - chamfer(a, b)) <= 1e-12);
  CHECK(std::abs(hausdorff(at, bt) - hausdorff(a, b)) <= 1e-12);
}
