#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <limits>

#include "betula/cluster_feature.hpp"
#include "betula/error.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace betula;
using testing_support::rel_close;

namespace {

void check_cf(const ClusterFeature& cf, double n, const Vector& mean, double sse) {
  CHECK(cf.weight() == n);
  REQUIRE(cf.mean().size() == mean.size());
  for (std::size_t d = 0; d < mean.size(); ++d) CHECK(cf.mean()[d] == doctest::Approx(mean[d]).epsilon(1e-12));
  CHECK(cf.sse() == doctest::Approx(sse).epsilon(1e-12));
}

void check_agree(const ClusterFeature& a, const ClusterFeature& b, double tol) {
  CHECK(rel_close(a.weight(), b.weight(), tol));
  CHECK(rel_close(a.sse(), b.sse(), tol));
  for (std::size_t d = 0; d < a.dim(); ++d) CHECK(rel_close(a.mean()[d], b.mean()[d], tol));
}

ClusterFeature random_cf(SplitMix64& rng, std::size_t dim) {
  const std::size_t n = 1 + rng.below(12);
  return testing_support::fold_points(testing_support::random_points(rng, n, dim));
}

}  // namespace

TEST_CASE("cf_from_point") {
  check_cf(cf_from_point(Vector{0, 0}), 1, {0, 0}, 0);
  check_cf(cf_from_point(Vector{3, 4}), 1, {3, 4}, 0);
  check_cf(cf_from_point(Vector{-1.5}), 1, {-1.5}, 0);
  CHECK_THROWS_AS(cf_from_point(Vector{1.0, std::numeric_limits<double>::quiet_NaN()}), InvalidInput);
  CHECK_THROWS_AS(cf_from_point(Vector{std::numeric_limits<double>::infinity()}), InvalidInput);
  CHECK_THROWS_AS(cf_from_point(Vector{}), InvalidInput);
}

TEST_CASE("cf_merge examples") {
  const ClusterFeature ab = cf_merge(ClusterFeature(1, {0}, 0), ClusterFeature(1, {2}, 0));
  check_cf(ab, 2, {1}, 2);
  check_cf(cf_merge(ab, ClusterFeature(1, {4}, 0)), 3, {2}, 8);

  const ClusterFeature a(3, {1.5, -2}, 7.25);
  CHECK(cf_merge(a, ClusterFeature(0, a.mean(), 0)) == a);
  CHECK(cf_merge(ClusterFeature::empty(2), a) == a);
}

TEST_CASE("cf_merge leaves inputs alone and rejects mismatched dims") {
  const ClusterFeature a(2, {1, 1}, 3);
  const ClusterFeature b(1, {5, 5}, 0);
  const ClusterFeature a_copy = a;
  const ClusterFeature b_copy = b;
  (void)cf_merge(a, b);
  CHECK(a == a_copy);
  CHECK(b == b_copy);
  CHECK_THROWS_AS(cf_merge(a, ClusterFeature(1, {1}, 0)), InvalidInput);
}

TEST_CASE("zero-weight merges keep the left mean") {
  const ClusterFeature z = cf_merge(ClusterFeature(0, {7, 8}, 0), ClusterFeature(0, {1, 2}, 0));
  CHECK(z.weight() == 0.0);
  CHECK(z.mean() == Vector{7, 8});
  CHECK(z.sse() == 0.0);
}

TEST_CASE("constructor validation") {
  CHECK_THROWS_AS(ClusterFeature(-1, {0}, 0), InvalidInput);
  CHECK_THROWS_AS(ClusterFeature(1, {0}, -0.5), InvalidInput);
  CHECK_THROWS_AS(ClusterFeature(1, {std::nan("")}, 0), InvalidInput);
  CHECK_THROWS_AS(ClusterFeature(std::numeric_limits<double>::infinity(), {0}, 0), InvalidInput);
}

TEST_CASE("cf_centroid_sq_dist") {
  CHECK(cf_centroid_sq_dist(ClusterFeature(1, {0, 0}, 0), ClusterFeature(4, {3, 4}, 2)) == 25.0);
  const ClusterFeature a(2, {1, 2, 3}, 1);
  CHECK(cf_centroid_sq_dist(a, a) == 0.0);
  CHECK(cf_centroid_sq_dist(ClusterFeature(1, {1}, 0), ClusterFeature(1, {-1}, 0)) == 4.0);
  CHECK_THROWS_AS(cf_centroid_sq_dist(a, ClusterFeature(1, {1}, 0)), InvalidInput);
}

TEST_CASE("merge is commutative") {
  SplitMix64 rng(11);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t dim = 1 + rng.below(4);
    const ClusterFeature a = random_cf(rng, dim);
    const ClusterFeature b = random_cf(rng, dim);
    check_agree(cf_merge(a, b), cf_merge(b, a), 1e-12);
  }
}

TEST_CASE("merge is associative") {
  SplitMix64 rng(12);
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t dim = 1 + rng.below(4);
    const ClusterFeature a = random_cf(rng, dim);
    const ClusterFeature b = random_cf(rng, dim);
    const ClusterFeature c = random_cf(rng, dim);
    check_agree(cf_merge(cf_merge(a, b), c), cf_merge(a, cf_merge(b, c)), 1e-9);
  }
}

TEST_CASE("any fold order matches the two-pass oracle") {
  SplitMix64 rng(13);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t dim = 1 + rng.below(4);
    const std::size_t n = 1 + rng.below(60);
    auto pts = testing_support::random_points(rng, n, dim, -50, 50);
    const oracle::Stats want = oracle::two_pass(pts);

    // Sequential, shuffled, and pairwise-tree folds.
    std::vector<ClusterFeature> variants;
    variants.push_back(testing_support::fold_points(pts));
    rng.shuffle(std::span<Vector>(pts));
    variants.push_back(testing_support::fold_points(pts));
    std::vector<ClusterFeature> level;
    for (const auto& p : pts) level.push_back(cf_from_point(p));
    while (level.size() > 1) {
      std::vector<ClusterFeature> next;
      for (std::size_t i = 0; i + 1 < level.size(); i += 2) next.push_back(cf_merge(level[i], level[i + 1]));
      if (level.size() % 2) next.push_back(level.back());
      level = std::move(next);
    }
    variants.push_back(level.front());

    for (const ClusterFeature& cf : variants) {
      CHECK(cf.weight() == want.n);
      for (std::size_t d = 0; d < dim; ++d) CHECK(rel_close(cf.mean()[d], want.mean[d], 1e-10));
      CHECK(rel_close(cf.sse(), want.sse, 1e-8));
      CHECK(cf.sse() >= 0.0);
    }
  }
}

TEST_CASE("single point has zero sse, and cf_of matches folding") {
  CHECK(cf_from_point(Vector{1e9, -3}).sse() == 0.0);
  SplitMix64 rng(14);
  const Dataset data = testing_support::random_dataset(rng, 100, 3);
  check_agree(cf_of(data), testing_support::fold_points(testing_support::rows_of(data)), 1e-12);
  CHECK_THROWS_AS(cf_of(Dataset(3)), InvalidInput);
}

TEST_CASE("stability at a large offset") {
  SplitMix64 rng(15);
  std::vector<Vector> pts;
  for (int i = 0; i < 10000; ++i) pts.push_back({1e7 + rng.normal(), 1e7 + rng.normal()});
  const oracle::Stats want = oracle::two_pass(pts);
  const ClusterFeature got = testing_support::fold_points(pts);
  CHECK(testing_support::rel_error(got.sse(), want.sse) < 1e-6);
}

TEST_CASE("duplicates give exactly zero sse") {
  std::vector<Vector> pts(50, Vector{1e7 + 0.1, -3.3});
  const ClusterFeature cf = testing_support::fold_points(pts);
  CHECK(cf.weight() == 50.0);
  CHECK(cf.sse() >= 0.0);
  CHECK(cf.sse() < 1e-6);
}

TEST_CASE("dataset validation") {
  Dataset d;
  d.add(Vector{1, 2});
  CHECK(d.dim() == 2);
  CHECK_THROWS_AS(d.add(Vector{1, 2, 3}), InvalidInput);
  CHECK_THROWS_AS(d.add(Vector{1, std::nan("")}), InvalidInput);
  CHECK(d.size() == 1);
  d.add(Vector{3, 4});
  const std::vector<std::size_t> order{1, 0};
  const Dataset p = d.permuted(order);
  CHECK(p[0][0] == 3.0);
  CHECK(p[1][1] == 2.0);
}
