#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <set>

#include "betula/error.hpp"
#include "betula/evaluation.hpp"
#include "betula/hac.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace betula;
using testing_support::rel_close;

namespace {

Dendrogram ward_of(const Dataset& data) {
  const LinkageSpec spec(LinkageKind::Ward);
  return hac_anderberg(init_matrix_points(data, spec), std::vector<double>(data.size(), 1.0), spec);
}

// Direct RMSD over raw points: group, average, sum squared deviations.
double brute_rmsd(const std::vector<Vector>& pts, const std::vector<std::size_t>& labels) {
  std::set<std::size_t> groups(labels.begin(), labels.end());
  double total = 0.0;
  for (std::size_t g : groups) {
    oracle::Points members;
    for (std::size_t i = 0; i < pts.size(); ++i) {
      if (labels[i] == g) members.push_back(pts[i]);
    }
    total += oracle::two_pass(members).sse;
  }
  return std::sqrt(total / static_cast<double>(pts.size()));
}

}  // namespace

TEST_CASE("cut examples") {
  Dataset d(1);
  for (double x : {0.0, 1.0, 10.0}) d.add(Vector{x});
  const LinkageSpec spec(LinkageKind::Single);
  const Dendrogram den = hac_naive(init_matrix_points(d, spec), {1, 1, 1}, spec);
  CHECK(cut(den, 3).labels == std::vector<std::size_t>{0, 1, 2});
  CHECK(cut(den, 1).labels == std::vector<std::size_t>{0, 0, 0});
  const FlatClustering two = cut(den, 2);
  CHECK(two.labels == std::vector<std::size_t>{0, 0, 1});
  CHECK(two.k == 2);
  CHECK_THROWS_AS(cut(den, 0), InvalidInput);
  CHECK_THROWS_AS(cut(den, 4), InvalidInput);
}

TEST_CASE("cut produces exactly k labels and matches the union-find oracle") {
  SplitMix64 rng(71);
  for (int trial = 0; trial < 20; ++trial) {
    const Dataset data = testing_support::random_dataset(rng, 2 + rng.below(80), 2);
    const Dendrogram den = ward_of(data);
    for (std::size_t k = 1; k <= data.size(); ++k) {
      const FlatClustering flat = cut(den, k);
      CHECK(std::set<std::size_t>(flat.labels.begin(), flat.labels.end()).size() == k);
      CHECK(flat.labels == oracle::partition(den, k));
    }
  }
}

TEST_CASE("rmsd examples") {
  Dataset d(1);
  for (double x : {0.0, 2.0, 10.0}) d.add(Vector{x});
  CHECK(rmsd(d, std::vector<std::size_t>{0, 1, 2}) == 0.0);

  Dataset pair(1);
  pair.add(Vector{0});
  pair.add(Vector{2});
  CHECK(rmsd(pair, std::vector<std::size_t>{0, 0}) == doctest::Approx(1.0).epsilon(1e-14));

  const std::vector<ClusterFeature> leaves{ClusterFeature(2, {1}, 2), cf_from_point(Vector{10})};
  const double raw = rmsd(d, std::vector<std::size_t>{0, 0, 0});
  CHECK(rel_close(rmsd(leaves, std::vector<std::size_t>{0, 0}), raw, 1e-10));
  CHECK(rel_close(rmsd(leaves, std::vector<std::size_t>{0, 1}), std::sqrt(2.0 / 3.0), 1e-12));
}

TEST_CASE("rmsd errors") {
  Dataset d(1);
  d.add(Vector{0});
  d.add(Vector{1});
  CHECK_THROWS_AS(rmsd(d, std::vector<std::size_t>{0}), InvalidInput);
  CHECK_THROWS_AS(rmsd(d, std::vector<std::size_t>{0, 0}, std::vector<double>{1}), InvalidInput);
  CHECK_THROWS_AS(rmsd(d, std::vector<std::size_t>{0, 0}, std::vector<double>{1, 0}), InvalidInput);
  const std::vector<ClusterFeature> leaves{cf_from_point(Vector{1})};
  CHECK_THROWS_AS(rmsd(leaves, std::vector<std::size_t>{0, 1}), InvalidInput);
}

TEST_CASE("weighted points count as repeated points") {
  Dataset d(1);
  d.add(Vector{0});
  d.add(Vector{3});
  Dataset expanded(1);
  expanded.add(Vector{0});
  expanded.add(Vector{3});
  expanded.add(Vector{3});
  CHECK(rel_close(rmsd(d, std::vector<std::size_t>{0, 0}, std::vector<double>{1, 2}),
                  rmsd(expanded, std::vector<std::size_t>{0, 0, 0}), 1e-12));
}

TEST_CASE("rmsd properties") {
  SplitMix64 rng(72);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t n = 2 + rng.below(100);
    const Dataset data = testing_support::random_dataset(rng, n, 1 + rng.below(4));
    const auto pts = testing_support::rows_of(data);
    std::vector<std::size_t> labels(n);
    const std::size_t k = 1 + rng.below(n);
    for (auto& l : labels) l = rng.below(k);

    const double got = rmsd(data, labels);
    CHECK(rel_close(got, brute_rmsd(pts, labels), 1e-10));

    std::vector<ClusterFeature> singles;
    for (const auto& p : pts) singles.push_back(cf_from_point(p));
    CHECK(rmsd(singles, labels) == got);

    // Any injective relabeling.
    std::vector<std::size_t> relabeled = labels;
    for (auto& l : relabeled) l = 7 * l + 1003;
    CHECK(rmsd(data, relabeled) == doctest::Approx(got).epsilon(1e-12));
  }
}

TEST_CASE("aggregated and raw evaluation agree through the decomposition") {
  SplitMix64 rng(73);
  for (int trial = 0; trial < 30; ++trial) {
    // Groups of raw points folded into leaves; leaf labels lift to point labels.
    const std::size_t leaves_n = 2 + rng.below(20);
    std::vector<ClusterFeature> leaves;
    std::vector<Vector> pts;
    std::vector<std::size_t> point_leaf;
    for (std::size_t l = 0; l < leaves_n; ++l) {
      const auto members = testing_support::random_points(rng, 1 + rng.below(6), 3);
      leaves.push_back(testing_support::fold_points(members));
      for (const auto& p : members) {
        pts.push_back(p);
        point_leaf.push_back(l);
      }
    }
    std::vector<std::size_t> leaf_labels(leaves_n);
    for (auto& l : leaf_labels) l = rng.below(3);
    std::vector<std::size_t> point_labels;
    for (std::size_t l : point_leaf) point_labels.push_back(leaf_labels[l]);
    CHECK(rel_close(rmsd(leaves, leaf_labels), brute_rmsd(pts, point_labels), 1e-10));
  }
}

TEST_CASE("ward cuts rarely get worse when k doubles") {
  SplitMix64 rng(74);
  std::size_t violations = 0;
  std::size_t checks = 0;
  for (int trial = 0; trial < 10; ++trial) {
    const Dataset data = testing_support::random_dataset(rng, 256, 3);
    const Dendrogram den = ward_of(data);
    for (std::size_t k = 1; 2 * k <= data.size(); k *= 2) {
      ++checks;
      if (rmsd(data, cut(den, 2 * k).labels) > rmsd(data, cut(den, k).labels)) ++violations;
    }
  }
  MESSAGE("rmsd increases on doubling k: ", violations, " of ", checks);
  CHECK(checks > 0);
}
