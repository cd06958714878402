#pragma once
// Small helpers shared by the test executables: seeded generators for
// property tests and tolerance checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "betula/cluster_feature.hpp"
#include "betula/dataset.hpp"
#include "betula/random.hpp"

namespace testing_support {

using betula::Dataset;
using betula::SplitMix64;
using betula::Vector;

inline bool rel_close(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

// Strict relative error, no absolute floor.
inline double rel_error(double got, double want) {
  if (want == 0.0) return std::abs(got);
  return std::abs(got - want) / std::abs(want);
}

inline Vector random_point(SplitMix64& rng, std::size_t dim, double lo = -10.0, double hi = 10.0) {
  Vector p(dim);
  for (double& x : p) x = lo + (hi - lo) * rng.uniform();
  return p;
}

inline std::vector<Vector> random_points(SplitMix64& rng, std::size_t n, std::size_t dim, double lo = -10.0,
                                         double hi = 10.0) {
  std::vector<Vector> out;
  out.reserve(n);
  for (std::size_t i = 0; i < n; ++i) out.push_back(random_point(rng, dim, lo, hi));
  return out;
}

inline Dataset to_dataset(const std::vector<Vector>& points) {
  Dataset d(points.front().size());
  for (const Vector& p : points) d.add(p);
  return d;
}

inline Dataset random_dataset(SplitMix64& rng, std::size_t n, std::size_t dim, double lo = -10.0,
                              double hi = 10.0) {
  return to_dataset(random_points(rng, n, dim, lo, hi));
}

// Points on a coarse integer grid produce lots of exact ties; useful for
// checking that engines agree on the tie rule.
inline Dataset grid_dataset(SplitMix64& rng, std::size_t n, std::size_t dim, std::uint64_t span = 4) {
  Dataset d(dim);
  Vector p(dim);
  for (std::size_t i = 0; i < n; ++i) {
    for (double& x : p) x = static_cast<double>(rng.below(span));
    d.add(p);
  }
  return d;
}

inline std::vector<Vector> rows_of(const Dataset& d) {
  std::vector<Vector> out;
  for (std::size_t i = 0; i < d.size(); ++i) out.emplace_back(d[i].begin(), d[i].end());
  return out;
}

inline betula::ClusterFeature fold_points(const std::vector<Vector>& points) {
  betula::ClusterFeature cf = betula::ClusterFeature::empty(points.front().size());
  for (const Vector& p : points) cf.absorb(betula::cf_from_point(p));
  return cf;
}

}  // namespace testing_support
