#pragma once

#include <span>

#include "betula/dataset.hpp"

namespace betula {

/// BETULA cluster feature: aggregated weight, mean vector and the sum of
/// squared deviations from the mean (summed over all dimensions).
///
/// The (n, mean, sse) representation is updated with the incremental
/// mean/variance recurrences, which stay accurate far from the origin where
/// the linear-sum/square-sum form of classic BIRCH loses all precision.
class ClusterFeature {
 public:
  ClusterFeature() = default;

  /// Throws InvalidInput for negative/non-finite weight or sse, or a
  /// non-finite mean.
  ClusterFeature(double weight, Vector mean, double sse);

  /// The zero-weight identity element of `merge` in the given dimension.
  static ClusterFeature empty(std::size_t dim) { return ClusterFeature(0.0, Vector(dim, 0.0), 0.0); }

  double weight() const noexcept { return weight_; }
  const Vector& mean() const noexcept { return mean_; }
  double sse() const noexcept { return sse_; }
  std::size_t dim() const noexcept { return mean_.size(); }

  /// In-place merge; `*this` becomes this (+) other.
  void absorb(const ClusterFeature& other);

  friend bool operator==(const ClusterFeature&, const ClusterFeature&) = default;

 private:
  double weight_ = 0.0;
  Vector mean_;
  double sse_ = 0.0;
};

/// (1, p, 0). Throws InvalidInput on non-finite coordinates or empty p.
ClusterFeature cf_from_point(std::span<const double> p);

/// Combined feature of two disjoint sets. Throws InvalidInput on dimension
/// mismatch. Merging two zero-weight features yields a zero feature at the
/// first operand's mean.
ClusterFeature cf_merge(const ClusterFeature& a, const ClusterFeature& b);

/// ||mean(a) - mean(b)||^2. Throws InvalidInput on dimension mismatch.
double cf_centroid_sq_dist(const ClusterFeature& a, const ClusterFeature& b);

/// Folds every point of the dataset into one feature, in index order.
ClusterFeature cf_of(const Dataset& data);

}  // namespace betula
