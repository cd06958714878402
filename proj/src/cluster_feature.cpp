#include "betula/cluster_feature.hpp"

#include <cmath>

#include "betula/error.hpp"

namespace betula {

namespace {

void require_same_dim(const ClusterFeature& a, const ClusterFeature& b) {
  if (a.dim() != b.dim()) throw InvalidInput("cluster feature dimension mismatch");
}

}  // namespace

ClusterFeature::ClusterFeature(double weight, Vector mean, double sse)
    : weight_(weight), mean_(std::move(mean)), sse_(sse) {
  if (!std::isfinite(weight) || weight < 0.0) throw InvalidInput("cluster feature weight must be finite and >= 0");
  if (!std::isfinite(sse) || sse < 0.0) throw InvalidInput("cluster feature sse must be finite and >= 0");
  require_finite(mean_);
}

void ClusterFeature::absorb(const ClusterFeature& other) {
  require_same_dim(*this, other);
  if (other.weight_ == 0.0) {
    sse_ += other.sse_;
    return;
  }
  if (weight_ == 0.0) {
    weight_ = other.weight_;
    mean_ = other.mean_;
    sse_ += other.sse_;
    return;
  }
  const double total = weight_ + other.weight_;
  const double step = other.weight_ / total;
  double scatter = 0.0;
  for (std::size_t d = 0; d < mean_.size(); ++d) {
    const double delta = other.mean_[d] - mean_[d];
    mean_[d] += step * delta;
    scatter += delta * (other.mean_[d] - mean_[d]);
  }
  double sse = sse_ + other.sse_ + other.weight_ * scatter;
  if (sse < 0.0) {
    double norm = 0.0;
    for (double m : mean_) norm += m * m;
    // Cancellation only; anything larger means corrupted input.
    if (-sse <= 1e-9 * (1.0 + norm * total)) sse = 0.0;
  }
  weight_ = total;
  sse_ = sse;
}

ClusterFeature cf_from_point(std::span<const double> p) {
  if (p.empty()) throw InvalidInput("point has no coordinates");
  require_finite(p);
  return ClusterFeature(1.0, Vector(p.begin(), p.end()), 0.0);
}

ClusterFeature cf_merge(const ClusterFeature& a, const ClusterFeature& b) {
  require_same_dim(a, b);
  ClusterFeature out = a;
  out.absorb(b);
  return out;
}

double cf_centroid_sq_dist(const ClusterFeature& a, const ClusterFeature& b) {
  require_same_dim(a, b);
  return squared_euclidean(a.mean(), b.mean());
}

ClusterFeature cf_of(const Dataset& data) {
  if (data.empty()) throw InvalidInput("cannot summarize an empty dataset");
  ClusterFeature cf = ClusterFeature::empty(data.dim());
  for (std::size_t i = 0; i < data.size(); ++i) cf.absorb(cf_from_point(data[i]));
  return cf;
}

}  // namespace betula
