#include "betula/dataset.hpp"

#include <cmath>
#include <string>

#include "betula/error.hpp"

namespace betula {

Dataset::Dataset(std::size_t dim) : dim_(dim) {
  if (dim == 0) throw InvalidInput("dataset dimensionality must be positive");
}

Dataset::Dataset(std::size_t dim, std::vector<double> values) : dim_(dim), values_(std::move(values)) {
  if (dim == 0) throw InvalidInput("dataset dimensionality must be positive");
  if (values_.size() % dim != 0) throw InvalidInput("value count is not a multiple of dim");
  require_finite(values_);
}

void Dataset::add(std::span<const double> point) {
  if (dim_ == 0) {
    if (point.empty()) throw InvalidInput("point has no coordinates");
    dim_ = point.size();
  }
  if (point.size() != dim_) {
    throw InvalidInput("point has " + std::to_string(point.size()) + " coordinates, dataset has " +
                       std::to_string(dim_));
  }
  require_finite(point);
  values_.insert(values_.end(), point.begin(), point.end());
}

Dataset Dataset::permuted(std::span<const std::size_t> order) const {
  if (order.size() != size()) throw InvalidInput("permutation length does not match dataset size");
  std::vector<double> out;
  out.reserve(values_.size());
  for (std::size_t src : order) {
    if (src >= size()) throw InvalidInput("permutation index out of range");
    auto p = (*this)[src];
    out.insert(out.end(), p.begin(), p.end());
  }
  return Dataset(dim_, std::move(out));
}

void require_finite(std::span<const double> point) {
  for (double v : point) {
    if (!std::isfinite(v)) throw InvalidInput("non-finite coordinate");
  }
}

double squared_euclidean(std::span<const double> a, std::span<const double> b) noexcept {
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) {
    const double diff = a[d] - b[d];
    s += diff * diff;
  }
  return s;
}

}  // namespace betula
