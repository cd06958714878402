#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace betula {

using Vector = std::vector<double>;

/// Dense row-major point set with a fixed dimensionality. Points are
/// addressed by their 0-based insertion index.
class Dataset {
 public:
  Dataset() = default;
  explicit Dataset(std::size_t dim);
  Dataset(std::size_t dim, std::vector<double> values);

  std::size_t dim() const noexcept { return dim_; }
  std::size_t size() const noexcept { return dim_ == 0 ? 0 : values_.size() / dim_; }
  bool empty() const noexcept { return values_.empty(); }

  std::span<const double> operator[](std::size_t i) const {
    return {values_.data() + i * dim_, dim_};
  }
  std::span<double> mutable_point(std::size_t i) { return {values_.data() + i * dim_, dim_}; }

  /// Appends a point; throws InvalidInput on dimension mismatch or
  /// non-finite coordinates. The first point fixes dim for a default
  /// constructed dataset.
  void add(std::span<const double> point);

  const std::vector<double>& values() const noexcept { return values_; }

  /// Returns the points reordered so that row i is old row order[i].
  Dataset permuted(std::span<const std::size_t> order) const;

  friend bool operator==(const Dataset&, const Dataset&) = default;

 private:
  std::size_t dim_ = 0;
  std::vector<double> values_;
};

/// Throws InvalidInput unless every coordinate is finite.
void require_finite(std::span<const double> point);

double squared_euclidean(std::span<const double> a, std::span<const double> b) noexcept;

}  // namespace betula
