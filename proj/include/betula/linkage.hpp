#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <string_view>
#include <vector>

#include "betula/cluster_feature.hpp"
#include "betula/dataset.hpp"

namespace betula {

enum class LinkageKind { Single, Complete, UPGMA, WPGMA, UPGMC, WPGMC, Ward };

inline constexpr LinkageKind kAllLinkages[] = {LinkageKind::Single, LinkageKind::Complete, LinkageKind::UPGMA,
                                               LinkageKind::WPGMA,  LinkageKind::UPGMC,    LinkageKind::WPGMC,
                                               LinkageKind::Ward};

std::string_view to_string(LinkageKind kind) noexcept;
std::optional<LinkageKind> parse_linkage(std::string_view name);

/// Whether the distance matrix holds d(a,b) or d(a,b)^2.
enum class InitMode { Plain, Squared };

/// Base dissimilarity between points. Squared-init linkages are tied to
/// Euclidean; the plain-init ones accept either, and only squared Euclidean
/// gives UPGMA an exact counterpart on cluster features.
enum class BaseMetric { Euclidean, SquaredEuclidean };

struct LanceWilliams {
  double alpha_a;
  double alpha_b;
  double beta;
  double gamma;
};

/// Reducible linkages never produce inversions and are safe for NN-chain.
bool is_reducible(LinkageKind kind) noexcept;

class LinkageSpec {
 public:
  /// Throws InvalidInput when a squared-init linkage is paired with the
  /// squared Euclidean base metric.
  explicit LinkageSpec(LinkageKind kind, BaseMetric metric = BaseMetric::Euclidean);

  LinkageKind kind() const noexcept { return kind_; }
  BaseMetric metric() const noexcept { return metric_; }
  InitMode init_mode() const noexcept;
  /// True when matrix values are squared Euclidean distances, either via
  /// the init mode or the base metric.
  bool squared_values() const noexcept;

  /// Recurrence factors for merging A and B, seen from C.
  LanceWilliams coefficients(double n_a, double n_b, double n_c) const noexcept;

 private:
  LinkageKind kind_;
  BaseMetric metric_;
};

/// d(A u B, C) from d(A,C), d(B,C), d(A,B), in the matrix representation.
/// Throws InvalidInput for non-positive sizes.
double lw_update(const LinkageSpec& spec, double d_ac, double d_bc, double d_ab, double n_a, double n_b, double n_c);

/// Upper triangle of a symmetric m x m matrix, row by row.
class CondensedDistanceMatrix {
 public:
  CondensedDistanceMatrix() = default;
  explicit CondensedDistanceMatrix(std::size_t m) : m_(m), values_(m < 2 ? 0 : m * (m - 1) / 2, 0.0) {}

  std::size_t size() const noexcept { return m_; }
  std::size_t entry_count() const noexcept { return values_.size(); }

  /// Offset of (i, j), i < j.
  std::size_t offset(std::size_t i, std::size_t j) const noexcept { return i * (2 * m_ - i - 1) / 2 + (j - i - 1); }

  double at(std::size_t i, std::size_t j) const noexcept {
    return i < j ? values_[offset(i, j)] : values_[offset(j, i)];
  }
  void set(std::size_t i, std::size_t j, double v) noexcept {
    (i < j ? values_[offset(i, j)] : values_[offset(j, i)]) = v;
  }

  /// Contiguous row segment (i, i+1..m-1).
  std::span<double> row_tail(std::size_t i) noexcept { return {values_.data() + offset(i, i + 1), m_ - i - 1}; }
  std::span<const double> row_tail(std::size_t i) const noexcept {
    return {values_.data() + offset(i, i + 1), m_ - i - 1};
  }

  std::span<const double> values() const noexcept { return values_; }
  std::span<double> values() noexcept { return values_; }

  friend bool operator==(const CondensedDistanceMatrix&, const CondensedDistanceMatrix&) = default;

 private:
  std::size_t m_ = 0;
  std::vector<double> values_;
};

/// Pairwise point dissimilarities in the representation chosen by `spec`. Throws
/// InvalidInput for fewer than two points. `threads` > 1 splits rows
/// across workers; the result is identical to the sequential one.
CondensedDistanceMatrix init_matrix_points(const Dataset& data, const LinkageSpec& spec, unsigned threads = 1);

struct FeatureMatrix {
  CondensedDistanceMatrix matrix;
  std::vector<double> sizes;
};

/// Initial cluster distances between leaf features through the matching
/// BIRCH criterion (UPGMA/WPGMA: D2, UPGMC/WPGMC: D0^2, Ward: 2 D4^2,
/// Single/Complete: D0 between centers), expressed in the matrix
/// representation chosen by `spec`. Sizes are the leaf weights, or all ones for WPGMA/WPGMC.
FeatureMatrix init_matrix_cfs(std::span<const ClusterFeature> leaves, const LinkageSpec& spec, unsigned threads = 1);

}  // namespace betula
