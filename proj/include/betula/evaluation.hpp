#pragma once

#include <cstddef>
#include <span>
#include <vector>

#include "betula/cluster_feature.hpp"
#include "betula/dataset.hpp"
#include "betula/dendrogram.hpp"

namespace betula {

struct FlatClustering {
  /// One label in [0, k) per dendrogram item; labels are numbered by first
  /// appearance in item order.
  std::vector<std::size_t> labels;
  std::size_t k = 0;
};

/// Applies the first n0-k merges. Throws InvalidInput unless 1 <= k <= n0.
FlatClustering cut(const Dendrogram& dendrogram, std::size_t k);

/// sqrt(sum over clusters and members of [sse_i + n_i ||mu_i - mu_c||^2] /
/// sum n_i), i.e. the deviation of the underlying points from their flat
/// cluster means, including the spread hidden inside each feature.
double rmsd(std::span<const ClusterFeature> items, std::span<const std::size_t> labels);

/// Same measure for raw points; `weights` empty means unit weights.
double rmsd(const Dataset& data, std::span<const std::size_t> labels, std::span<const double> weights = {});

}  // namespace betula
