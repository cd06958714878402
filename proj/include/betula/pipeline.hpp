#pragma once

#include <cstddef>
#include <optional>
#include <string_view>
#include <vector>

#include "betula/cf_distance.hpp"
#include "betula/cf_tree.hpp"
#include "betula/dataset.hpp"
#include "betula/dendrogram.hpp"
#include "betula/hac.hpp"
#include "betula/linkage.hpp"

namespace betula {

/// How the data reaches the clustering step.
///   FullData       every point is its own initial cluster, no tree
///   CFCenters      leaf means, unit weights, plain point distances
///   CFLinkage      leaf features through init_matrix_cfs, then Lance-Williams
///   CFAggregation  leaf features merged and re-measured with a criterion
enum class InputMode { FullData, CFCenters, CFLinkage, CFAggregation };

std::string_view to_string(InputMode mode) noexcept;
std::optional<InputMode> parse_input_mode(std::string_view name);

struct PipelineConfig {
  InputMode mode = InputMode::FullData;
  Engine engine = Engine::Anderberg;
  /// Required by every mode except CFAggregation.
  std::optional<LinkageSpec> linkage;
  /// Required by CFAggregation, rejected otherwise.
  std::optional<CFDistanceKind> criterion;
  TreeConfig tree;
  /// NN-chain without a distance matrix (see hac_nnchain_linear).
  bool linear_memory = false;
  unsigned threads = 1;

  /// Throws InvalidInput for inconsistent combinations.
  void validate() const;
};

struct PipelineResult {
  Dendrogram dendrogram;
  /// What the dendrogram's items are: one singleton feature per point for
  /// FullData, the leaf features (in order of first arrival) otherwise.
  std::vector<ClusterFeature> items;
  std::optional<std::size_t> leaf_count;
  std::size_t rebuilds = 0;
  double final_threshold = 0.0;
  double tree_seconds = 0.0;
  double cluster_seconds = 0.0;
  HacStats stats;
};

/// Throws InvalidInput on bad configs or fewer than two items to cluster.
PipelineResult run_pipeline(const Dataset& data, const PipelineConfig& config);

}  // namespace betula
