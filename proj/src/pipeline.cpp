#include "betula/pipeline.hpp"

#include <chrono>

#include "betula/error.hpp"

namespace betula {

namespace {

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point start) {
  return std::chrono::duration<double>(Clock::now() - start).count();
}

std::vector<ClusterFeature> singleton_features(const Dataset& data) {
  std::vector<ClusterFeature> out;
  out.reserve(data.size());
  for (std::size_t i = 0; i < data.size(); ++i) out.push_back(cf_from_point(data[i]));
  return out;
}

Dataset centers_of(const std::vector<ClusterFeature>& leaves) {
  Dataset centers(leaves.front().dim());
  for (const auto& cf : leaves) centers.add(cf.mean());
  return centers;
}

}  // namespace

std::string_view to_string(InputMode mode) noexcept {
  switch (mode) {
    case InputMode::FullData:
      return "full";
    case InputMode::CFCenters:
      return "cf-centers";
    case InputMode::CFLinkage:
      return "cf-linkage";
    case InputMode::CFAggregation:
      return "cf-aggregation";
  }
  return "?";
}

std::optional<InputMode> parse_input_mode(std::string_view name) {
  for (InputMode m : {InputMode::FullData, InputMode::CFCenters, InputMode::CFLinkage, InputMode::CFAggregation}) {
    if (to_string(m) == name) return m;
  }
  if (name == "full-data") return InputMode::FullData;
  return std::nullopt;
}

void PipelineConfig::validate() const {
  if (mode == InputMode::CFAggregation) {
    if (!criterion) throw InvalidInput("cf-aggregation needs a criterion");
    if (linkage) throw InvalidInput("cf-aggregation takes a criterion, not a linkage");
    if (linear_memory) throw InvalidInput("cf-aggregation with nnchain is already matrix-free");
  } else {
    if (!linkage) throw InvalidInput(std::string(to_string(mode)) + " needs a linkage");
    if (criterion) throw InvalidInput(std::string(to_string(mode)) + " takes a linkage, not a criterion");
  }
  if (linear_memory && engine != Engine::NNChain) throw InvalidInput("linear memory needs the nnchain engine");
  if (mode != InputMode::FullData) tree.validate();
}

PipelineResult run_pipeline(const Dataset& data, const PipelineConfig& config) {
  config.validate();
  if (data.size() < 2) throw InvalidInput("need at least two points to cluster");
  PipelineResult result;

  if (config.mode == InputMode::FullData) {
    result.items = singleton_features(data);
    const auto start = Clock::now();
    if (config.linear_memory) {
      result.dendrogram = hac_nnchain_linear(result.items, *config.linkage, &result.stats);
    } else {
      CondensedDistanceMatrix matrix = init_matrix_points(data, *config.linkage, config.threads);
      result.dendrogram = hac(config.engine, std::move(matrix), std::vector<double>(data.size(), 1.0),
                              *config.linkage, &result.stats);
    }
    result.cluster_seconds = seconds_since(start);
    return result;
  }

  const auto tree_start = Clock::now();
  CFTree tree = build_tree(data, config.tree);
  for (LeafEntry& e : tree.leaf_entries_by_arrival()) result.items.push_back(std::move(e.cf));
  result.tree_seconds = seconds_since(tree_start);
  result.leaf_count = result.items.size();
  result.rebuilds = tree.rebuild_count();
  result.final_threshold = tree.threshold();
  if (result.items.size() < 2) throw InvalidInput("the tree aggregated everything into a single leaf");

  const auto start = Clock::now();
  switch (config.mode) {
    case InputMode::CFCenters: {
      const Dataset centers = centers_of(result.items);
      if (config.linear_memory) {
        result.dendrogram = hac_nnchain_linear(singleton_features(centers), *config.linkage, &result.stats);
      } else {
        result.dendrogram = hac(config.engine, init_matrix_points(centers, *config.linkage, config.threads),
                                std::vector<double>(centers.size(), 1.0), *config.linkage, &result.stats);
      }
      break;
    }
    case InputMode::CFLinkage:
      if (config.linear_memory) {
        result.dendrogram = hac_nnchain_linear(result.items, *config.linkage, &result.stats);
      } else {
        FeatureMatrix fm = init_matrix_cfs(result.items, *config.linkage, config.threads);
        result.dendrogram =
            hac(config.engine, std::move(fm.matrix), std::move(fm.sizes), *config.linkage, &result.stats);
      }
      break;
    case InputMode::CFAggregation:
      result.dendrogram = hac_cf_aggregation(result.items, *config.criterion, config.engine, &result.stats);
      break;
    case InputMode::FullData:
      break;
  }
  result.cluster_seconds = seconds_since(start);
  return result;
}

}  // namespace betula
