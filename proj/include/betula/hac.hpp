#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "betula/cf_distance.hpp"
#include "betula/cluster_feature.hpp"
#include "betula/dendrogram.hpp"
#include "betula/linkage.hpp"

namespace betula {

enum class Engine { Naive, Anderberg, NNChain };

std::string_view to_string(Engine engine) noexcept;
std::optional<Engine> parse_engine(std::string_view name);

struct HacStats {
  /// Calls of the cluster distance update (Lance-Williams or feature
  /// criterion).
  std::uint64_t recurrence_evaluations = 0;
  /// Distance lookups while searching for nearest neighbors.
  std::uint64_t distance_reads = 0;
  std::vector<std::string> warnings;
};

// All engines share one tie rule: among pairs at the minimal distance the
// lexicographically smallest (lower slot, higher slot) wins, where slot i
// initially holds item i and a merged cluster keeps the lower slot of its
// two parts. A merge records the cluster ids of (lower slot, higher slot).

/// Reference engine: a full scan for the closest pair at every step.
Dendrogram hac_naive(CondensedDistanceMatrix matrix, std::vector<double> sizes, const LinkageSpec& spec,
                     HacStats* stats = nullptr);

/// Caches each row's nearest neighbor to the right; same merges as
/// hac_naive, usually close to quadratic time.
Dendrogram hac_anderberg(CondensedDistanceMatrix matrix, std::vector<double> sizes, const LinkageSpec& spec,
                         HacStats* stats = nullptr);

/// Nearest-neighbor chain over the matrix; O(m^2). Merges are reported in
/// height order for reducible linkages. Centroid and median linkage are
/// accepted with a warning in `stats` and reported in discovery order.
Dendrogram hac_nnchain(CondensedDistanceMatrix matrix, std::vector<double> sizes, const LinkageSpec& spec,
                       HacStats* stats = nullptr);

Dendrogram hac(Engine engine, CondensedDistanceMatrix matrix, std::vector<double> sizes, const LinkageSpec& spec,
               HacStats* stats = nullptr);

/// Nearest-neighbor chain without a distance matrix, for linkages whose
/// cluster distance follows from per-cluster statistics: Ward (2 D4^2),
/// UPGMC (D0^2), WPGMC (squared distance of recursive midpoints) and UPGMA
/// on squared Euclidean (D2^2). Memory is linear in the number of
/// clusters. Throws InvalidInput for other linkages.
Dendrogram hac_nnchain_linear(std::span<const ClusterFeature> items, const LinkageSpec& spec,
                              HacStats* stats = nullptr);

/// Clusters features directly: after each merge the pair is replaced by its
/// merged feature and distances to it are re-derived with the criterion.
/// Heights are squared criterion values (plain for D1). The NN-chain engine
/// runs matrix-free. Throws InvalidInput for fewer than two leaves.
Dendrogram hac_cf_aggregation(std::span<const ClusterFeature> leaves, CFDistanceKind kind, Engine engine,
                              HacStats* stats = nullptr);

}  // namespace betula
