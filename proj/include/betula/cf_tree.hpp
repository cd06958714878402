#pragma once

#include <cstddef>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <vector>

#include "betula/cf_distance.hpp"
#include "betula/cluster_feature.hpp"
#include "betula/dataset.hpp"

namespace betula {

inline constexpr std::size_t kUnboundedLeaves = std::numeric_limits<std::size_t>::max();

struct TreeConfig {
  /// Maximum children per inner node; also the capacity of a leaf node.
  std::size_t branching_factor = 32;
  /// Rebuild trigger. kUnboundedLeaves keeps a fixed threshold forever.
  std::size_t max_leaf_entries = 25000;
  /// Absorption test against the threshold.
  CFDistanceKind criterion = CFDistanceKind::R;
  /// Descent, closest-entry choice and split seeding. Radius and diameter
  /// are poor here: adding one point barely changes a large child's value,
  /// so the descent drifts toward tight children instead of near ones.
  CFDistanceKind routing = CFDistanceKind::D4;
  /// Absorption threshold in criterion units (not squared).
  double initial_threshold = 0.0;
  /// Seeds the sampling used to pick the first non-zero threshold.
  std::uint64_t seed = 0x5eed;

  /// Throws InvalidInput if any bound is violated.
  void validate() const;
};

/// A leaf entry together with the arrival index of the earliest point it
/// absorbed, which gives leaves a stable input-order ranking.
struct LeafEntry {
  ClusterFeature cf;
  std::size_t first_seen = 0;
};

/// Height-balanced cluster feature tree built by sequential insertion.
///
/// Each insert descends to the closest child on every level (lowest index
/// on ties) by the routing criterion, then either absorbs into the closest
/// entry of the reached leaf node when the absorption criterion between the
/// two is <= threshold, or appends a new entry. Nodes
/// that overflow are split around their two most distant entries. When the
/// leaf entry count exceeds the cap, the tree is rebuilt from its own leaf
/// entries under a larger threshold until it fits again.
class CFTree {
 public:
  explicit CFTree(TreeConfig config = {});
  ~CFTree();
  CFTree(CFTree&&) noexcept;
  CFTree& operator=(CFTree&&) noexcept;
  CFTree(const CFTree&) = delete;
  CFTree& operator=(const CFTree&) = delete;

  /// Inserts one point. Throws InvalidInput on dimension mismatch or
  /// non-finite coordinates, leaving the tree untouched.
  void insert(std::span<const double> point);

  /// Inserts an already aggregated feature (weight > 0).
  void insert(const ClusterFeature& cf);

  /// Re-inserts all leaf entries into a fresh tree under `new_threshold`.
  /// Throws InvalidInput unless new_threshold > threshold().
  void rebuild(double new_threshold);

  /// Leaf entry features, left to right.
  std::vector<ClusterFeature> leaves() const;
  /// Leaf entries, left to right.
  std::vector<LeafEntry> leaf_entries() const;
  /// Leaf entries ordered by their first absorbed point.
  std::vector<LeafEntry> leaf_entries_by_arrival() const;

  std::size_t leaf_count() const noexcept { return leaf_count_; }
  double threshold() const noexcept { return threshold_; }
  std::size_t rebuild_count() const noexcept { return rebuilds_; }
  std::size_t points_inserted() const noexcept { return arrivals_; }
  std::size_t dim() const noexcept { return dim_; }
  std::size_t height() const;
  const TreeConfig& config() const noexcept { return config_; }

  /// Feature of everything inserted so far (zero feature when empty).
  ClusterFeature root_feature() const;

  /// Largest relative deviation between a stored inner-node summary and
  /// the fold of its children, over the whole tree.
  double max_summary_deviation() const;

 private:
  struct Node;

  void insert_entry(const ClusterFeature& cf, std::size_t first_seen);
  std::unique_ptr<Node> insert_into(Node& node, const ClusterFeature& cf, std::size_t first_seen);
  std::unique_ptr<Node> split(Node& node);
  std::size_t nearest(const std::vector<ClusterFeature>& candidates, const ClusterFeature& cf) const;
  double grown_threshold() const;
  void enforce_cap();
  void require_dim(std::size_t dim);

  TreeConfig config_;
  std::unique_ptr<Node> root_;
  std::size_t dim_ = 0;
  std::size_t leaf_count_ = 0;
  std::size_t arrivals_ = 0;
  std::size_t rebuilds_ = 0;
  double threshold_ = 0.0;
};

/// Inserts every point of `data` in index order. Throws InvalidInput when
/// the dataset is empty.
CFTree build_tree(const Dataset& data, const TreeConfig& config);

}  // namespace betula
