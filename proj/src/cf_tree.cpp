#include "betula/cf_tree.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "betula/error.hpp"
#include "betula/random.hpp"

namespace betula {

struct CFTree::Node {
  bool leaf = true;
  // Leaf: entry features. Inner: one summary per child.
  std::vector<ClusterFeature> cfs;
  std::vector<std::size_t> first_seen;  // leaf only
  std::vector<std::unique_ptr<Node>> children;  // inner only
};

namespace {

ClusterFeature fold(const std::vector<ClusterFeature>& cfs) {
  ClusterFeature out = ClusterFeature::empty(cfs.front().dim());
  for (const auto& cf : cfs) out.absorb(cf);
  return out;
}

template <class Node>
void collect(const Node& node, std::vector<LeafEntry>& out) {
  if (node.leaf) {
    for (std::size_t i = 0; i < node.cfs.size(); ++i) out.push_back({node.cfs[i], node.first_seen[i]});
    return;
  }
  for (const auto& child : node.children) collect(*child, out);
}

double relative_gap(double a, double b) { return std::abs(a - b) / std::max(1.0, std::max(std::abs(a), std::abs(b))); }

template <class Node>
double summary_deviation(const Node& node) {
  if (node.leaf) return 0.0;
  double worst = 0.0;
  for (std::size_t i = 0; i < node.children.size(); ++i) {
    const Node& child = *node.children[i];
    const ClusterFeature expected = fold(child.cfs);
    const ClusterFeature& stored = node.cfs[i];
    worst = std::max(worst, relative_gap(expected.weight(), stored.weight()));
    worst = std::max(worst, relative_gap(expected.sse(), stored.sse()));
    for (std::size_t d = 0; d < expected.dim(); ++d) {
      worst = std::max(worst, relative_gap(expected.mean()[d], stored.mean()[d]));
    }
    worst = std::max(worst, summary_deviation(child));
  }
  return worst;
}

}  // namespace

void TreeConfig::validate() const {
  if (branching_factor < 2) throw InvalidInput("branching factor must be >= 2");
  if (max_leaf_entries < 1) throw InvalidInput("max leaf entries must be >= 1");
  if (!(initial_threshold >= 0.0)) throw InvalidInput("threshold must be >= 0");
}

CFTree::CFTree(TreeConfig config) : config_(config), threshold_(config.initial_threshold) {
  config_.validate();
}

CFTree::~CFTree() = default;
CFTree::CFTree(CFTree&&) noexcept = default;
CFTree& CFTree::operator=(CFTree&&) noexcept = default;

void CFTree::require_dim(std::size_t dim) {
  if (dim == 0) throw InvalidInput("point has no coordinates");
  if (dim_ != 0 && dim != dim_) {
    throw InvalidInput("point has " + std::to_string(dim) + " coordinates, tree has " + std::to_string(dim_));
  }
}

void CFTree::insert(std::span<const double> point) {
  require_dim(point.size());
  ClusterFeature cf = cf_from_point(point);
  dim_ = point.size();
  insert_entry(cf, arrivals_++);
  enforce_cap();
}

void CFTree::insert(const ClusterFeature& cf) {
  require_dim(cf.dim());
  if (!(cf.weight() > 0.0)) throw InvalidInput("cannot insert a zero-weight cluster feature");
  dim_ = cf.dim();
  insert_entry(cf, arrivals_++);
  enforce_cap();
}

void CFTree::insert_entry(const ClusterFeature& cf, std::size_t first_seen) {
  if (!root_) root_ = std::make_unique<Node>();
  std::unique_ptr<Node> sibling = insert_into(*root_, cf, first_seen);
  if (!sibling) return;
  auto root = std::make_unique<Node>();
  root->leaf = false;
  root->cfs.push_back(fold(root_->cfs));
  root->cfs.push_back(fold(sibling->cfs));
  root->children.push_back(std::move(root_));
  root->children.push_back(std::move(sibling));
  root_ = std::move(root);
}

std::size_t CFTree::nearest(const std::vector<ClusterFeature>& candidates, const ClusterFeature& cf) const {
  std::size_t best = 0;
  double best_value = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < candidates.size(); ++i) {
    const double v = cf_distance_squared(config_.routing, candidates[i], cf);
    if (v < best_value) {
      best_value = v;
      best = i;
    }
  }
  return best;
}

std::unique_ptr<CFTree::Node> CFTree::insert_into(Node& node, const ClusterFeature& cf, std::size_t first_seen) {
  if (node.leaf) {
    if (!node.cfs.empty()) {
      const std::size_t i = nearest(node.cfs, cf);
      // Squared comparison; the criterion is non-negative so this matches
      // value <= threshold, and threshold = inf absorbs everything.
      if (cf_distance_squared(config_.criterion, node.cfs[i], cf) <= threshold_ * threshold_) {
        node.cfs[i].absorb(cf);
        node.first_seen[i] = std::min(node.first_seen[i], first_seen);
        return nullptr;
      }
    }
    node.cfs.push_back(cf);
    node.first_seen.push_back(first_seen);
    ++leaf_count_;
    return node.cfs.size() > config_.branching_factor ? split(node) : nullptr;
  }

  const std::size_t i = nearest(node.cfs, cf);
  std::unique_ptr<Node> sibling = insert_into(*node.children[i], cf, first_seen);
  if (!sibling) {
    node.cfs[i].absorb(cf);
    return nullptr;
  }
  node.cfs[i] = fold(node.children[i]->cfs);
  node.cfs.insert(node.cfs.begin() + static_cast<std::ptrdiff_t>(i) + 1, fold(sibling->cfs));
  node.children.insert(node.children.begin() + static_cast<std::ptrdiff_t>(i) + 1, std::move(sibling));
  return node.cfs.size() > config_.branching_factor ? split(node) : nullptr;
}

std::unique_ptr<CFTree::Node> CFTree::split(Node& node) {
  const std::size_t count = node.cfs.size();
  std::size_t seed_a = 0;
  std::size_t seed_b = 1;
  double widest = -1.0;
  for (std::size_t i = 0; i < count; ++i) {
    for (std::size_t j = i + 1; j < count; ++j) {
      const double v = cf_distance_squared(config_.routing, node.cfs[i], node.cfs[j]);
      if (v > widest) {
        widest = v;
        seed_a = i;
        seed_b = j;
      }
    }
  }

  Node kept;
  kept.leaf = node.leaf;
  auto moved = std::make_unique<Node>();
  moved->leaf = node.leaf;
  std::vector<bool> to_second(count, false);
  for (std::size_t i = 0; i < count; ++i) {
    to_second[i] = i == seed_b;
    if (i != seed_a && i != seed_b) {
      const double da = cf_distance_squared(config_.routing, node.cfs[i], node.cfs[seed_a]);
      const double db = cf_distance_squared(config_.routing, node.cfs[i], node.cfs[seed_b]);
      to_second[i] = db < da;
    }
  }
  for (std::size_t i = 0; i < count; ++i) {
    Node& target = to_second[i] ? *moved : kept;
    target.cfs.push_back(std::move(node.cfs[i]));
    if (node.leaf) {
      target.first_seen.push_back(node.first_seen[i]);
    } else {
      target.children.push_back(std::move(node.children[i]));
    }
  }
  node = std::move(kept);
  return moved;
}

double CFTree::grown_threshold() const {
  // Median over sampled leaf entries of the criterion to their closest
  // other entry: roughly the threshold at which half the entries find a
  // partner. Plain doubling overshoots badly once dim > 1, since the leaf
  // count falls like 2^-dim per doubling.
  constexpr double kMinGrowth = 1.25;
  const std::vector<ClusterFeature> all = leaves();
  SplitMix64 rng(config_.seed ^ rebuilds_);
  constexpr std::size_t kSamples = 256;
  std::vector<double> nn;
  nn.reserve(kSamples);
  for (std::size_t s = 0; s < kSamples && all.size() > 1; ++s) {
    const std::size_t i = rng.below(all.size());
    double best = std::numeric_limits<double>::infinity();
    for (std::size_t j = 0; j < all.size(); ++j) {
      if (j != i) best = std::min(best, cf_distance_squared(config_.criterion, all[i], all[j]));
    }
    nn.push_back(best);
  }
  std::sort(nn.begin(), nn.end());
  double estimate = 0.0;
  if (!nn.empty()) {
    estimate = std::sqrt(nn[nn.size() / 2]);
    if (estimate == 0.0) {
      const auto positive = std::upper_bound(nn.begin(), nn.end(), 0.0);
      if (positive != nn.end()) estimate = std::sqrt(*positive);
    }
  }
  if (threshold_ > 0.0) return std::max(estimate, kMinGrowth * threshold_);
  if (estimate > 0.0) return estimate;

  // Sampled entries all have an exact duplicate elsewhere; fall back to
  // the typical distance between random entries.
  std::vector<double> pairs;
  for (std::size_t s = 0; s < kSamples && all.size() > 1; ++s) {
    const std::size_t i = rng.below(all.size());
    const std::size_t j = rng.below(all.size());
    if (i != j) pairs.push_back(cf_distance_squared(config_.criterion, all[i], all[j]));
  }
  std::sort(pairs.begin(), pairs.end());
  const auto positive = std::upper_bound(pairs.begin(), pairs.end(), 0.0);
  return positive != pairs.end() ? std::sqrt(*positive) : 1.0;
}

void CFTree::enforce_cap() {
  while (leaf_count_ > config_.max_leaf_entries) rebuild(grown_threshold());
}

void CFTree::rebuild(double new_threshold) {
  if (!(new_threshold > threshold_)) throw InvalidInput("rebuild threshold must increase");
  std::vector<LeafEntry> entries = leaf_entries();
  root_.reset();
  leaf_count_ = 0;
  threshold_ = new_threshold;
  for (const LeafEntry& e : entries) insert_entry(e.cf, e.first_seen);
  ++rebuilds_;
}

std::vector<LeafEntry> CFTree::leaf_entries() const {
  std::vector<LeafEntry> out;
  out.reserve(leaf_count_);
  if (root_) collect(*root_, out);
  return out;
}

std::vector<LeafEntry> CFTree::leaf_entries_by_arrival() const {
  std::vector<LeafEntry> out = leaf_entries();
  std::sort(out.begin(), out.end(), [](const LeafEntry& a, const LeafEntry& b) { return a.first_seen < b.first_seen; });
  return out;
}

std::vector<ClusterFeature> CFTree::leaves() const {
  std::vector<ClusterFeature> out;
  out.reserve(leaf_count_);
  for (LeafEntry& e : leaf_entries()) out.push_back(std::move(e.cf));
  return out;
}

std::size_t CFTree::height() const {
  std::size_t h = 0;
  for (const Node* n = root_.get(); n; n = n->leaf ? nullptr : n->children.front().get()) ++h;
  return h;
}

ClusterFeature CFTree::root_feature() const {
  if (!root_ || root_->cfs.empty()) return ClusterFeature::empty(dim_);
  return fold(root_->cfs);
}

double CFTree::max_summary_deviation() const { return root_ ? summary_deviation(*root_) : 0.0; }

CFTree build_tree(const Dataset& data, const TreeConfig& config) {
  if (data.empty()) throw InvalidInput("cannot build a tree from an empty dataset");
  CFTree tree(config);
  for (std::size_t i = 0; i < data.size(); ++i) tree.insert(data[i]);
  return tree;
}

}  // namespace betula
