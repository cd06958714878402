#include "betula/hac.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "betula/error.hpp"

namespace betula {

namespace {

constexpr std::size_t kNone = std::numeric_limits<std::size_t>::max();
constexpr double kInf = std::numeric_limits<double>::infinity();

// Merge between the clusters currently held by slots lo < hi.
struct SlotMerge {
  std::size_t lo;
  std::size_t hi;
  double height;
};

// Active slots as a doubly linked list in ascending order.
class ActiveSlots {
 public:
  explicit ActiveSlots(std::size_t m) : next_(m), prev_(m), count_(m) {
    for (std::size_t i = 0; i < m; ++i) {
      next_[i] = i + 1 < m ? i + 1 : kNone;
      prev_[i] = i > 0 ? i - 1 : kNone;
    }
    first_ = m > 0 ? 0 : kNone;
  }

  std::size_t first() const noexcept { return first_; }
  std::size_t next(std::size_t i) const noexcept { return next_[i]; }
  std::size_t count() const noexcept { return count_; }

  void remove(std::size_t i) noexcept {
    if (prev_[i] != kNone) next_[prev_[i]] = next_[i];
    else first_ = next_[i];
    if (next_[i] != kNone) prev_[next_[i]] = prev_[i];
    --count_;
  }

 private:
  std::vector<std::size_t> next_;
  std::vector<std::size_t> prev_;
  std::size_t first_ = kNone;
  std::size_t count_;
};

// Turns slot merges into a dendrogram. Slot i always holds the cluster that
// contains item i, so a union-find over items recovers cluster ids in any
// replay order.
Dendrogram replay(const std::vector<SlotMerge>& merges, const std::vector<double>& sizes, std::string method,
                  bool squared) {
  const std::size_t n0 = sizes.size();
  std::vector<std::size_t> parent(n0);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  std::vector<std::size_t> cluster_id(n0);
  std::iota(cluster_id.begin(), cluster_id.end(), std::size_t{0});
  std::vector<double> cluster_size = sizes;
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };

  Dendrogram out;
  out.n0 = n0;
  out.method = std::move(method);
  out.squared = squared;
  out.merges.reserve(merges.size());
  for (const SlotMerge& m : merges) {
    const std::size_t ra = find(m.lo);
    const std::size_t rb = find(m.hi);
    const double size = cluster_size[ra] + cluster_size[rb];
    out.merges.push_back({cluster_id[ra], cluster_id[rb], m.height, size});
    parent[rb] = ra;
    cluster_id[ra] = n0 + out.merges.size() - 1;
    cluster_size[ra] = size;
  }
  return out;
}

void require_inputs(const CondensedDistanceMatrix& matrix, const std::vector<double>& sizes) {
  if (matrix.size() < 2) throw InvalidInput("need at least two clusters");
  if (sizes.size() != matrix.size()) throw InvalidInput("size vector does not match matrix");
  for (double s : sizes) {
    if (!(s > 0.0)) throw InvalidInput("cluster sizes must be positive");
  }
}

// Distance update policies. begin_merge/end_merge bracket the row update
// for a merge of slots a < b; merged() yields d(a u b, k).
class LanceWilliamsPolicy {
 public:
  LanceWilliamsPolicy(const LinkageSpec& spec, std::vector<double> sizes) : spec_(spec), sizes_(std::move(sizes)) {}

  void begin_merge(std::size_t, std::size_t) {}
  double merged(std::size_t a, std::size_t b, std::size_t k, double d_ak, double d_bk, double d_ab) const {
    return lw_update(spec_, d_ak, d_bk, d_ab, sizes_[a], sizes_[b], sizes_[k]);
  }
  void end_merge(std::size_t a, std::size_t b) { sizes_[a] += sizes_[b]; }

 private:
  LinkageSpec spec_;
  std::vector<double> sizes_;
};

// Re-derives distances from merged cluster features. `scale` lets Ward be
// expressed as 2 D4^2.
class FeaturePolicy {
 public:
  FeaturePolicy(CFDistanceKind kind, std::vector<ClusterFeature> cfs, double scale = 1.0)
      : kind_(kind), cfs_(std::move(cfs)), scale_(scale) {}

  double distance(std::size_t i, std::size_t j) const { return evaluate(cfs_[i], cfs_[j]); }
  void begin_merge(std::size_t a, std::size_t b) { pending_ = cf_merge(cfs_[a], cfs_[b]); }
  double merged(std::size_t, std::size_t, std::size_t k, double, double, double) const {
    return evaluate(pending_, cfs_[k]);
  }
  void end_merge(std::size_t a, std::size_t) { cfs_[a] = std::move(pending_); }

 private:
  double evaluate(const ClusterFeature& x, const ClusterFeature& y) const {
    if (kind_ == CFDistanceKind::D1) return cf_distance(kind_, x, y);
    return scale_ * cf_distance_squared(kind_, x, y);
  }

  CFDistanceKind kind_;
  std::vector<ClusterFeature> cfs_;
  double scale_;
  ClusterFeature pending_;
};

// Median linkage without a matrix: each cluster is represented by the
// midpoint of its two parts' representatives.
class MidpointPolicy {
 public:
  explicit MidpointPolicy(std::span<const ClusterFeature> items) {
    points_.reserve(items.size());
    for (const auto& cf : items) points_.push_back(cf.mean());
  }

  double distance(std::size_t i, std::size_t j) const { return squared_euclidean(points_[i], points_[j]); }
  void begin_merge(std::size_t, std::size_t) {}
  void end_merge(std::size_t a, std::size_t b) {
    for (std::size_t d = 0; d < points_[a].size(); ++d) points_[a][d] = 0.5 * (points_[a][d] + points_[b][d]);
  }

 private:
  std::vector<Vector> points_;
};

template <class Policy>
void update_row(CondensedDistanceMatrix& matrix, const ActiveSlots& active, Policy& policy, std::size_t a,
                std::size_t b, double d_ab, HacStats* stats, auto&& on_update) {
  policy.begin_merge(a, b);
  for (std::size_t k = active.first(); k != kNone; k = active.next(k)) {
    if (k == a || k == b) continue;
    const double v = policy.merged(a, b, k, matrix.at(a, k), matrix.at(b, k), d_ab);
    matrix.set(a, k, v);
    on_update(k, v);
  }
  if (stats) stats->recurrence_evaluations += active.count() - 2;
  policy.end_merge(a, b);
}

template <class Policy>
std::vector<SlotMerge> run_naive(CondensedDistanceMatrix& matrix, Policy& policy, HacStats* stats) {
  const std::size_t m = matrix.size();
  ActiveSlots active(m);
  std::vector<SlotMerge> merges;
  merges.reserve(m - 1);
  while (active.count() > 1) {
    std::size_t bi = kNone;
    std::size_t bj = kNone;
    double best = kInf;
    for (std::size_t i = active.first(); i != kNone; i = active.next(i)) {
      for (std::size_t j = active.next(i); j != kNone; j = active.next(j)) {
        const double d = matrix.at(i, j);
        if (bi == kNone || d < best) {
          best = d;
          bi = i;
          bj = j;
        }
      }
    }
    if (stats) stats->distance_reads += active.count() * (active.count() - 1) / 2;
    merges.push_back({bi, bj, best});
    update_row(matrix, active, policy, bi, bj, best, stats, [](std::size_t, double) {});
    active.remove(bj);
  }
  return merges;
}

template <class Policy>
std::vector<SlotMerge> run_anderberg(CondensedDistanceMatrix& matrix, Policy& policy, HacStats* stats) {
  const std::size_t m = matrix.size();
  ActiveSlots active(m);
  std::vector<std::size_t> nn(m, kNone);
  std::vector<double> nn_dist(m, kInf);
  std::uint64_t reads = 0;

  auto rescan = [&](std::size_t i) {
    std::size_t best = kNone;
    double best_d = kInf;
    for (std::size_t j = active.next(i); j != kNone; j = active.next(j)) {
      const double d = matrix.at(i, j);
      ++reads;
      if (best == kNone || d < best_d) {
        best_d = d;
        best = j;
      }
    }
    nn[i] = best;
    nn_dist[i] = best_d;
  };
  for (std::size_t i = 0; i < m; ++i) rescan(i);

  std::vector<SlotMerge> merges;
  merges.reserve(m - 1);
  std::vector<std::size_t> stale;
  while (active.count() > 1) {
    std::size_t a = kNone;
    for (std::size_t i = active.first(); i != kNone; i = active.next(i)) {
      if (nn[i] == kNone) continue;
      if (a == kNone || nn_dist[i] < nn_dist[a]) a = i;
    }
    const std::size_t b = nn[a];
    const double d_ab = nn_dist[a];
    merges.push_back({a, b, d_ab});

    stale.clear();
    update_row(matrix, active, policy, a, b, d_ab, stats, [&](std::size_t k, double v) {
      if (k < a) {
        if (nn[k] == b || (nn[k] == a && v > nn_dist[k])) {
          stale.push_back(k);
        } else if (nn[k] == a) {
          nn_dist[k] = v;
        } else if (v < nn_dist[k] || (v == nn_dist[k] && a < nn[k])) {
          nn[k] = a;
          nn_dist[k] = v;
        }
      } else if (k < b && nn[k] == b) {
        stale.push_back(k);
      }
    });
    active.remove(b);
    nn[b] = kNone;
    rescan(a);
    for (std::size_t k : stale) rescan(k);
  }
  if (stats) stats->distance_reads += reads;
  return merges;
}

// Source must provide distance(i, j) and merge(lo, hi, d).
template <class Source>
std::vector<SlotMerge> run_nnchain(std::size_t m, Source& source, HacStats* stats) {
  ActiveSlots active(m);
  std::vector<std::size_t> chain;
  chain.reserve(m);
  std::vector<char> in_chain(m, 0);
  std::vector<SlotMerge> merges;
  merges.reserve(m - 1);
  std::uint64_t reads = 0;

  while (active.count() > 1) {
    if (chain.empty()) {
      chain.push_back(active.first());
      in_chain[active.first()] = 1;
    }
    std::size_t a = kNone;
    std::size_t b = kNone;
    double d_ab = kInf;
    for (;;) {
      a = chain.back();
      const std::size_t prev = chain.size() >= 2 ? chain[chain.size() - 2] : kNone;
      std::size_t best = prev;
      double best_d = prev != kNone ? source.distance(a, prev) : kInf;
      for (std::size_t x = active.first(); x != kNone; x = active.next(x)) {
        if (x == a || x == prev) continue;
        const double d = source.distance(a, x);
        ++reads;
        if (best == kNone || d < best_d) {
          best_d = d;
          best = x;
        }
      }
      if (best == prev) {
        b = prev;
        d_ab = best_d;
        break;
      }
      if (in_chain[best]) {
        // Only reachable without reducibility: a merge made an earlier chain
        // member closer than the chain allows. Restart the chain at a.
        for (std::size_t c : chain) in_chain[c] = 0;
        chain.assign(1, a);
        in_chain[a] = 1;
        continue;
      }
      chain.push_back(best);
      in_chain[best] = 1;
    }
    chain.pop_back();
    chain.pop_back();
    in_chain[a] = 0;
    in_chain[b] = 0;
    const std::size_t lo = std::min(a, b);
    const std::size_t hi = std::max(a, b);
    merges.push_back({lo, hi, d_ab});
    source.merge(lo, hi, d_ab, active);
    active.remove(hi);
  }
  if (stats) stats->distance_reads += reads;
  return merges;
}

template <class Policy>
struct MatrixSource {
  CondensedDistanceMatrix& matrix;
  Policy& policy;
  HacStats* stats;

  double distance(std::size_t i, std::size_t j) const { return matrix.at(i, j); }
  void merge(std::size_t lo, std::size_t hi, double d, const ActiveSlots& active) {
    update_row(matrix, active, policy, lo, hi, d, stats, [](std::size_t, double) {});
  }
};

template <class Policy>
struct MatrixFreeSource {
  Policy& policy;
  HacStats* stats;

  double distance(std::size_t i, std::size_t j) const {
    if (stats) ++stats->recurrence_evaluations;
    return policy.distance(i, j);
  }
  void merge(std::size_t lo, std::size_t hi, double, const ActiveSlots&) {
    policy.begin_merge(lo, hi);
    policy.end_merge(lo, hi);
  }
};

void sort_by_height(std::vector<SlotMerge>& merges) {
  std::stable_sort(merges.begin(), merges.end(),
                   [](const SlotMerge& x, const SlotMerge& y) { return x.height < y.height; });
}

std::string method_name(const LinkageSpec& spec) { return std::string(to_string(spec.kind())); }

void warn_nonreducible(const LinkageSpec& spec, HacStats* stats) {
  if (!is_reducible(spec.kind()) && stats) {
    stats->warnings.push_back(method_name(spec) +
                              " linkage is not reducible; the nearest-neighbor chain may differ from the "
                              "exact greedy result");
  }
}

std::vector<ClusterFeature> checked_features(std::span<const ClusterFeature> items) {
  if (items.size() < 2) throw InvalidInput("need at least two cluster features to cluster");
  for (const auto& cf : items) {
    if (!(cf.weight() > 0.0)) throw InvalidInput("cluster features must have positive weight");
    if (cf.dim() != items.front().dim()) throw InvalidInput("cluster feature dimension mismatch");
  }
  return {items.begin(), items.end()};
}

std::vector<double> weights_of(std::span<const ClusterFeature> items) {
  std::vector<double> w;
  w.reserve(items.size());
  for (const auto& cf : items) w.push_back(cf.weight());
  return w;
}

}  // namespace

std::string_view to_string(Engine engine) noexcept {
  switch (engine) {
    case Engine::Naive:
      return "naive";
    case Engine::Anderberg:
      return "anderberg";
    case Engine::NNChain:
      return "nnchain";
  }
  return "?";
}

std::optional<Engine> parse_engine(std::string_view name) {
  if (name == "naive") return Engine::Naive;
  if (name == "anderberg") return Engine::Anderberg;
  if (name == "nnchain" || name == "nn-chain") return Engine::NNChain;
  return std::nullopt;
}

Dendrogram hac_naive(CondensedDistanceMatrix matrix, std::vector<double> sizes, const LinkageSpec& spec,
                     HacStats* stats) {
  require_inputs(matrix, sizes);
  LanceWilliamsPolicy policy(spec, sizes);
  return replay(run_naive(matrix, policy, stats), sizes, method_name(spec), spec.squared_values());
}

Dendrogram hac_anderberg(CondensedDistanceMatrix matrix, std::vector<double> sizes, const LinkageSpec& spec,
                         HacStats* stats) {
  require_inputs(matrix, sizes);
  LanceWilliamsPolicy policy(spec, sizes);
  return replay(run_anderberg(matrix, policy, stats), sizes, method_name(spec), spec.squared_values());
}

Dendrogram hac_nnchain(CondensedDistanceMatrix matrix, std::vector<double> sizes, const LinkageSpec& spec,
                       HacStats* stats) {
  require_inputs(matrix, sizes);
  warn_nonreducible(spec, stats);
  LanceWilliamsPolicy policy(spec, sizes);
  MatrixSource<LanceWilliamsPolicy> source{matrix, policy, stats};
  std::vector<SlotMerge> merges = run_nnchain(matrix.size(), source, stats);
  if (is_reducible(spec.kind())) sort_by_height(merges);
  return replay(merges, sizes, method_name(spec), spec.squared_values());
}

Dendrogram hac(Engine engine, CondensedDistanceMatrix matrix, std::vector<double> sizes, const LinkageSpec& spec,
               HacStats* stats) {
  switch (engine) {
    case Engine::Naive:
      return hac_naive(std::move(matrix), std::move(sizes), spec, stats);
    case Engine::Anderberg:
      return hac_anderberg(std::move(matrix), std::move(sizes), spec, stats);
    case Engine::NNChain:
      return hac_nnchain(std::move(matrix), std::move(sizes), spec, stats);
  }
  throw InvalidInput("unknown engine");
}

Dendrogram hac_nnchain_linear(std::span<const ClusterFeature> items, const LinkageSpec& spec, HacStats* stats) {
  std::vector<ClusterFeature> cfs = checked_features(items);
  warn_nonreducible(spec, stats);
  std::vector<double> sizes = weights_of(items);
  std::vector<SlotMerge> merges;

  auto run_features = [&](CFDistanceKind kind, double scale) {
    FeaturePolicy policy(kind, std::move(cfs), scale);
    MatrixFreeSource<FeaturePolicy> source{policy, stats};
    merges = run_nnchain(sizes.size(), source, stats);
  };
  switch (spec.kind()) {
    case LinkageKind::Ward:
      run_features(CFDistanceKind::D4, 2.0);
      break;
    case LinkageKind::UPGMC:
      run_features(CFDistanceKind::D0, 1.0);
      break;
    case LinkageKind::UPGMA:
      if (spec.metric() != BaseMetric::SquaredEuclidean) {
        throw InvalidInput("matrix-free upgma needs the squared Euclidean base metric");
      }
      run_features(CFDistanceKind::D2, 1.0);
      break;
    case LinkageKind::WPGMC: {
      MidpointPolicy policy(items);
      MatrixFreeSource<MidpointPolicy> source{policy, stats};
      std::fill(sizes.begin(), sizes.end(), 1.0);
      merges = run_nnchain(sizes.size(), source, stats);
      break;
    }
    default:
      throw InvalidInput(method_name(spec) + " linkage has no matrix-free form");
  }
  if (is_reducible(spec.kind())) sort_by_height(merges);
  return replay(merges, sizes, method_name(spec), spec.squared_values());
}

Dendrogram hac_cf_aggregation(std::span<const ClusterFeature> leaves, CFDistanceKind kind, Engine engine,
                              HacStats* stats) {
  std::vector<ClusterFeature> cfs = checked_features(leaves);
  std::vector<double> sizes = weights_of(leaves);
  const std::string method(to_string(kind));
  const bool squared = kind != CFDistanceKind::D1;

  FeaturePolicy policy(kind, std::move(cfs));
  if (engine == Engine::NNChain) {
    MatrixFreeSource<FeaturePolicy> source{policy, stats};
    std::vector<SlotMerge> merges = run_nnchain(sizes.size(), source, stats);
    // Only the variance-increase and inter-cluster criteria are reducible;
    // the others keep discovery order so every merge joins live clusters.
    if (kind == CFDistanceKind::D4 || kind == CFDistanceKind::D2) sort_by_height(merges);
    return replay(merges, sizes, method, squared);
  }

  CondensedDistanceMatrix matrix(sizes.size());
  for (std::size_t i = 0; i + 1 < sizes.size(); ++i) {
    auto row = matrix.row_tail(i);
    for (std::size_t j = i + 1; j < sizes.size(); ++j) row[j - i - 1] = policy.distance(i, j);
  }
  if (stats) stats->recurrence_evaluations += matrix.entry_count();
  std::vector<SlotMerge> merges =
      engine == Engine::Naive ? run_naive(matrix, policy, stats) : run_anderberg(matrix, policy, stats);
  return replay(merges, sizes, method, squared);
}

}  // namespace betula
