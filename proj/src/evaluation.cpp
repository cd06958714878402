#include "betula/evaluation.hpp"

#include <cmath>
#include <numeric>
#include <string>

#include "betula/error.hpp"

namespace betula {

namespace {

double rmsd_of_groups(std::vector<ClusterFeature>& groups) {
  double sse = 0.0;
  double weight = 0.0;
  for (const auto& g : groups) {
    sse += g.sse();
    weight += g.weight();
  }
  if (!(weight > 0.0)) throw InvalidInput("rmsd needs positive total weight");
  return std::sqrt(sse / weight);
}

std::size_t label_count(std::span<const std::size_t> labels) {
  std::size_t k = 0;
  for (std::size_t l : labels) k = std::max(k, l + 1);
  return k;
}

}  // namespace

FlatClustering cut(const Dendrogram& dendrogram, std::size_t k) {
  const std::size_t n0 = dendrogram.n0;
  if (k < 1 || k > n0) {
    throw InvalidInput("cut k=" + std::to_string(k) + " outside [1, " + std::to_string(n0) + "]");
  }
  if (dendrogram.merges.size() + 1 != n0) throw InvalidInput("dendrogram must have n0-1 merges");

  const std::size_t total = n0 + dendrogram.merges.size();
  std::vector<std::size_t> parent(total);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) {
      parent[x] = parent[parent[x]];
      x = parent[x];
    }
    return x;
  };
  for (std::size_t step = 0; step < n0 - k; ++step) {
    const Merge& m = dendrogram.merges[step];
    if (m.left >= n0 + step || m.right >= n0 + step) throw InvalidInput("merge refers to an unformed cluster");
    parent[find(m.left)] = n0 + step;
    parent[find(m.right)] = n0 + step;
  }

  FlatClustering out;
  out.labels.resize(n0);
  std::vector<std::size_t> label_of_root(total, static_cast<std::size_t>(-1));
  for (std::size_t i = 0; i < n0; ++i) {
    std::size_t& label = label_of_root[find(i)];
    if (label == static_cast<std::size_t>(-1)) label = out.k++;
    out.labels[i] = label;
  }
  return out;
}

double rmsd(std::span<const ClusterFeature> items, std::span<const std::size_t> labels) {
  if (items.size() != labels.size()) throw InvalidInput("label count does not match item count");
  if (items.empty()) throw InvalidInput("rmsd of nothing");
  std::vector<ClusterFeature> groups(label_count(labels), ClusterFeature::empty(items.front().dim()));
  for (std::size_t i = 0; i < items.size(); ++i) groups[labels[i]].absorb(items[i]);
  return rmsd_of_groups(groups);
}

double rmsd(const Dataset& data, std::span<const std::size_t> labels, std::span<const double> weights) {
  if (data.size() != labels.size()) throw InvalidInput("label count does not match point count");
  if (!weights.empty() && weights.size() != data.size()) throw InvalidInput("weight count does not match point count");
  if (data.empty()) throw InvalidInput("rmsd of nothing");
  std::vector<ClusterFeature> groups(label_count(labels), ClusterFeature::empty(data.dim()));
  for (std::size_t i = 0; i < data.size(); ++i) {
    const double w = weights.empty() ? 1.0 : weights[i];
    if (!(w > 0.0)) throw InvalidInput("weights must be positive");
    const auto p = data[i];
    groups[labels[i]].absorb(ClusterFeature(w, Vector(p.begin(), p.end()), 0.0));
  }
  return rmsd_of_groups(groups);
}

}  // namespace betula
