#include "betula/linkage.hpp"

#include <array>
#include <cmath>
#include <thread>

#include "betula/cf_distance.hpp"
#include "betula/error.hpp"

namespace betula {

namespace {

constexpr std::array<std::string_view, 7> kNames = {"single", "complete", "upgma", "wpgma", "upgmc", "wpgmc", "ward"};

// Fills rows [0, m) of the condensed matrix with value(i, j), striping rows
// across workers so each gets a similar share of the triangle.
template <class Fn>
void fill_rows(CondensedDistanceMatrix& matrix, unsigned threads, const Fn& value) {
  const std::size_t m = matrix.size();
  auto work = [&](std::size_t first, std::size_t stride) {
    for (std::size_t i = first; i < m; i += stride) {
      auto row = matrix.row_tail(i);
      for (std::size_t j = i + 1; j < m; ++j) row[j - i - 1] = value(i, j);
    }
  };
  if (threads <= 1 || m < 512) {
    work(0, 1);
    return;
  }
  std::vector<std::jthread> pool;
  for (unsigned t = 0; t < threads; ++t) pool.emplace_back(work, t, threads);
}

}  // namespace

std::string_view to_string(LinkageKind kind) noexcept { return kNames[static_cast<std::size_t>(kind)]; }

std::optional<LinkageKind> parse_linkage(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<LinkageKind>(i);
  }
  if (name == "average") return LinkageKind::UPGMA;
  if (name == "mcquitty" || name == "weighted") return LinkageKind::WPGMA;
  if (name == "centroid") return LinkageKind::UPGMC;
  if (name == "median") return LinkageKind::WPGMC;
  return std::nullopt;
}

bool is_reducible(LinkageKind kind) noexcept { return kind != LinkageKind::UPGMC && kind != LinkageKind::WPGMC; }

LinkageSpec::LinkageSpec(LinkageKind kind, BaseMetric metric) : kind_(kind), metric_(metric) {
  if (init_mode() == InitMode::Squared && metric == BaseMetric::SquaredEuclidean) {
    throw InvalidInput(std::string(to_string(kind)) + " linkage already squares Euclidean distances");
  }
}

InitMode LinkageSpec::init_mode() const noexcept {
  switch (kind_) {
    case LinkageKind::UPGMC:
    case LinkageKind::WPGMC:
    case LinkageKind::Ward:
      return InitMode::Squared;
    default:
      return InitMode::Plain;
  }
}

bool LinkageSpec::squared_values() const noexcept {
  return init_mode() == InitMode::Squared || metric_ == BaseMetric::SquaredEuclidean;
}

LanceWilliams LinkageSpec::coefficients(double n_a, double n_b, double n_c) const noexcept {
  switch (kind_) {
    case LinkageKind::Single:
      return {0.5, 0.5, 0.0, -0.5};
    case LinkageKind::Complete:
      return {0.5, 0.5, 0.0, 0.5};
    case LinkageKind::UPGMA: {
      const double n_ab = n_a + n_b;
      return {n_a / n_ab, n_b / n_ab, 0.0, 0.0};
    }
    case LinkageKind::WPGMA:
      return {0.5, 0.5, 0.0, 0.0};
    case LinkageKind::UPGMC: {
      const double n_ab = n_a + n_b;
      return {n_a / n_ab, n_b / n_ab, -(n_a * n_b) / (n_ab * n_ab), 0.0};
    }
    case LinkageKind::WPGMC:
      return {0.5, 0.5, -0.25, 0.0};
    case LinkageKind::Ward: {
      const double n_abc = n_a + n_b + n_c;
      return {(n_a + n_c) / n_abc, (n_b + n_c) / n_abc, -n_c / n_abc, 0.0};
    }
  }
  return {0.0, 0.0, 0.0, 0.0};
}

double lw_update(const LinkageSpec& spec, double d_ac, double d_bc, double d_ab, double n_a, double n_b,
                 double n_c) {
  if (!(n_a > 0.0) || !(n_b > 0.0) || !(n_c > 0.0)) throw InvalidInput("cluster sizes must be positive");
  // Single and complete are evaluated as min/max: the same value as the
  // recurrence, without its rounding.
  switch (spec.kind()) {
    case LinkageKind::Single:
      return std::min(d_ac, d_bc);
    case LinkageKind::Complete:
      return std::max(d_ac, d_bc);
    default:
      break;
  }
  const LanceWilliams c = spec.coefficients(n_a, n_b, n_c);
  double v = c.alpha_a * d_ac + c.alpha_b * d_bc + c.beta * d_ab;
  if (c.gamma != 0.0) v += c.gamma * std::abs(d_ac - d_bc);
  return v;
}

CondensedDistanceMatrix init_matrix_points(const Dataset& data, const LinkageSpec& spec, unsigned threads) {
  if (data.size() < 2) throw InvalidInput("need at least two points to cluster");
  CondensedDistanceMatrix matrix(data.size());
  if (spec.squared_values()) {
    fill_rows(matrix, threads, [&](std::size_t i, std::size_t j) { return squared_euclidean(data[i], data[j]); });
  } else {
    fill_rows(matrix, threads,
              [&](std::size_t i, std::size_t j) { return std::sqrt(squared_euclidean(data[i], data[j])); });
  }
  return matrix;
}

FeatureMatrix init_matrix_cfs(std::span<const ClusterFeature> leaves, const LinkageSpec& spec, unsigned threads) {
  if (leaves.size() < 2) throw InvalidInput("need at least two cluster features to cluster");
  for (const auto& cf : leaves) {
    if (!(cf.weight() > 0.0)) throw InvalidInput("leaf cluster features must have positive weight");
    if (cf.dim() != leaves.front().dim()) throw InvalidInput("cluster feature dimension mismatch");
  }
  FeatureMatrix out{CondensedDistanceMatrix(leaves.size()), {}};
  const bool squared = spec.squared_values();
  auto represent = [squared](double sq) { return squared ? sq : std::sqrt(sq); };

  switch (spec.kind()) {
    case LinkageKind::Single:
    case LinkageKind::Complete:
      fill_rows(out.matrix, threads,
                [&](std::size_t i, std::size_t j) { return represent(cf_centroid_sq_dist(leaves[i], leaves[j])); });
      break;
    case LinkageKind::UPGMA:
    case LinkageKind::WPGMA:
      fill_rows(out.matrix, threads, [&](std::size_t i, std::size_t j) {
        return represent(cf_distance_squared(CFDistanceKind::D2, leaves[i], leaves[j]));
      });
      break;
    case LinkageKind::UPGMC:
    case LinkageKind::WPGMC:
      fill_rows(out.matrix, threads, [&](std::size_t i, std::size_t j) {
        return cf_distance_squared(CFDistanceKind::D0, leaves[i], leaves[j]);
      });
      break;
    case LinkageKind::Ward:
      fill_rows(out.matrix, threads, [&](std::size_t i, std::size_t j) {
        return 2.0 * cf_distance_squared(CFDistanceKind::D4, leaves[i], leaves[j]);
      });
      break;
  }

  const bool unit_sizes = spec.kind() == LinkageKind::WPGMA || spec.kind() == LinkageKind::WPGMC;
  out.sizes.reserve(leaves.size());
  for (const auto& cf : leaves) out.sizes.push_back(unit_sizes ? 1.0 : cf.weight());
  return out;
}

}  // namespace betula
