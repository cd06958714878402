#pragma once

#include <optional>
#include <string>
#include <string_view>

#include "betula/cluster_feature.hpp"

namespace betula {

/// BIRCH distance / absorption criteria, all evaluated from feature
/// statistics only:
///   D0  centroid Euclidean distance
///   D1  centroid Manhattan distance
///   D2  inter-cluster distance (root mean squared cross-pair distance)
///   D3  intra-cluster distance of the union (diameter)
///   D4  variance-increase distance
///   R   radius of the union
enum class CFDistanceKind { D0, D1, D2, D3, D4, R };

std::string_view to_string(CFDistanceKind kind) noexcept;
std::optional<CFDistanceKind> parse_cf_distance(std::string_view name);

/// Squared criterion value (D1 returns the square of the Manhattan
/// distance). Throws InvalidInput for dimension mismatch or a side with
/// zero weight, UndefinedCriterion for D3 when the union weighs <= 1.
double cf_distance_squared(CFDistanceKind kind, const ClusterFeature& a, const ClusterFeature& b);

/// Non-squared criterion value; same error contract.
double cf_distance(CFDistanceKind kind, const ClusterFeature& a, const ClusterFeature& b);

}  // namespace betula
