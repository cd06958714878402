#include "betula/cf_distance.hpp"

#include <array>
#include <cmath>

#include "betula/error.hpp"

namespace betula {

namespace {

constexpr std::array<std::string_view, 6> kNames = {"D0", "D1", "D2", "D3", "D4", "R"};

double manhattan(const Vector& a, const Vector& b) noexcept {
  double s = 0.0;
  for (std::size_t d = 0; d < a.size(); ++d) s += std::abs(a[d] - b[d]);
  return s;
}

}  // namespace

std::string_view to_string(CFDistanceKind kind) noexcept { return kNames[static_cast<std::size_t>(kind)]; }

std::optional<CFDistanceKind> parse_cf_distance(std::string_view name) {
  for (std::size_t i = 0; i < kNames.size(); ++i) {
    if (kNames[i] == name) return static_cast<CFDistanceKind>(i);
  }
  if (name == "r") return CFDistanceKind::R;
  if (name.size() == 2 && name[0] == 'd' && name[1] >= '0' && name[1] <= '4') {
    return static_cast<CFDistanceKind>(name[1] - '0');
  }
  return std::nullopt;
}

double cf_distance_squared(CFDistanceKind kind, const ClusterFeature& a, const ClusterFeature& b) {
  if (a.dim() != b.dim()) throw InvalidInput("cluster feature dimension mismatch");
  const double na = a.weight();
  const double nb = b.weight();
  if (!(na > 0.0) || !(nb > 0.0)) throw InvalidInput("criterion needs two non-empty cluster features");

  if (kind == CFDistanceKind::D1) {
    const double l1 = manhattan(a.mean(), b.mean());
    return l1 * l1;
  }
  const double centers = squared_euclidean(a.mean(), b.mean());
  const double nab = na + nb;
  double value = 0.0;
  switch (kind) {
    case CFDistanceKind::D0:
      value = centers;
      break;
    case CFDistanceKind::D2:
      value = a.sse() / na + b.sse() / nb + centers;
      break;
    case CFDistanceKind::D3:
      if (!(nab > 1.0)) throw UndefinedCriterion("D3 needs a union of weight > 1");
      value = 2.0 * (a.sse() + b.sse() + na * nb / nab * centers) / (nab - 1.0);
      break;
    case CFDistanceKind::D4:
      value = na * nb / nab * centers;
      break;
    case CFDistanceKind::R:
      value = (a.sse() + b.sse() + na * nb / nab * centers) / nab;
      break;
    case CFDistanceKind::D1:
      break;
  }
  return value < 0.0 ? 0.0 : value;
}

double cf_distance(CFDistanceKind kind, const ClusterFeature& a, const ClusterFeature& b) {
  if (kind == CFDistanceKind::D1) {
    if (a.dim() != b.dim()) throw InvalidInput("cluster feature dimension mismatch");
    if (!(a.weight() > 0.0) || !(b.weight() > 0.0)) {
      throw InvalidInput("criterion needs two non-empty cluster features");
    }
    return manhattan(a.mean(), b.mean());
  }
  return std::sqrt(cf_distance_squared(kind, a, b));
}

}  // namespace betula
