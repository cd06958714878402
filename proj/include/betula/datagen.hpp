#pragma once

#include <cstddef>
#include <cstdint>
#include <vector>

#include <json.hpp>

#include "betula/dataset.hpp"

namespace betula {

enum class GeneratorKind { Uniform, GaussianMixture };

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::Uniform;
  std::size_t n = 1000;
  std::size_t dim = 5;
  std::size_t k_clusters = 1;
  std::uint64_t seed = 0;
  /// Side length of the hypercube [0, domain_scale]^dim.
  double domain_scale = 100.0;
  /// Standard deviation of every mixture component, per coordinate.
  double cluster_sigma = 1.0;

  /// Throws InvalidInput on n, dim, k_clusters < 1 or non-positive
  /// scale/sigma.
  void validate() const;

  friend bool operator==(const GeneratorSpec&, const GeneratorSpec&) = default;
};

/// Uniform: i.i.d. coordinates on the hypercube. Gaussian mixture:
/// k_clusters centers drawn uniformly on the hypercube first, then point i
/// is drawn around center i mod k_clusters. Deterministic in the seed.
Dataset generate(const GeneratorSpec& spec);

/// Uniformly random permutation of 0..n-1.
std::vector<std::size_t> shuffled_order(std::size_t n, std::uint64_t seed);

void to_json(nlohmann::json& j, const GeneratorSpec& spec);
/// Missing keys keep their defaults; throws InvalidInput on bad values.
void from_json(const nlohmann::json& j, GeneratorSpec& spec);

}  // namespace betula
