#include "betula/datagen.hpp"

#include <numeric>
#include <string>

#include "betula/error.hpp"
#include "betula/random.hpp"

namespace betula {

void GeneratorSpec::validate() const {
  if (n < 1) throw InvalidInput("generator needs n >= 1");
  if (dim < 1) throw InvalidInput("generator needs dim >= 1");
  if (k_clusters < 1) throw InvalidInput("generator needs k_clusters >= 1");
  if (!(domain_scale > 0.0)) throw InvalidInput("domain_scale must be positive");
  if (!(cluster_sigma > 0.0)) throw InvalidInput("cluster_sigma must be positive");
}

Dataset generate(const GeneratorSpec& spec) {
  spec.validate();
  SplitMix64 rng(spec.seed);
  std::vector<double> values;
  values.reserve(spec.n * spec.dim);

  if (spec.kind == GeneratorKind::Uniform) {
    for (std::size_t i = 0; i < spec.n * spec.dim; ++i) values.push_back(spec.domain_scale * rng.uniform());
    return Dataset(spec.dim, std::move(values));
  }

  std::vector<double> centers(spec.k_clusters * spec.dim);
  for (double& c : centers) c = spec.domain_scale * rng.uniform();
  for (std::size_t i = 0; i < spec.n; ++i) {
    const double* center = centers.data() + (i % spec.k_clusters) * spec.dim;
    for (std::size_t d = 0; d < spec.dim; ++d) values.push_back(center[d] + spec.cluster_sigma * rng.normal());
  }
  return Dataset(spec.dim, std::move(values));
}

std::vector<std::size_t> shuffled_order(std::size_t n, std::uint64_t seed) {
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  SplitMix64 rng(seed);
  rng.shuffle(std::span<std::size_t>(order));
  return order;
}

void to_json(nlohmann::json& j, const GeneratorSpec& spec) {
  j = nlohmann::json{{"kind", spec.kind == GeneratorKind::Uniform ? "uniform" : "gaussian"},
                     {"n", spec.n},
                     {"dim", spec.dim},
                     {"k_clusters", spec.k_clusters},
                     {"seed", spec.seed},
                     {"domain_scale", spec.domain_scale},
                     {"cluster_sigma", spec.cluster_sigma}};
}

void from_json(const nlohmann::json& j, GeneratorSpec& spec) {
  try {
    if (j.contains("kind")) {
      const std::string kind = j.at("kind").get<std::string>();
      if (kind == "uniform") spec.kind = GeneratorKind::Uniform;
      else if (kind == "gaussian" || kind == "gaussian-mixture") spec.kind = GeneratorKind::GaussianMixture;
      else throw InvalidInput("unknown generator kind '" + kind + "'");
    }
    if (j.contains("n")) spec.n = j.at("n").get<std::size_t>();
    if (j.contains("dim")) spec.dim = j.at("dim").get<std::size_t>();
    if (j.contains("k_clusters")) spec.k_clusters = j.at("k_clusters").get<std::size_t>();
    if (j.contains("seed")) spec.seed = j.at("seed").get<std::uint64_t>();
    if (j.contains("domain_scale")) spec.domain_scale = j.at("domain_scale").get<double>();
    if (j.contains("cluster_sigma")) spec.cluster_sigma = j.at("cluster_sigma").get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("generator spec: ") + e.what());
  }
  spec.validate();
}

}  // namespace betula
