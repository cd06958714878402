// Command-line front end: data generation, clustering, cutting, scoring and
// the benchmark harness. Exit codes: 0 ok, 1 data error, 2 usage error.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "betula/bench.hpp"
#include "betula/csv_io.hpp"
#include "betula/datagen.hpp"
#include "betula/error.hpp"
#include "betula/evaluation.hpp"
#include "betula/pipeline.hpp"

namespace {

using namespace betula;

constexpr int kOk = 0;
constexpr int kDataError = 1;
constexpr int kUsageError = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct GenerateArgs {
  std::string kind = "uniform";
  std::size_t n = 1000;
  std::size_t dim = 5;
  std::size_t k = 1;
  std::uint64_t seed = 0;
  double scale = 100.0;
  double sigma = 1.0;
  std::string spec_path;
  std::string out;
};

struct ClusterArgs {
  std::string input;
  std::string mode = "full";
  std::string linkage;
  std::string criterion;
  std::string metric = "euclidean";
  std::string engine = "anderberg";
  std::size_t branching = 32;
  std::size_t max_leaves = 25000;
  double threshold = 0.0;
  std::string tree_criterion = "R";
  std::string tree_routing = "D4";
  std::uint64_t tree_seed = 0x5eed;
  bool linear_memory = false;
  unsigned threads = 1;
  std::string out;
  bool sqrt_heights = false;
  std::size_t cut_k = 0;
  std::string labels;
  std::string leaves;
  bool quiet = false;
};

struct CutArgs {
  std::string dendrogram;
  std::size_t k = 1;
  std::string out;
};

struct RmsdArgs {
  std::string input;
  std::string leaves;
  std::string labels;
};

struct BenchArgs {
  std::string manifest;
  std::string out;
  bool parallel = false;
};

struct ScalingArgs {
  std::string input;
  std::string out;
};

PipelineConfig make_pipeline_config(const ClusterArgs& a) {
  PipelineConfig config;
  const auto mode = parse_input_mode(a.mode);
  if (!mode) throw UsageError("unknown --mode '" + a.mode + "'");
  config.mode = *mode;
  const auto engine = parse_engine(a.engine);
  if (!engine) throw UsageError("unknown --engine '" + a.engine + "'");
  config.engine = *engine;

  BaseMetric metric = BaseMetric::Euclidean;
  if (a.metric == "sqeuclidean") metric = BaseMetric::SquaredEuclidean;
  else if (a.metric != "euclidean") throw UsageError("unknown --metric '" + a.metric + "'");

  if (config.mode == InputMode::CFAggregation) {
    if (!a.linkage.empty()) throw UsageError("--mode cf-aggregation takes --criterion, not --linkage");
    if (a.criterion.empty()) throw UsageError("--mode cf-aggregation requires --criterion");
    const auto kind = parse_cf_distance(a.criterion);
    if (!kind) throw UsageError("unknown --criterion '" + a.criterion + "'");
    config.criterion = *kind;
  } else {
    if (!a.criterion.empty()) throw UsageError("--criterion is only valid with --mode cf-aggregation");
    if (a.linkage.empty()) throw UsageError("--mode " + a.mode + " requires --linkage");
    const auto kind = parse_linkage(a.linkage);
    if (!kind) throw UsageError("unknown --linkage '" + a.linkage + "'");
    try {
      config.linkage = LinkageSpec(*kind, metric);
    } catch (const InvalidInput& e) {
      throw UsageError(e.what());
    }
  }

  const auto tree_kind = parse_cf_distance(a.tree_criterion);
  if (!tree_kind) throw UsageError("unknown --tree-criterion '" + a.tree_criterion + "'");
  config.tree.criterion = *tree_kind;
  const auto routing = parse_cf_distance(a.tree_routing);
  if (!routing) throw UsageError("unknown --tree-routing '" + a.tree_routing + "'");
  config.tree.routing = *routing;
  config.tree.branching_factor = a.branching;
  config.tree.max_leaf_entries = a.max_leaves == 0 ? kUnboundedLeaves : a.max_leaves;
  config.tree.initial_threshold = a.threshold;
  config.tree.seed = a.tree_seed;
  config.linear_memory = a.linear_memory;
  config.threads = a.threads;
  try {
    config.validate();
  } catch (const InvalidInput& e) {
    throw UsageError(e.what());
  }
  return config;
}

int cmd_generate(const GenerateArgs& a) {
  GeneratorSpec spec;
  if (!a.spec_path.empty()) {
    std::ifstream in(a.spec_path);
    if (!in) throw InvalidInput("cannot open " + a.spec_path);
    spec = nlohmann::json::parse(in).get<GeneratorSpec>();
  } else {
    if (a.kind == "uniform") spec.kind = GeneratorKind::Uniform;
    else if (a.kind == "gaussian") spec.kind = GeneratorKind::GaussianMixture;
    else throw UsageError("unknown --kind '" + a.kind + "'");
    spec.n = a.n;
    spec.dim = a.dim;
    spec.k_clusters = a.k;
    spec.seed = a.seed;
    spec.domain_scale = a.scale;
    spec.cluster_sigma = a.sigma;
    try {
      spec.validate();
    } catch (const InvalidInput& e) {
      throw UsageError(e.what());
    }
  }
  write_csv(a.out, generate(spec));
  return kOk;
}

int cmd_cluster(const ClusterArgs& a) {
  const PipelineConfig config = make_pipeline_config(a);
  const Dataset data = read_csv(a.input);
  const PipelineResult result = run_pipeline(data, config);
  for (const std::string& w : result.stats.warnings) std::cerr << "warning: " << w << '\n';

  const Dendrogram& d = result.dendrogram;
  write_dendrogram(a.out, a.sqrt_heights ? d.presented() : d);
  if (!a.leaves.empty()) write_leaves_csv(a.leaves, result.items);
  if (a.cut_k > 0) {
    const FlatClustering flat = cut(d, a.cut_k);
    if (!a.labels.empty()) write_labels_csv(a.labels, flat.labels);
    std::cout << "rmsd_at_k=" << rmsd(result.items, flat.labels) << '\n';
  }
  if (!a.quiet) {
    std::cerr << "items=" << result.items.size();
    if (result.leaf_count) {
      std::cerr << " leaf_count=" << *result.leaf_count << " rebuilds=" << result.rebuilds
                << " threshold=" << result.final_threshold;
    }
    std::cerr << " tree_seconds=" << result.tree_seconds << " cluster_seconds=" << result.cluster_seconds << '\n';
  }
  return kOk;
}

int cmd_cut(const CutArgs& a) {
  const Dendrogram d = read_dendrogram(a.dendrogram);
  write_labels_csv(a.out, cut(d, a.k).labels);
  return kOk;
}

int cmd_rmsd(const RmsdArgs& a) {
  if (a.input.empty() == a.leaves.empty()) throw UsageError("give exactly one of --input or --leaves");
  const std::vector<std::size_t> labels = read_labels_csv(a.labels);
  double value = 0.0;
  if (!a.input.empty()) {
    value = rmsd(read_csv(a.input), labels);
  } else {
    value = rmsd(read_leaves_csv(a.leaves), labels);
  }
  std::printf("%.17g\n", value);
  return kOk;
}

int cmd_bench(const BenchArgs& a) {
  std::ifstream in(a.manifest);
  if (!in) throw InvalidInput("cannot open " + a.manifest);
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(in);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidInput(std::string("manifest: ") + e.what());
  }
  BenchManifest manifest = BenchManifest::from_json(j);
  if (a.parallel) manifest.parallel = true;
  const std::vector<BenchResult> rows = run_bench(manifest);

  std::ofstream out(a.out);
  if (!out) throw InvalidInput("cannot open " + a.out + " for writing");
  write_bench_csv(out, rows);
  std::ofstream sidecar(a.out + ".json");
  sidecar << environment_metadata(manifest).dump(2) << '\n';

  std::size_t failed = 0;
  for (const BenchResult& r : rows) {
    if (!r.error.empty()) {
      ++failed;
      std::cerr << "row failed: " << r.algorithm << '/' << r.input_mode << '/' << r.method << " n=" << r.n << ": "
                << r.error << '\n';
    }
  }
  std::cerr << rows.size() << " rows, " << failed << " failed\n";
  return kOk;
}

int cmd_scaling(const ScalingArgs& a) {
  std::ifstream in(a.input);
  if (!in) throw InvalidInput("cannot open " + a.input);
  const std::vector<ScalingSeries> series = scaling_report(read_bench_csv(in));
  if (a.out.empty()) {
    write_scaling_csv(std::cout, series);
  } else {
    std::ofstream out(a.out);
    if (!out) throw InvalidInput("cannot open " + a.out + " for writing");
    write_scaling_csv(out, series);
  }
  for (const ScalingSeries& s : series) {
    std::cerr << s.algorithm << '/' << s.input_mode << '/' << s.method << '/' << s.generator << " slope=" << s.slope
              << '\n';
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Memory-bounded hierarchical clustering with BETULA cluster features"};
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a seeded synthetic dataset as CSV");
  generate->add_option("--kind", gen.kind, "uniform | gaussian")->capture_default_str();
  generate->add_option("-n,--n", gen.n, "Number of points")->capture_default_str();
  generate->add_option("-d,--dim", gen.dim, "Dimensions")->capture_default_str();
  generate->add_option("-k,--clusters", gen.k, "Mixture components")->capture_default_str();
  generate->add_option("--seed", gen.seed, "Generator seed")->capture_default_str();
  generate->add_option("--scale", gen.scale, "Hypercube side length")->capture_default_str();
  generate->add_option("--sigma", gen.sigma, "Mixture standard deviation")->capture_default_str();
  generate->add_option("--spec", gen.spec_path, "Generator spec as JSON (overrides the flags)");
  generate->add_option("-o,--out", gen.out, "Output CSV")->required();

  ClusterArgs cl;
  auto* cluster = app.add_subcommand("cluster", "Cluster a CSV dataset and write the dendrogram");
  cluster->add_option("-i,--input", cl.input, "Input CSV")->required();
  cluster->add_option("--mode", cl.mode, "full | cf-centers | cf-linkage | cf-aggregation")->capture_default_str();
  cluster->add_option("--linkage", cl.linkage, "single | complete | upgma | wpgma | upgmc | wpgmc | ward");
  cluster->add_option("--criterion", cl.criterion, "D0 | D1 | D2 | D3 | D4 | R (cf-aggregation)");
  cluster->add_option("--metric", cl.metric, "euclidean | sqeuclidean (plain-init linkages)")
      ->capture_default_str();
  cluster->add_option("--engine", cl.engine, "naive | anderberg | nnchain")->capture_default_str();
  cluster->add_option("--branching", cl.branching, "Tree branching factor")->capture_default_str();
  cluster->add_option("--max-leaves", cl.max_leaves, "Leaf entry cap, 0 for a fixed threshold")
      ->capture_default_str();
  cluster->add_option("--threshold", cl.threshold, "Initial absorption threshold")->capture_default_str();
  cluster->add_option("--tree-criterion", cl.tree_criterion, "Tree absorption criterion")->capture_default_str();
  cluster->add_option("--tree-routing", cl.tree_routing, "Tree descent and split criterion")->capture_default_str();
  cluster->add_option("--tree-seed", cl.tree_seed, "Seed for threshold bootstrapping");
  cluster->add_flag("--linear-memory", cl.linear_memory, "Matrix-free NN-chain (ward, upgmc, wpgmc, upgma+sq)");
  cluster->add_option("--threads", cl.threads, "Workers for distance matrix initialization")
      ->capture_default_str();
  cluster->add_option("-o,--out", cl.out, "Dendrogram CSV")->required();
  cluster->add_flag("--sqrt-heights", cl.sqrt_heights, "Write square roots of squared heights");
  cluster->add_option("--cut", cl.cut_k, "Cut into k clusters and print the RMSD");
  cluster->add_option("--labels", cl.labels, "Labels CSV for --cut");
  cluster->add_option("--leaves", cl.leaves, "Dump clustered items as a leaf CSV");
  cluster->add_flag("-q,--quiet", cl.quiet, "No summary on stderr");

  CutArgs ct;
  auto* cut_cmd = app.add_subcommand("cut", "Cut a dendrogram into k flat clusters");
  cut_cmd->add_option("-d,--dendrogram", ct.dendrogram, "Dendrogram CSV")->required();
  cut_cmd->add_option("-k,--k", ct.k, "Number of clusters")->required();
  cut_cmd->add_option("-o,--out", ct.out, "Labels CSV")->required();

  RmsdArgs rm;
  auto* rmsd_cmd = app.add_subcommand("rmsd", "Root mean squared deviation of a labeling");
  rmsd_cmd->add_option("-i,--input", rm.input, "Point CSV");
  rmsd_cmd->add_option("--leaves", rm.leaves, "Leaf CSV (n,mu..,sse)");
  rmsd_cmd->add_option("-l,--labels", rm.labels, "Labels CSV")->required();

  BenchArgs bn;
  auto* bench = app.add_subcommand("bench", "Run a benchmark manifest");
  bench->add_option("-m,--manifest", bn.manifest, "Manifest JSON")->required();
  bench->add_option("-o,--out", bn.out, "Results CSV (a .json sidecar is written next to it)")->required();
  bench->add_flag("--parallel", bn.parallel, "Run rows concurrently (timings flagged as contended)");

  ScalingArgs sc;
  auto* scaling = app.add_subcommand("scaling-report", "Log-log runtime slopes from bench results");
  scaling->add_option("-i,--input", sc.input, "Results CSV")->required();
  scaling->add_option("-o,--out", sc.out, "Plot-ready CSV (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsageError;
  }

  try {
    if (*generate) return cmd_generate(gen);
    if (*cluster) return cmd_cluster(cl);
    if (*cut_cmd) return cmd_cut(ct);
    if (*rmsd_cmd) return cmd_rmsd(rm);
    if (*bench) return cmd_bench(bn);
    if (*scaling) return cmd_scaling(sc);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << '\n';
    return kUsageError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kDataError;
  }
  return kUsageError;
}
