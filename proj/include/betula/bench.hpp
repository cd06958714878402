#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include <json.hpp>

#include "betula/cf_tree.hpp"
#include "betula/datagen.hpp"
#include "betula/hac.hpp"
#include "betula/pipeline.hpp"

namespace betula {

/// One clustering configuration of a benchmark grid. `method` is a linkage
/// name, or a criterion name for cf-aggregation.
struct BenchRun {
  InputMode mode = InputMode::FullData;
  Engine engine = Engine::Anderberg;
  std::string method = "ward";
  BaseMetric metric = BaseMetric::Euclidean;
  bool linear_memory = false;
};

/// Every generator x run x repetition is executed once. Repetition r
/// clusters the generated data in a seeded random order; repetition 0 keeps
/// the generated order.
struct BenchManifest {
  std::vector<GeneratorSpec> generators;
  std::vector<BenchRun> runs;
  std::size_t repetitions = 1;
  /// 0 disables the RMSD column.
  std::size_t cut_k = 0;
  TreeConfig tree;
  /// Run rows concurrently; timings are then flagged as contended.
  bool parallel = false;

  /// Throws InvalidInput on unknown names or missing fields.
  static BenchManifest from_json(const nlohmann::json& j);
  nlohmann::json to_json() const;
};

struct BenchResult {
  std::string algorithm;
  std::string input_mode;
  std::string method;
  std::string generator;
  std::size_t n = 0;
  std::size_t dim = 0;
  std::uint64_t seed = 0;
  std::size_t repetition = 0;
  std::optional<std::size_t> leaf_count;
  double tree_time_seconds = 0.0;
  double wall_time_seconds = 0.0;
  std::size_t cut_k = 0;
  std::optional<double> rmsd_at_k;
  bool contended = false;
  /// Empty on success, otherwise the error that aborted this row.
  std::string error;

  double total_seconds() const { return tree_time_seconds + wall_time_seconds; }
};

BenchResult run_bench_row(const Dataset& data, const GeneratorSpec& gen, const BenchRun& run,
                          const BenchManifest& manifest, std::size_t repetition);
std::vector<BenchResult> run_bench(const BenchManifest& manifest);

void write_bench_csv(std::ostream& out, std::span<const BenchResult> rows);
/// Throws ParseError for malformed rows.
std::vector<BenchResult> read_bench_csv(std::istream& in);

/// Host and build facts for the JSON sidecar of a results file.
nlohmann::json environment_metadata(const BenchManifest& manifest);

/// Least-squares slope of log(t) against log(n). Throws InvalidInput for
/// fewer than two distinct sizes or non-positive values.
double loglog_slope(std::span<const double> n, std::span<const double> t);

struct ScalingPoint {
  std::size_t n = 0;
  double mean_seconds = 0.0;
  double stddev_seconds = 0.0;
  std::size_t samples = 0;
};

struct ScalingSeries {
  std::string algorithm;
  std::string input_mode;
  std::string method;
  std::string generator;
  std::vector<ScalingPoint> points;
  double slope = 0.0;
};

/// Groups successful rows by (algorithm, input mode, method, generator),
/// averages total time per size and fits the log-log slope. Throws
/// InvalidInput if any series has fewer than three sizes.
std::vector<ScalingSeries> scaling_report(std::span<const BenchResult> rows);

/// Plot-ready CSV: series columns, n, mean, stddev, samples, slope.
void write_scaling_csv(std::ostream& out, std::span<const ScalingSeries> series);

}  // namespace betula
