#include "betula/bench.hpp"

#include <cmath>
#include <atomic>
#include <charconv>
#include <chrono>
#include <ctime>
#include <future>
#include <istream>
#include <map>
#include <ostream>
#include <thread>
#include <tuple>

#include <unistd.h>

#include "betula/error.hpp"
#include "betula/evaluation.hpp"
#include "betula/random.hpp"
#include "text_format.hpp"

namespace betula {

namespace {

using nlohmann::json;

constexpr std::string_view kBenchHeader =
    "algorithm,input_mode,method,generator,N,dim,seed,repetition,leaf_count,tree_time_seconds,"
    "wall_time_seconds,cut_k,rmsd_at_k,contended,error";

std::string sanitize(std::string s) {
  for (char& c : s) {
    if (c == ',') c = ';';
    if (c == '\n' || c == '\r') c = ' ';
  }
  return s;
}

std::string generator_name(const GeneratorSpec& g) {
  return g.kind == GeneratorKind::Uniform ? "uniform" : "gaussian";
}

PipelineConfig pipeline_config(const BenchRun& run, const TreeConfig& tree) {
  PipelineConfig config;
  config.mode = run.mode;
  config.engine = run.engine;
  config.tree = tree;
  config.linear_memory = run.linear_memory;
  if (run.mode == InputMode::CFAggregation) {
    const auto kind = parse_cf_distance(run.method);
    if (!kind) throw InvalidInput("unknown criterion '" + run.method + "'");
    config.criterion = *kind;
  } else {
    const auto kind = parse_linkage(run.method);
    if (!kind) throw InvalidInput("unknown linkage '" + run.method + "'");
    config.linkage = LinkageSpec(*kind, run.metric);
  }
  config.validate();
  return config;
}

BenchRun parse_run(const json& j) {
  BenchRun run;
  const auto mode = parse_input_mode(j.at("mode").get<std::string>());
  if (!mode) throw InvalidInput("unknown mode '" + j.at("mode").get<std::string>() + "'");
  run.mode = *mode;
  if (j.contains("engine")) {
    const auto engine = parse_engine(j.at("engine").get<std::string>());
    if (!engine) throw InvalidInput("unknown engine '" + j.at("engine").get<std::string>() + "'");
    run.engine = *engine;
  }
  const bool has_linkage = j.contains("linkage");
  const bool has_criterion = j.contains("criterion");
  if (run.mode == InputMode::CFAggregation) {
    if (!has_criterion || has_linkage) throw InvalidInput("cf-aggregation runs need a criterion and no linkage");
    run.method = j.at("criterion").get<std::string>();
  } else {
    if (!has_linkage || has_criterion) throw InvalidInput("runs in mode " + std::string(to_string(run.mode)) +
                                                          " need a linkage and no criterion");
    run.method = j.at("linkage").get<std::string>();
  }
  if (j.contains("metric")) {
    const std::string metric = j.at("metric").get<std::string>();
    if (metric == "euclidean") run.metric = BaseMetric::Euclidean;
    else if (metric == "sqeuclidean") run.metric = BaseMetric::SquaredEuclidean;
    else throw InvalidInput("unknown metric '" + metric + "'");
  }
  if (j.contains("linear_memory")) run.linear_memory = j.at("linear_memory").get<bool>();
  return run;
}

TreeConfig parse_tree(const json& j) {
  TreeConfig tree;
  if (j.contains("branching_factor")) tree.branching_factor = j.at("branching_factor").get<std::size_t>();
  if (j.contains("max_leaf_entries")) tree.max_leaf_entries = j.at("max_leaf_entries").get<std::size_t>();
  if (j.contains("threshold")) tree.initial_threshold = j.at("threshold").get<double>();
  if (j.contains("seed")) tree.seed = j.at("seed").get<std::uint64_t>();
  if (j.contains("criterion")) {
    const auto kind = parse_cf_distance(j.at("criterion").get<std::string>());
    if (!kind) throw InvalidInput("unknown tree criterion");
    tree.criterion = *kind;
  }
  if (j.contains("routing")) {
    const auto kind = parse_cf_distance(j.at("routing").get<std::string>());
    if (!kind) throw InvalidInput("unknown tree routing criterion");
    tree.routing = *kind;
  }
  tree.validate();
  return tree;
}

std::optional<double> optional_double(std::string_view cell) {
  if (detail::trim(cell).empty()) return std::nullopt;
  return detail::parse_double(cell);
}

}  // namespace

BenchManifest BenchManifest::from_json(const json& j) {
  BenchManifest m;
  try {
    for (const auto& g : j.at("generators")) m.generators.push_back(g.get<GeneratorSpec>());
    for (const auto& r : j.at("runs")) m.runs.push_back(parse_run(r));
    if (j.contains("repetitions")) m.repetitions = j.at("repetitions").get<std::size_t>();
    if (j.contains("cut_k")) m.cut_k = j.at("cut_k").get<std::size_t>();
    if (j.contains("tree")) m.tree = parse_tree(j.at("tree"));
    if (j.contains("parallel")) m.parallel = j.at("parallel").get<bool>();
  } catch (const json::exception& e) {
    throw InvalidInput(std::string("manifest: ") + e.what());
  }
  if (m.generators.empty() || m.runs.empty()) throw InvalidInput("manifest needs generators and runs");
  if (m.repetitions < 1) throw InvalidInput("manifest needs repetitions >= 1");
  for (const BenchRun& run : m.runs) pipeline_config(run, m.tree);
  return m;
}

json BenchManifest::to_json() const {
  json out;
  out["generators"] = generators;
  json runs_json = json::array();
  for (const BenchRun& run : runs) {
    json r{{"mode", to_string(run.mode)}, {"engine", to_string(run.engine)}};
    r[run.mode == InputMode::CFAggregation ? "criterion" : "linkage"] = run.method;
    r["metric"] = run.metric == BaseMetric::Euclidean ? "euclidean" : "sqeuclidean";
    r["linear_memory"] = run.linear_memory;
    runs_json.push_back(r);
  }
  out["runs"] = runs_json;
  out["repetitions"] = repetitions;
  out["cut_k"] = cut_k;
  out["tree"] = json{{"branching_factor", tree.branching_factor},
                     {"max_leaf_entries", tree.max_leaf_entries},
                     {"threshold", tree.initial_threshold},
                     {"criterion", to_string(tree.criterion)},
                     {"routing", to_string(tree.routing)},
                     {"seed", tree.seed}};
  out["parallel"] = parallel;
  return out;
}

BenchResult run_bench_row(const Dataset& data, const GeneratorSpec& gen, const BenchRun& run,
                          const BenchManifest& manifest, std::size_t repetition) {
  BenchResult row;
  row.algorithm = std::string(to_string(run.engine));
  row.input_mode = std::string(to_string(run.mode));
  row.method = run.method;
  row.generator = generator_name(gen);
  row.n = data.size();
  row.dim = data.dim();
  row.seed = gen.seed;
  row.repetition = repetition;
  row.cut_k = manifest.cut_k;
  row.contended = manifest.parallel;
  try {
    const PipelineResult result = run_pipeline(data, pipeline_config(run, manifest.tree));
    row.leaf_count = result.leaf_count;
    row.tree_time_seconds = result.tree_seconds;
    row.wall_time_seconds = std::max(result.cluster_seconds, 1e-9);
    if (manifest.cut_k > 0) {
      const FlatClustering flat = cut(result.dendrogram, manifest.cut_k);
      row.rmsd_at_k = rmsd(result.items, flat.labels);
    }
  } catch (const std::exception& e) {
    row.error = sanitize(e.what());
  }
  return row;
}

std::vector<BenchResult> run_bench(const BenchManifest& manifest) {
  struct Task {
    std::size_t gen;
    std::size_t rep;
    std::size_t run;
  };
  std::vector<Dataset> base;
  base.reserve(manifest.generators.size());
  for (const auto& g : manifest.generators) base.push_back(generate(g));

  auto data_for = [&](std::size_t gen, std::size_t rep) {
    if (rep == 0) return base[gen];
    return base[gen].permuted(shuffled_order(base[gen].size(), derive_seed(manifest.generators[gen].seed, rep)));
  };

  std::vector<BenchResult> rows;
  if (!manifest.parallel) {
    for (std::size_t g = 0; g < manifest.generators.size(); ++g) {
      for (std::size_t r = 0; r < manifest.repetitions; ++r) {
        const Dataset data = data_for(g, r);
        for (const BenchRun& run : manifest.runs) {
          rows.push_back(run_bench_row(data, manifest.generators[g], run, manifest, r));
        }
      }
    }
    return rows;
  }

  std::vector<Task> tasks;
  for (std::size_t g = 0; g < manifest.generators.size(); ++g) {
    for (std::size_t r = 0; r < manifest.repetitions; ++r) {
      for (std::size_t k = 0; k < manifest.runs.size(); ++k) tasks.push_back({g, r, k});
    }
  }
  rows.resize(tasks.size());
  const std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  std::atomic<std::size_t> next{0};
  std::vector<std::jthread> pool;
  for (std::size_t w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next++; i < tasks.size(); i = next++) {
        const Task& t = tasks[i];
        const Dataset data = data_for(t.gen, t.rep);
        rows[i] = run_bench_row(data, manifest.generators[t.gen], manifest.runs[t.run], manifest, t.rep);
      }
    });
  }
  pool.clear();
  return rows;
}

void write_bench_csv(std::ostream& out, std::span<const BenchResult> rows) {
  out << kBenchHeader << '\n';
  for (const BenchResult& r : rows) {
    out << r.algorithm << ',' << r.input_mode << ',' << r.method << ',' << r.generator << ',' << r.n << ','
        << r.dim << ',' << r.seed << ',' << r.repetition << ',';
    if (r.leaf_count) out << *r.leaf_count;
    out << ',' << detail::format_double(r.tree_time_seconds) << ',' << detail::format_double(r.wall_time_seconds)
        << ',' << r.cut_k << ',';
    if (r.rmsd_at_k) out << detail::format_double(*r.rmsd_at_k);
    out << ',' << (r.contended ? "true" : "false") << ',' << sanitize(r.error) << '\n';
  }
}

std::vector<BenchResult> read_bench_csv(std::istream& in) {
  std::vector<BenchResult> rows;
  std::string line;
  std::size_t lineno = 0;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  ++lineno;
  if (detail::trim(line) != kBenchHeader) throw ParseError(lineno, "unexpected bench header");
  while (std::getline(in, line)) {
    ++lineno;
    if (detail::trim(line).empty()) continue;
    const auto cells = detail::split_csv(line);
    if (cells.size() != 15) throw ParseError(lineno, "expected 15 fields, found " + std::to_string(cells.size()));
    BenchResult r;
    r.algorithm = std::string(detail::trim(cells[0]));
    r.input_mode = std::string(detail::trim(cells[1]));
    r.method = std::string(detail::trim(cells[2]));
    r.generator = std::string(detail::trim(cells[3]));
    const auto n = detail::parse_size(cells[4]);
    const auto dim = detail::parse_size(cells[5]);
    const auto rep = detail::parse_size(cells[7]);
    const auto tree_t = detail::parse_double(cells[9]);
    const auto wall_t = detail::parse_double(cells[10]);
    const auto k = detail::parse_size(cells[11]);
    std::uint64_t seed = 0;
    const auto seed_cell = detail::trim(cells[6]);
    const auto [ptr, ec] = std::from_chars(seed_cell.data(), seed_cell.data() + seed_cell.size(), seed);
    if (!n || !dim || !rep || !tree_t || !wall_t || !k || ec != std::errc{}) {
      throw ParseError(lineno, "malformed numeric field");
    }
    r.n = *n;
    r.dim = *dim;
    r.seed = seed;
    r.repetition = *rep;
    if (!detail::trim(cells[8]).empty()) {
      const auto leaves = detail::parse_size(cells[8]);
      if (!leaves) throw ParseError(lineno, "malformed leaf_count");
      r.leaf_count = *leaves;
    }
    r.tree_time_seconds = *tree_t;
    r.wall_time_seconds = *wall_t;
    r.cut_k = *k;
    if (!detail::trim(cells[12]).empty()) {
      r.rmsd_at_k = optional_double(cells[12]);
      if (!r.rmsd_at_k) throw ParseError(lineno, "malformed rmsd_at_k");
    }
    r.contended = detail::trim(cells[13]) == "true";
    r.error = std::string(detail::trim(cells[14]));
    rows.push_back(std::move(r));
  }
  return rows;
}

json environment_metadata(const BenchManifest& manifest) {
  char host[256] = {};
  if (gethostname(host, sizeof host - 1) != 0) host[0] = '\0';
  const std::time_t now = std::time(nullptr);
  char stamp[32] = {};
  std::strftime(stamp, sizeof stamp, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&now));
  return json{{"hostname", host},
              {"timestamp_utc", stamp},
              {"hardware_threads", std::thread::hardware_concurrency()},
              {"compiler", __VERSION__},
              {"cplusplus", __cplusplus},
#ifdef NDEBUG
              {"assertions", false},
#else
              {"assertions", true},
#endif
              {"manifest", manifest.to_json()}};
}

double loglog_slope(std::span<const double> n, std::span<const double> t) {
  if (n.size() != t.size()) throw InvalidInput("size and time series differ in length");
  std::vector<double> x;
  std::vector<double> y;
  for (std::size_t i = 0; i < n.size(); ++i) {
    if (!(n[i] > 0.0) || !(t[i] > 0.0)) throw InvalidInput("log-log fit needs positive values");
    x.push_back(std::log(n[i]));
    y.push_back(std::log(t[i]));
  }
  double mx = 0.0;
  double my = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(x.size());
  my /= static_cast<double>(x.size());
  double sxy = 0.0;
  double sxx = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  if (!(sxx > 0.0)) throw InvalidInput("log-log fit needs at least two distinct sizes");
  return sxy / sxx;
}

std::vector<ScalingSeries> scaling_report(std::span<const BenchResult> rows) {
  using Key = std::tuple<std::string, std::string, std::string, std::string>;
  std::map<Key, std::map<std::size_t, std::vector<double>>> grouped;
  for (const BenchResult& r : rows) {
    if (!r.error.empty()) continue;
    grouped[{r.algorithm, r.input_mode, r.method, r.generator}][r.n].push_back(r.total_seconds());
  }
  if (grouped.empty()) throw InvalidInput("no successful rows to report on");

  std::vector<ScalingSeries> out;
  for (const auto& [key, by_size] : grouped) {
    ScalingSeries s;
    std::tie(s.algorithm, s.input_mode, s.method, s.generator) = key;
    if (by_size.size() < 3) {
      throw InvalidInput("series " + s.algorithm + "/" + s.input_mode + "/" + s.method + " has " +
                         std::to_string(by_size.size()) + " sizes; at least 3 are needed");
    }
    std::vector<double> ns;
    std::vector<double> means;
    for (const auto& [n, times] : by_size) {
      ScalingPoint p;
      p.n = n;
      p.samples = times.size();
      for (double t : times) p.mean_seconds += t;
      p.mean_seconds /= static_cast<double>(times.size());
      if (times.size() > 1) {
        double var = 0.0;
        for (double t : times) var += (t - p.mean_seconds) * (t - p.mean_seconds);
        p.stddev_seconds = std::sqrt(var / static_cast<double>(times.size() - 1));
      }
      ns.push_back(static_cast<double>(n));
      means.push_back(p.mean_seconds);
      s.points.push_back(p);
    }
    s.slope = loglog_slope(ns, means);
    out.push_back(std::move(s));
  }
  return out;
}

void write_scaling_csv(std::ostream& out, std::span<const ScalingSeries> series) {
  out << "algorithm,input_mode,method,generator,n,mean_seconds,stddev_seconds,samples,slope\n";
  for (const ScalingSeries& s : series) {
    for (const ScalingPoint& p : s.points) {
      out << s.algorithm << ',' << s.input_mode << ',' << s.method << ',' << s.generator << ',' << p.n << ','
          << detail::format_double(p.mean_seconds) << ',' << detail::format_double(p.stddev_seconds) << ','
          << p.samples << ',' << detail::format_double(s.slope) << '\n';
    }
  }
}

}  // namespace betula
