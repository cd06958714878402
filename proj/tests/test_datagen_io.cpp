#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <set>
#include <sstream>

#include <json.hpp>

#include "betula/csv_io.hpp"
#include "betula/datagen.hpp"
#include "betula/error.hpp"
#include "betula/random.hpp"
#include "support.hpp"

using namespace betula;

TEST_CASE("splitmix64 reference values") {
  // Published first outputs for seed 1234567.
  SplitMix64 rng(1234567);
  CHECK(rng.next() == 6457827717110365317ULL);
  CHECK(rng.next() == 3203168211198807973ULL);
  CHECK(rng.next() == 9817491932198370423ULL);
}

TEST_CASE("generator primitives") {
  SplitMix64 rng(3);
  double lo = 1.0, hi = 0.0, sum = 0.0, sq = 0.0;
  constexpr int kDraws = 200000;
  for (int i = 0; i < kDraws; ++i) {
    const double u = rng.uniform();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    const double z = rng.normal();
    sum += z;
    sq += z * z;
  }
  CHECK(lo >= 0.0);
  CHECK(hi < 1.0);
  CHECK(std::abs(sum / kDraws) < 0.01);
  CHECK(std::abs(sq / kDraws - 1.0) < 0.02);
  for (int i = 0; i < 1000; ++i) CHECK(rng.below(7) < 7);
  CHECK(derive_seed(5, 1) != derive_seed(5, 2));
  CHECK(derive_seed(5, 1) == derive_seed(5, 1));
}

TEST_CASE("uniform generation is deterministic") {
  GeneratorSpec spec;
  spec.n = 4;
  spec.dim = 2;
  spec.seed = 7;
  const Dataset a = generate(spec);
  CHECK(a == generate(spec));
  CHECK(a.size() == 4);
  CHECK(a.dim() == 2);
  for (double v : a.values()) {
    CHECK(v >= 0.0);
    CHECK(v <= 100.0);
  }
  spec.seed = 8;
  CHECK_FALSE(a == generate(spec));
}

TEST_CASE("degenerate mixture collapses onto its centers") {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::GaussianMixture;
  spec.n = 1000;
  spec.k_clusters = 10;
  spec.cluster_sigma = 1e-300;
  const Dataset d = generate(spec);
  std::set<std::vector<double>> distinct;
  for (std::size_t i = 0; i < d.size(); ++i) distinct.insert(std::vector<double>(d[i].begin(), d[i].end()));
  CHECK(distinct.size() == 10);
  // Round-robin assignment: point i belongs to component i mod k.
  for (std::size_t i = 10; i < d.size(); ++i) {
    CHECK(std::vector<double>(d[i].begin(), d[i].end()) == std::vector<double>(d[i % 10].begin(), d[i % 10].end()));
  }
}

TEST_CASE("50k-point uniform data has the right shape") {
  GeneratorSpec spec;
  spec.n = 50000;
  spec.dim = 5;
  const Dataset d = generate(spec);
  CHECK(d.size() == 50000);
  CHECK(d.dim() == 5);
}

TEST_CASE("mixture spread matches sigma") {
  GeneratorSpec spec;
  spec.kind = GeneratorKind::GaussianMixture;
  spec.n = 20000;
  spec.dim = 3;
  spec.k_clusters = 4;
  spec.cluster_sigma = 2.0;
  spec.seed = 9;
  const Dataset d = generate(spec);
  // Per-component variance, estimated with round-robin membership.
  for (std::size_t c = 0; c < 4; ++c) {
    std::vector<Vector> members;
    for (std::size_t i = c; i < d.size(); i += 4) members.emplace_back(d[i].begin(), d[i].end());
    const ClusterFeature cf = testing_support::fold_points(members);
    CHECK(cf.sse() / (cf.weight() * 3.0) == doctest::Approx(4.0).epsilon(0.05));
  }
}

TEST_CASE("spec validation and json") {
  GeneratorSpec bad;
  bad.n = 0;
  CHECK_THROWS_AS(generate(bad), InvalidInput);
  bad = {};
  bad.dim = 0;
  CHECK_THROWS_AS(generate(bad), InvalidInput);
  bad = {};
  bad.k_clusters = 0;
  CHECK_THROWS_AS(generate(bad), InvalidInput);
  bad = {};
  bad.cluster_sigma = 0;
  CHECK_THROWS_AS(generate(bad), InvalidInput);

  GeneratorSpec spec;
  spec.kind = GeneratorKind::GaussianMixture;
  spec.n = 123;
  spec.dim = 4;
  spec.k_clusters = 6;
  spec.seed = 0xdeadbeefcafeULL;
  spec.domain_scale = 50;
  spec.cluster_sigma = 0.5;
  const nlohmann::json j = spec;
  CHECK(j.at("kind") == "gaussian");
  CHECK(j.get<GeneratorSpec>() == spec);
  const auto partial = nlohmann::json::parse(R"({"kind":"uniform","n":10})").get<GeneratorSpec>();
  CHECK(partial.n == 10);
  CHECK(partial.dim == 5);
  CHECK_THROWS(nlohmann::json::parse(R"({"kind":"zipf"})").get<GeneratorSpec>());
}

TEST_CASE("shuffled order is a seeded permutation") {
  const auto a = shuffled_order(100, 3);
  CHECK(a == shuffled_order(100, 3));
  CHECK(a != shuffled_order(100, 4));
  std::vector<std::size_t> sorted = a;
  std::sort(sorted.begin(), sorted.end());
  for (std::size_t i = 0; i < 100; ++i) CHECK(sorted[i] == i);
}

TEST_CASE("csv round trip is bit-identical") {
  SplitMix64 rng(81);
  Dataset d(3);
  for (int i = 0; i < 100; ++i) {
    Vector p{rng.normal() * 1e-7, rng.normal() * 1e12, rng.uniform() - 0.5};
    d.add(p);
  }
  d.add(Vector{0.1, -0.0, 5e-324});
  std::stringstream io;
  write_csv(io, d);
  CHECK(read_csv(io) == d);

  const auto path = (std::filesystem::temp_directory_path() / "betula_csv_roundtrip.csv").string();
  write_csv(path, d);
  CHECK(read_csv(path) == d);
  std::remove(path.c_str());
}

TEST_CASE("csv header detection and blank lines") {
  std::stringstream with_header("x,y\n1,2\n\n3,4\n");
  const Dataset d = read_csv(with_header);
  CHECK(d.size() == 2);
  CHECK(d[1][0] == 3.0);
  std::stringstream without(" 1 , 2\r\n3,4\n");
  CHECK(read_csv(without).size() == 2);
}

TEST_CASE("csv errors name the line") {
  std::stringstream ragged("a,b\n1,2\n3,4\n5\n");
  try {
    (void)read_csv(ragged);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 4);
  }
  std::stringstream text("1,2\n3,oops\n");
  try {
    (void)read_csv(text);
    FAIL("expected a parse error");
  } catch (const ParseError& e) {
    CHECK(e.line() == 2);
  }
  std::stringstream inf("1,2\n3,inf\n");
  CHECK_THROWS_AS(read_csv(inf), ParseError);
  std::stringstream empty("");
  CHECK(read_csv(empty).empty());
  CHECK_THROWS(read_csv(std::string("/nonexistent/betula.csv")));
}

TEST_CASE("leaf and label files round trip") {
  const std::vector<ClusterFeature> leaves{ClusterFeature(3, {1.5, -2.25}, 0.75), ClusterFeature(1, {0, 1e-300}, 0)};
  std::stringstream io;
  write_leaves_csv(io, leaves);
  CHECK(io.str().rfind("n,mu_1,mu_2,sse\n", 0) == 0);
  CHECK(read_leaves_csv(io) == leaves);

  const std::vector<std::size_t> labels{0, 0, 1, 2, 1};
  std::stringstream lio;
  write_labels_csv(lio, labels);
  CHECK(lio.str().rfind("item_id,label\n0,0\n", 0) == 0);
  CHECK(read_labels_csv(lio) == labels);

  std::stringstream gap("item_id,label\n0,1\n2,0\n");
  CHECK_THROWS_AS(read_labels_csv(gap), ParseError);
  std::stringstream neg("n,mu_1,sse\n-1,0,0\n");
  CHECK_THROWS(read_leaves_csv(neg));
}
