#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "oracles.hpp"
#include "rtclass/features.hpp"
#include "rtclass/rng.hpp"
#include "rtclass/synth.hpp"

using namespace rtclass;

namespace {

std::map<std::string, double> named(const std::array<double, kFeatureCount>& values) {
  std::map<std::string, double> out;
  for (std::size_t i = 0; i < kFeatureCount; ++i) out[feature_names()[i]] = values[i];
  return out;
}

bool close(double a, double b, double tol = 1e-9) {
  return std::abs(a - b) <= tol * std::max({1.0, std::abs(a), std::abs(b)});
}

}  // namespace

TEST_CASE("roster has 24 uniquely-indexed names") {
  CHECK(feature_names().size() == 24);
  for (std::size_t i = 0; i < kFeatureCount; ++i)
    CHECK(feature_index(feature_names()[i]) == static_cast<int>(i));
  CHECK(feature_index("entropy") == -1);
}

TEST_CASE("quantile examples: [1..5]") {
  const auto f = named(featurize(std::vector<double>{1, 2, 3, 4, 5}));
  CHECK(f.at("iqr") == 2.0);
  CHECK(f.at("median") == 3.0);
  CHECK(f.at("q05") == doctest::Approx(1.2).epsilon(1e-12));
}

TEST_CASE("kstat2 of [1,2,3,4] is the unbiased variance 5/3") {
  const auto f = named(featurize(std::vector<double>{1, 2, 3, 4}));
  CHECK(f.at("kstat2") == doctest::Approx(5.0 / 3.0).epsilon(1e-12));
}

TEST_CASE("constant input: zero dispersion, skewness defined as 0") {
  const auto f = named(featurize(std::vector<double>{2, 2, 2, 2}));
  CHECK(f.at("std") == 0.0);
  CHECK(f.at("kstat2") == 0.0);
  CHECK(f.at("range") == 0.0);
  CHECK(f.at("skewness") == 0.0);
  CHECK(f.at("kurtosis") == 0.0);
  for (const auto& [name, v] : f) {
    INFO(name);
    CHECK(std::isfinite(v));
  }
}

TEST_CASE("length < 4 and non-finite input are errors") {
  CHECK_THROWS_AS(featurize(std::vector<double>{1, 2, 3}), std::invalid_argument);
  CHECK_THROWS_AS(featurize(std::vector<double>{1, 2, NAN, 4}), std::invalid_argument);
  CHECK_THROWS_AS(featurize(std::vector<double>{1, 2, INFINITY, 4}), std::invalid_argument);
}

TEST_CASE("all 24 features match the direct-definition oracle on seeded vectors") {
  Rng rng(2024);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 4 + rng.next_index(497);
    std::vector<double> x(n);
    const double scale = std::exp(rng.next_uniform(-2.0, 4.0));
    const double shift = rng.next_uniform(-50.0, 50.0);
    for (auto& v : x) v = shift + scale * rng.next_normal();

    const auto got = named(featurize(x));
    const auto want = oracle::features(x);
    for (const auto& [name, v] : want) {
      INFO(name << " n=" << n);
      CHECK(close(got.at(name), v));
    }
  }
}

TEST_CASE("shift equivariance") {
  Rng rng(7);
  std::vector<double> x(64);
  for (auto& v : x) v = rng.next_normal();
  const double c = 3.75;
  std::vector<double> shifted(x);
  for (auto& v : shifted) v += c;

  const auto a = named(featurize(x));
  const auto b = named(featurize(shifted));
  for (const char* name : {"min", "max", "mean", "median", "q05", "q25", "q75", "q95", "tmean"})
    CHECK(close(b.at(name), a.at(name) + c));
  for (const char* name :
       {"std", "var", "mad", "iqr", "range", "kstat2", "kstat3", "kstat4", "tvar"})
    CHECK(close(b.at(name), a.at(name)));
}

TEST_CASE("scale equivariance") {
  Rng rng(8);
  std::vector<double> x(64);
  for (auto& v : x) v = rng.next_normal() + 0.5;
  const double a_scale = 2.5;
  std::vector<double> scaled(x);
  for (auto& v : scaled) v *= a_scale;

  const auto a = named(featurize(x));
  const auto b = named(featurize(scaled));
  for (const char* name :
       {"min", "max", "range", "mean", "median", "std", "sem", "mad", "iqr", "q05", "q25",
        "q75", "q95", "tmean", "rms"})
    CHECK(close(b.at(name), a_scale * a.at(name)));
  for (const char* name : {"var", "tvar", "kstat2", "energy"})
    CHECK(close(b.at(name), a_scale * a_scale * a.at(name)));
  CHECK(close(b.at("skewness"), a.at("skewness")));
  CHECK(close(b.at("kurtosis"), a.at("kurtosis")));
}

TEST_CASE("permutation invariance") {
  Rng rng(9);
  std::vector<double> x(41);
  for (auto& v : x) v = rng.next_normal();
  auto shuffled = x;
  rng.shuffle(shuffled);

  const auto a = featurize(x);
  const auto b = featurize(shuffled);
  for (std::size_t i = 0; i < kFeatureCount; ++i) CHECK(close(a[i], b[i]));
}

namespace {

Dataset small_uwb_dataset(int per_class) {
  std::vector<RadioTrace> traces;
  ScenarioConfig config;
  config.tech = Tech::Uwb;
  config.duration_s = 2.0;
  int i = 0;
  for (Label label : {Label::Idle, Label::Bicycle}) {
    config.label = label;
    for (int j = 0; j < per_class; ++j) {
      config.seed = static_cast<std::uint64_t>(i++);
      auto t = generate_trace(config);
      t.id = "t" + std::to_string(i);
      traces.push_back(std::move(t));
    }
  }
  return make_dataset(std::move(traces));
}

}  // namespace

TEST_CASE("featurize_dataset: row per trace in dataset order") {
  const auto d = small_uwb_dataset(5);
  const auto m = featurize_dataset(d, "FC", "f0");
  REQUIRE(m.rows.size() == 10);
  REQUIRE(m.labels.size() == 10);
  CHECK(m.classes == std::vector<Label>{Label::Idle, Label::Bicycle});
  for (std::size_t i = 0; i < 10; ++i) CHECK(m.trace_ids[i] == d.traces[i].id);
}

TEST_CASE("missing parameter errors with the trace id") {
  const auto d = small_uwb_dataset(2);
  CHECK_THROWS_WITH_AS(featurize_dataset(d, "RSSI", "f0"), doctest::Contains("t1"),
                       std::invalid_argument);
}

TEST_CASE("f0 and f3 matrices differ only through smoothing") {
  const auto d = small_uwb_dataset(3);
  const auto raw = featurize_dataset(d, "FC", "f0");
  const auto smooth = featurize_dataset(d, "FC", "f3");
  REQUIRE(raw.rows.size() == smooth.rows.size());
  bool any_diff = false;
  for (std::size_t i = 0; i < raw.rows.size(); ++i)
    if (raw.rows[i] != smooth.rows[i]) any_diff = true;
  CHECK(any_diff);
  CHECK(raw.labels == smooth.labels);
  CHECK(raw.trace_ids == smooth.trace_ids);
}

TEST_CASE("csv export carries the pinned header") {
  const auto d = small_uwb_dataset(2);
  const auto m = featurize_dataset(d, "FC", "f0");
  const auto csv = feature_matrix_csv(m);
  std::string header = "trace_id,label";
  for (const auto& name : feature_names()) header += "," + name;
  CHECK(csv.substr(0, header.size()) == header);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 5);  // header + 4 rows
}
