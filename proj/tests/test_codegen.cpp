#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <algorithm>
#include <charconv>
#include <filesystem>
#include <span>

#include "codegen_harness.hpp"
#include "rtclass/codegen.hpp"
#include "rtclass/model_io.hpp"
#include "rtclass/rng.hpp"

using namespace rtclass;

namespace {

const std::vector<std::string> kOrder = {"x0", "x1", "x2"};

std::filesystem::path work_dir() {
  return std::filesystem::temp_directory_path() / "rtclass_codegen_test";
}

ForestModel toy_forest(int n_trees, std::uint64_t seed) {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  Rng rng(seed);
  for (int i = 0; i < 90; ++i) {
    const int cls = i % 3;
    x.push_back({cls * 0.3 + 0.05 * rng.next_normal(), rng.next_double(),
                 0.5 * cls + 0.1 * rng.next_normal()});
    y.push_back(cls);
  }
  return train_forest(x, y, {.n_trees = n_trees}, seed);
}

}  // namespace

TEST_CASE("leaf-only tree emits a constant return") {
  ForestModel m;
  m.n_features = 3;
  m.n_classes = 2;
  DecisionTree t;
  t.nodes.push_back({-1, 0.0, -1, -1, {1, 4}});
  m.trees = {t};

  const auto bundle = export_forest(m, "c99", kOrder);
  CHECK(bundle.entry == "predict");
  const auto tree_begin = bundle.source.find("static int tree_0");
  const auto tree_end = bundle.source.find("int predict");
  REQUIRE(tree_begin != std::string::npos);
  const std::string tree_fn = bundle.source.substr(tree_begin, tree_end - tree_begin);
  CHECK(tree_fn.find("return 1;") != std::string::npos);
  CHECK(tree_fn.find("if (") == std::string::npos);

  harness::CompiledModel compiled(bundle.source, work_dir(), "leafonly");
  const float f[3] = {0.0f, 0.0f, 0.0f};
  CHECK(compiled.predict(f) == 1);
}

TEST_CASE("depth-2 tree with 3 leaves emits exactly 2 conditionals") {
  ForestModel m;
  m.n_features = 3;
  m.n_classes = 2;
  DecisionTree t;
  t.nodes.push_back({0, 0.5, 1, 2, {}});
  t.nodes.push_back({-1, 0.0, -1, -1, {3, 0}});
  t.nodes.push_back({1, 0.25, 3, 4, {}});
  t.nodes.push_back({-1, 0.0, -1, -1, {0, 2}});
  t.nodes.push_back({-1, 0.0, -1, -1, {2, 1}});
  m.trees = {t};

  const auto bundle = export_forest(m, "c99", kOrder);
  std::size_t count = 0, pos = 0;
  while ((pos = bundle.source.find("if (f[", pos)) != std::string::npos) {
    ++count;
    pos += 6;
  }
  CHECK(count == 2);
}

TEST_CASE("emitted forest agrees with the in-memory forest on fuzz vectors") {
  const auto forest = toy_forest(15, 21);
  const auto bundle = export_forest(forest, "c99", kOrder);
  harness::CompiledModel compiled(bundle.source, work_dir(), "forest15");

  Rng rng(55);
  for (int i = 0; i < 2000; ++i) {
    float f[3];
    double d[3];
    for (int j = 0; j < 3; ++j) {
      f[j] = static_cast<float>(rng.next_uniform(-0.5, 1.5));
      d[j] = static_cast<double>(f[j]);
    }
    REQUIRE(compiled.predict(f) == forest.predict(std::span<const double>(d, 3)));
  }
}

TEST_CASE("emitted mlp agrees except on sub-1e-9 logit ties") {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  Rng rng(8);
  for (int i = 0; i < 60; ++i) {
    const int cls = i % 2;
    x.push_back({(cls ? 0.7 : 0.3) + 0.1 * rng.next_normal(), rng.next_double(),
                 rng.next_double()});
    y.push_back(cls);
  }
  const auto mlp = train_mlp(x, y, {.epochs = 150}, 13);
  const auto bundle = export_mlp(mlp, "c99", kOrder);
  harness::CompiledModel compiled(bundle.source, work_dir(), "mlp");

  int checked = 0;
  for (int i = 0; i < 2000; ++i) {
    float f[3];
    double d[3];
    for (int j = 0; j < 3; ++j) {
      f[j] = static_cast<float>(rng.next_double());
      d[j] = static_cast<double>(f[j]);
    }
    const auto logits = mlp.logits(std::span<const double>(d, 3));
    std::vector<double> sorted(logits);
    std::sort(sorted.begin(), sorted.end());
    const double gap = sorted.back() - sorted[sorted.size() - 2];
    if (gap < 1e-9) continue;  // tie tolerance per contract
    REQUIRE(compiled.predict(f) == mlp.predict(std::span<const double>(d, 3)));
    ++checked;
  }
  CHECK(checked > 1900);
}

TEST_CASE("zero-weight mlp predicts the lowest class index") {
  MlpModel m;
  m.n_inputs = 2;
  m.n_hidden = 2;
  m.n_classes = 3;
  m.w1.assign(4, 0.0);
  m.b1.assign(2, 0.0);
  m.w2.assign(6, 0.0);
  m.b2.assign(3, 0.0);
  const auto bundle = export_mlp(m, "c99", {"a", "b"});
  harness::CompiledModel compiled(bundle.source, work_dir(), "zero");
  const float f[2] = {0.3f, 0.9f};
  CHECK(compiled.predict(f) == 0);
  CHECK(m.predict(std::vector<double>{0.3, 0.9}) == 0);
}

TEST_CASE("identity-like single-hidden-unit net is hand-checkable") {
  // hidden = logistic(x0); logits = (0, hidden): class 1 iff hidden > 0
  MlpModel m;
  m.n_inputs = 1;
  m.n_hidden = 1;
  m.n_classes = 2;
  m.w1 = {1.0};
  m.b1 = {0.0};
  m.w2 = {0.0, 1.0};
  m.b2 = {0.0, -0.5};  // logit1 = logistic(x) - 0.5 > 0 iff x > 0
  const auto bundle = export_mlp(m, "c99", {"x"});
  harness::CompiledModel compiled(bundle.source, work_dir(), "hand");
  const float pos[1] = {2.0f}, neg[1] = {-2.0f};
  CHECK(compiled.predict(pos) == 1);
  CHECK(compiled.predict(neg) == 0);
  CHECK(m.predict(std::vector<double>{2.0}) == 1);
  CHECK(m.predict(std::vector<double>{-2.0}) == 0);
}

TEST_CASE("unknown dialect errors and lists the known ones") {
  const auto forest = toy_forest(2, 3);
  CHECK_THROWS_WITH_AS(export_forest(forest, "rust", kOrder), doctest::Contains("c99"),
                       std::invalid_argument);
  CHECK_THROWS_AS(export_mlp(MlpModel{}, "java", {}), std::invalid_argument);
  CHECK(codegen_dialects() == std::vector<std::string>{"c99", "pseudo"});
}

TEST_CASE("pseudo dialect emits readable structure, bit-exact per model") {
  const auto forest = toy_forest(3, 9);
  const auto a = export_forest(forest, "pseudo", kOrder);
  const auto b = export_forest(forest, "pseudo", kOrder);
  CHECK(a.source == b.source);
  CHECK(a.source.find("tree 0:") != std::string::npos);
  CHECK(a.source.find("majority vote") != std::string::npos);
  CHECK(a.digest == export_forest(forest, "c99", kOrder).digest);
  CHECK(a.digest == fnv1a64_hex(serialize_forest_payload(forest)));
}

TEST_CASE("emitted bytes per node stay bounded (linear size growth)") {
  const auto small = toy_forest(5, 2);
  const auto big = toy_forest(40, 2);
  auto nodes_of = [](const ForestModel& m) {
    std::size_t n = 0;
    for (const auto& t : m.trees) n += t.nodes.size();
    return n;
  };
  const auto s1 = export_forest(small, "c99", kOrder).source.size();
  const auto s2 = export_forest(big, "c99", kOrder).source.size();
  const double per_node_small = static_cast<double>(s1) / static_cast<double>(nodes_of(small));
  const double per_node_big = static_cast<double>(s2) / static_cast<double>(nodes_of(big));
  CHECK(per_node_big < 220.0);
  CHECK(per_node_small < 220.0);
}

TEST_CASE("threshold literals parse back to the same double") {
  const auto forest = toy_forest(4, 30);
  const auto bundle = export_forest(forest, "c99", kOrder);
  for (const auto& tree : forest.trees)
    for (const auto& node : tree.nodes)
      if (node.feature >= 0) {
        char buf[40];
        const auto res = std::to_chars(buf, buf + sizeof buf, node.threshold);
        std::string lit(buf, res.ptr);
        if (lit.find('.') == std::string::npos && lit.find('e') == std::string::npos)
          lit += ".0";
        CHECK(bundle.source.find(lit) != std::string::npos);
        CHECK(std::stod(lit) == node.threshold);
      }
}
