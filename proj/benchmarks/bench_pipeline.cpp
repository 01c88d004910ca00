#include <benchmark/benchmark.h>

#include "rtclass/features.hpp"
#include "rtclass/forest.hpp"
#include "rtclass/preprocess.hpp"
#include "rtclass/rng.hpp"
#include "rtclass/synth.hpp"

using namespace rtclass;

namespace {

std::vector<double> random_series(std::size_t n, std::uint64_t seed) {
  Rng rng(seed);
  std::vector<double> x(n);
  for (auto& v : x) v = rng.next_normal();
  return x;
}

void BM_GaussianSmooth(benchmark::State& state) {
  const auto x = random_series(static_cast<std::size_t>(state.range(0)), 1);
  const double sigma = static_cast<double>(state.range(1));
  for (auto _ : state) benchmark::DoNotOptimize(gaussian_smooth(x, sigma));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_GaussianSmooth)->Args({400, 1})->Args({400, 5})->Args({800, 2});

void BM_Featurize(benchmark::State& state) {
  const auto x = random_series(static_cast<std::size_t>(state.range(0)), 2);
  for (auto _ : state) benchmark::DoNotOptimize(featurize(x));
  state.SetItemsProcessed(state.iterations() * state.range(0));
}
BENCHMARK(BM_Featurize)->Arg(100)->Arg(400)->Arg(800);

void BM_GenerateTrace(benchmark::State& state) {
  ScenarioConfig config;
  config.tech = state.range(0) ? Tech::WlanCsi : Tech::Uwb;
  config.label = Label::Bicycle;
  config.duration_s = 10.0;
  std::uint64_t seed = 0;
  for (auto _ : state) {
    config.seed = ++seed;
    benchmark::DoNotOptimize(generate_trace(config));
  }
}
BENCHMARK(BM_GenerateTrace)->Arg(0)->Arg(1);

struct TrainingFixture {
  std::vector<std::vector<double>> x;
  std::vector<int> y;

  TrainingFixture(std::size_t n, std::size_t d) {
    Rng rng(3);
    for (std::size_t i = 0; i < n; ++i) {
      std::vector<double> row(d);
      const int cls = static_cast<int>(i % 2);
      for (auto& v : row) v = 0.3 * cls + 0.2 * rng.next_normal();
      x.push_back(std::move(row));
      y.push_back(cls);
    }
  }
};

void BM_TrainForest(benchmark::State& state) {
  const TrainingFixture data(static_cast<std::size_t>(state.range(0)), 24);
  for (auto _ : state)
    benchmark::DoNotOptimize(train_forest(data.x, data.y, {}, 7));
}
BENCHMARK(BM_TrainForest)->Arg(200)->Arg(400)->Unit(benchmark::kMillisecond);

void BM_ForestPredict(benchmark::State& state) {
  const TrainingFixture data(400, 24);
  const auto model = train_forest(data.x, data.y, {}, 7);
  std::size_t i = 0;
  for (auto _ : state) {
    benchmark::DoNotOptimize(model.predict(data.x[i]));
    i = (i + 1) % data.x.size();
  }
}
BENCHMARK(BM_ForestPredict);

}  // namespace

BENCHMARK_MAIN();
