#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "rtclass/rng.hpp"
#include "rtclass/svm.hpp"

using namespace rtclass;

namespace {

double training_accuracy(const SvmModel& m, const std::vector<std::vector<double>>& x,
                         const std::vector<int>& y) {
  int correct = 0;
  for (std::size_t i = 0; i < x.size(); ++i)
    if (m.predict(x[i]) == y[i]) ++correct;
  return static_cast<double>(correct) / static_cast<double>(x.size());
}

double norm(const std::vector<double>& w) {
  double s = 0.0;
  for (double v : w) s += v * v;
  return std::sqrt(s);
}

}  // namespace

TEST_CASE("linearly separable 2-D set trains to 100%") {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  Rng rng(3);
  for (int i = 0; i < 60; ++i) {
    const int cls = i % 2;
    x.push_back({(cls ? 0.8 : 0.2) + 0.03 * rng.next_normal(),
                 (cls ? 0.7 : 0.3) + 0.03 * rng.next_normal()});
    y.push_back(cls);
  }
  const auto m = train_svm(x, y, {}, 42);
  CHECK(m.machines.size() == 2);
  CHECK(training_accuracy(m, x, y) == 1.0);
}

TEST_CASE("identical feature rows with mixed labels collapse to one class") {
  std::vector<std::vector<double>> x(20, {0.5, 0.5});
  std::vector<int> y;
  for (int i = 0; i < 20; ++i) y.push_back(i < 13 ? 0 : 1);  // 65% class 0
  const auto m = train_svm(x, y, {}, 7);

  const int fixed = m.predict(x[0]);
  for (const auto& row : x) CHECK(m.predict(row) == fixed);
  CHECK(training_accuracy(m, x, y) == doctest::Approx(std::max(13, 7) / 20.0));
}

TEST_CASE("weight norm shrinks with lambda and respects the Pegasos ball") {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  Rng rng(5);
  for (int i = 0; i < 80; ++i) {
    const int cls = i % 2;
    x.push_back({(cls ? 0.9 : 0.1) + 0.05 * rng.next_normal()});
    y.push_back(cls);
  }

  double prev = 1e300;
  for (double lambda : {1e-3, 1e-1, 10.0, 1e3}) {
    const auto m = train_svm(x, y, {.lambda = lambda, .epochs = 30}, 11);
    const double n = norm(m.machines[1].w);
    CHECK(n <= 1.0 / std::sqrt(lambda) + 1e-9);  // projection bound
    CHECK(n < prev);
    prev = n;
  }

  // at very large lambda the weights are near zero and bias drives the vote
  const auto m = train_svm(x, y, {.lambda = 1e6, .epochs = 30}, 11);
  CHECK(norm(m.machines[0].w) < 1e-2);
  CHECK(norm(m.machines[1].w) < 1e-2);
}

TEST_CASE("three-class one-vs-all picks the argmax, ties to lowest index") {
  SvmModel m;
  m.n_features = 1;
  m.n_classes = 3;
  m.machines = {{{0.0}, 1.0}, {{0.0}, 1.0}, {{0.0}, 0.5}};  // classes 0 and 1 tie
  CHECK(m.predict(std::vector<double>{0.3}) == 0);
}

TEST_CASE("one machine per class, weight length = feature count") {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  Rng rng(21);
  for (int i = 0; i < 30; ++i) {
    x.push_back({rng.next_double(), rng.next_double(), rng.next_double()});
    y.push_back(i % 3);
  }
  const auto m = train_svm(x, y, {}, 2);
  REQUIRE(m.machines.size() == 3);
  for (const auto& bm : m.machines) {
    CHECK(bm.w.size() == 3);
    CHECK(std::isfinite(bm.b));
    for (double w : bm.w) CHECK(std::isfinite(w));
  }
}

TEST_CASE("determinism and input validation") {
  std::vector<std::vector<double>> x;
  std::vector<int> y;
  Rng rng(9);
  for (int i = 0; i < 30; ++i) {
    x.push_back({rng.next_double(), rng.next_double()});
    y.push_back(i % 3);
  }
  const auto a = train_svm(x, y, {}, 123);
  const auto b = train_svm(x, y, {}, 123);
  for (int c = 0; c < 3; ++c) {
    CHECK(a.machines[c].w == b.machines[c].w);
    CHECK(a.machines[c].b == b.machines[c].b);
  }

  CHECK_THROWS_AS(train_svm(x, std::vector<int>(30, 0), {}, 1), std::invalid_argument);
  CHECK_THROWS_AS(train_svm(x, y, {.lambda = 0.0}, 1), std::invalid_argument);
}
