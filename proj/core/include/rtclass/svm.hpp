#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rtclass {

struct SvmConfig {
  double lambda = 1e-3;  // L2 regularization strength
  int epochs = 50;       // passes over the data (epochs * n subgradient steps)
};

struct BinarySvm {
  std::vector<double> w;
  double b = 0.0;
};

/// One-vs-all set of linear classifiers trained with the Pegasos
/// stochastic subgradient schedule.
struct SvmModel {
  std::vector<BinarySvm> machines;  // one per class
  int n_features = 0;
  int n_classes = 0;
  SvmConfig config;
  std::uint64_t seed = 0;

  double decision(int cls, std::span<const double> x) const;
  /// argmax of decision values; ties to the lowest class index.
  int predict(std::span<const double> x) const;
  std::vector<int> predict(const std::vector<std::vector<double>>& x) const;
};

SvmModel train_svm(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                   const SvmConfig& config, std::uint64_t seed);

}  // namespace rtclass
