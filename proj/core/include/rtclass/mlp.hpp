#pragma once

#include <cstdint>
#include <span>
#include <vector>

namespace rtclass {

struct MlpConfig {
  int hidden = 0;             // 0 = ceil((d + c) / 2)
  double learning_rate = 0.5;
  int epochs = 800;           // full-batch gradient steps
};

/// One hidden layer, logistic activations, softmax output. Parameters are
/// stored row-major: w1 is hidden x input, w2 is classes x hidden.
struct MlpModel {
  int n_inputs = 0;
  int n_hidden = 0;
  int n_classes = 0;
  std::vector<double> w1, b1, w2, b2;
  MlpConfig config;
  std::uint64_t seed = 0;

  /// Pre-softmax output scores. The hidden/output loops run in a fixed
  /// order so exported code can reproduce them operation for operation.
  std::vector<double> logits(std::span<const double> x) const;
  /// argmax of logits (softmax is argmax-invariant); ties to lowest index.
  int predict(std::span<const double> x) const;
  std::vector<int> predict(const std::vector<std::vector<double>>& x) const;

  std::vector<double> flatten() const;          // w1, b1, w2, b2
  void unflatten(std::span<const double> params);
};

/// Mean cross-entropy of the model on (x, y).
double mlp_loss(const MlpModel& model, const std::vector<std::vector<double>>& x,
                const std::vector<int>& y);

/// Analytic gradient of mlp_loss in flatten() order.
std::vector<double> mlp_gradient(const MlpModel& model,
                                 const std::vector<std::vector<double>>& x,
                                 const std::vector<int>& y);

/// Seeded uniform(-0.5, 0.5) parameter init; no training steps taken.
MlpModel init_mlp(int n_inputs, int n_classes, const MlpConfig& config,
                  std::uint64_t seed);

/// Full-batch gradient descent on the cross-entropy for config.epochs steps.
MlpModel train_mlp(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                   const MlpConfig& config, std::uint64_t seed);

}  // namespace rtclass
