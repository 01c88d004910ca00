#pragma once

#include <string>
#include <vector>

#include "rtclass/forest.hpp"
#include "rtclass/mlp.hpp"

namespace rtclass {

/// Standalone procedural source for one trained model. The emitted text is
/// bit-exact for a fixed model and dialect.
struct ExportBundle {
  std::string source;
  std::string entry;  // exported symbol, always "predict"
  std::vector<std::string> feature_order;
  std::string dialect;
  std::string digest;  // fnv1a64 of the serialized model payload
};

const std::vector<std::string>& codegen_dialects();  // {"c99", "pseudo"}

/// One pure function per tree emitted as nested if/else on
/// features[i] <= threshold, plus a vote aggregator. No heap, no recursion
/// in the emitted code; thresholds printed as shortest round-trip decimals.
ExportBundle export_forest(const ForestModel& forest, const std::string& dialect,
                           const std::vector<std::string>& feature_order);

/// Constant weight tables plus an inference function (matmul, logistic,
/// argmax of logits; softmax is argmax-invariant and omitted).
ExportBundle export_mlp(const MlpModel& mlp, const std::string& dialect,
                        const std::vector<std::string>& feature_order);

}  // namespace rtclass
