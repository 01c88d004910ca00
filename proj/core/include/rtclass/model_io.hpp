#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include "rtclass/forest.hpp"
#include "rtclass/mlp.hpp"
#include "rtclass/svm.hpp"

namespace rtclass {

class IntegrityError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A trained model plus the context needed to apply it: class names by
/// index, the feature order its inputs use, and the pipeline settings it
/// was trained under.
struct SavedModel {
  std::string family;  // "rf" | "svm" | "ann"
  std::vector<std::string> classes;
  std::vector<std::string> feature_order;
  std::string parameter;
  std::string filter;
  std::uint64_t seed = 0;
  std::variant<ForestModel, SvmModel, MlpModel> model;

  int predict(std::span<const double> x) const;
};

std::uint64_t fnv1a64(std::string_view bytes);
std::string fnv1a64_hex(std::string_view bytes);

/// Canonical JSON payload of the model alone; the digest is computed over
/// these bytes.
std::string serialize_model_payload(const SavedModel& model);

/// Canonical serializations of bare models, used for export digests.
std::string serialize_forest_payload(const ForestModel& model);
std::string serialize_mlp_payload(const MlpModel& model);

std::string serialize_model(const SavedModel& model);
SavedModel parse_model(std::string_view bytes);  // throws IntegrityError on bad digest

void save_model(const std::filesystem::path& path, const SavedModel& model);
SavedModel load_model(const std::filesystem::path& path);

}  // namespace rtclass
