#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rtclass/forest.hpp"
#include "rtclass/mlp.hpp"
#include "rtclass/svm.hpp"

namespace rtclass {

enum class ModelFamily { Ann, Rf, Svm };
std::string to_string(ModelFamily m);
std::optional<ModelFamily> parse_model_family(const std::string& s);

struct CvSplit {
  std::vector<std::vector<std::size_t>> folds;
  std::uint64_t seed = 0;
};

/// Seeded stratified partition: folds are disjoint, cover every index, and
/// hold per-class counts within +-1 of each other.
CvSplit stratified_kfold(const std::vector<int>& labels, int k, std::uint64_t seed);

using ConfusionMatrix = std::vector<std::vector<int>>;  // [truth][predicted]

ConfusionMatrix confusion_matrix(std::span<const int> truth, std::span<const int> predicted,
                                 int n_classes);

/// Scores in percent. Precision/recall/F1 are macro-averaged with the 0/0 -> 0
/// convention per class; fscore is the mean of per-class F1 values.
struct Scores {
  double accuracy = 0.0;
  double precision = 0.0;
  double recall = 0.0;
  double fscore = 0.0;
};

Scores scores_from_confusion(const ConfusionMatrix& cm);

struct LearnConfig {
  ForestConfig forest;
  SvmConfig svm;
  MlpConfig mlp;
};

struct EvalReport {
  std::string model;      // "ann" | "rf" | "svm"
  std::string parameter;  // channel parameter the features came from
  std::string filter;     // smoothing grid name
  int k = 0;
  std::uint64_t seed = 0;
  std::vector<std::string> classes;
  std::vector<Scores> folds;             // percent, one entry per fold
  Scores mean;
  Scores stddev;                         // sample std over folds
  std::vector<ConfusionMatrix> confusions;
};

/// A trained predictor; the trainer owns whatever state it needs.
using Predictor = std::function<int(std::span<const double>)>;
using Trainer = std::function<Predictor(const std::vector<std::vector<double>>&,
                                        const std::vector<int>&, std::uint64_t)>;

/// k-fold evaluation with an arbitrary trainer: train on the k-1 fold
/// complement, test on the held-out fold, aggregate mean and sample std.
EvalReport evaluate_with(const std::vector<std::vector<double>>& x,
                         const std::vector<int>& y,
                         const std::vector<std::string>& class_names,
                         const Trainer& trainer, int k, std::uint64_t seed,
                         const std::string& model_name,
                         const std::string& parameter = "",
                         const std::string& filter = "");

Trainer make_trainer(ModelFamily family, const LearnConfig& config);

EvalReport evaluate(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                    const std::vector<std::string>& class_names, ModelFamily family,
                    const LearnConfig& config, int k, std::uint64_t seed,
                    const std::string& parameter = "", const std::string& filter = "");

}  // namespace rtclass
