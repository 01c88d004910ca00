#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "rtclass/crossval.hpp"
#include "rtclass/features.hpp"
#include "rtclass/io.hpp"

namespace rtclass {

struct ParamRank {
  std::string parameter;
  std::string filter;      // best filter for this parameter
  double mean_accuracy = 0.0;
};

/// Evaluate every (parameter, filter) cell with k-fold CV, keep the best
/// filter per parameter, and sort by mean accuracy descending (ties by
/// parameter name).
std::vector<ParamRank> rank_parameters(const Dataset& dataset, ModelFamily family,
                                       const std::vector<std::string>& parameters,
                                       const std::vector<std::string>& filters,
                                       const LearnConfig& config, int k,
                                       std::uint64_t seed);

struct GroupAccuracy {
  std::string group;                 // "G1".."G8"
  std::vector<double> accuracy;      // one entry per requested model family
};

/// Mean CV accuracy per subcarrier group G1..G8 for each model family.
/// CSI datasets only.
std::vector<GroupAccuracy> subcarrier_group_accuracy(
    const Dataset& dataset, const std::vector<ModelFamily>& families,
    const LearnConfig& config, int k, std::uint64_t seed,
    const std::string& filter = "f0");

/// Per-score-row best (parameter, filter) cell, mirroring the results-table
/// layout where each score names the parameter that maximized it.
struct BestCell {
  std::string score;      // "Accuracy" | "Precision" | "Recall" | "F-Score"
  double mean = 0.0;
  double stddev = 0.0;
  std::string parameter;
  std::string filter;
};

std::vector<BestCell> best_cells(const Dataset& dataset, ModelFamily family,
                                 const std::vector<std::string>& parameters,
                                 const std::vector<std::string>& filters,
                                 const LearnConfig& config, int k, std::uint64_t seed);

}  // namespace rtclass
