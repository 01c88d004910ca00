#include "rtclass/analysis.hpp"

#include <algorithm>
#include <stdexcept>

namespace rtclass {

namespace {

std::vector<std::string> class_names_of(const FeatureMatrix& m) {
  std::vector<std::string> names;
  names.reserve(m.classes.size());
  for (Label l : m.classes) names.push_back(to_string(l));
  return names;
}

}  // namespace

std::vector<ParamRank> rank_parameters(const Dataset& dataset, ModelFamily family,
                                       const std::vector<std::string>& parameters,
                                       const std::vector<std::string>& filters,
                                       const LearnConfig& config, int k,
                                       std::uint64_t seed) {
  if (parameters.empty()) return {};
  std::vector<ParamRank> ranks;
  for (const auto& param : parameters) {
    ParamRank best{param, "", -1.0};
    for (const auto& filter : filters) {
      const auto m = featurize_dataset(dataset, param, filter);
      const auto report =
          evaluate(m.x(), m.labels, class_names_of(m), family, config, k, seed, param, filter);
      if (report.mean.accuracy > best.mean_accuracy) {
        best.mean_accuracy = report.mean.accuracy;
        best.filter = filter;
      }
    }
    ranks.push_back(std::move(best));
  }
  std::sort(ranks.begin(), ranks.end(), [](const ParamRank& a, const ParamRank& b) {
    if (a.mean_accuracy != b.mean_accuracy) return a.mean_accuracy > b.mean_accuracy;
    return a.parameter < b.parameter;
  });
  return ranks;
}

std::vector<GroupAccuracy> subcarrier_group_accuracy(
    const Dataset& dataset, const std::vector<ModelFamily>& families,
    const LearnConfig& config, int k, std::uint64_t seed, const std::string& filter) {
  for (const auto& trace : dataset.traces)
    if (trace.tech() != Tech::WlanCsi)
      throw std::invalid_argument("subcarrier_group_accuracy: CSI dataset required");

  std::vector<GroupAccuracy> out;
  if (families.empty()) return out;
  for (int g = 1; g <= 8; ++g) {
    GroupAccuracy row;
    row.group = "G" + std::to_string(g);
    const auto m = featurize_dataset(dataset, row.group, filter);
    for (ModelFamily family : families) {
      const auto report = evaluate(m.x(), m.labels, class_names_of(m), family, config, k,
                                   seed, row.group, filter);
      row.accuracy.push_back(report.mean.accuracy);
    }
    out.push_back(std::move(row));
  }
  return out;
}

std::vector<BestCell> best_cells(const Dataset& dataset, ModelFamily family,
                                 const std::vector<std::string>& parameters,
                                 const std::vector<std::string>& filters,
                                 const LearnConfig& config, int k, std::uint64_t seed) {
  struct Cell {
    EvalReport report;
  };
  std::vector<Cell> cells;
  for (const auto& param : parameters)
    for (const auto& filter : filters) {
      const auto m = featurize_dataset(dataset, param, filter);
      cells.push_back({evaluate(m.x(), m.labels, class_names_of(m), family, config, k,
                                seed, param, filter)});
    }

  const struct {
    const char* name;
    double Scores::* field;
  } score_fields[] = {{"Accuracy", &Scores::accuracy},
                      {"Precision", &Scores::precision},
                      {"Recall", &Scores::recall},
                      {"F-Score", &Scores::fscore}};

  std::vector<BestCell> out;
  for (const auto& sf : score_fields) {
    const Cell* best = nullptr;
    for (const auto& cell : cells) {
      if (!best || cell.report.mean.*(sf.field) > best->report.mean.*(sf.field))
        best = &cell;
    }
    out.push_back({sf.name, best->report.mean.*(sf.field), best->report.stddev.*(sf.field),
                   best->report.parameter, best->report.filter});
  }
  return out;
}

}  // namespace rtclass
