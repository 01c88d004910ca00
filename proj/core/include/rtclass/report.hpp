#pragma once

#include <string>
#include <vector>

#include "rtclass/analysis.hpp"
#include "rtclass/crossval.hpp"

namespace rtclass {

/// "mean±std" with two decimals and trailing zeros stripped, the way the
/// results tables print scores ("100±0", "99.83±0.26").
std::string format_score(double mean, double stddev);

/// Full report as deterministic JSON (fixed key order, shortest round-trip
/// decimals).
std::string report_json(const EvalReport& report);

/// Fixed-width text table: one row per score, "Value [%]" and "Param."
/// columns.
std::string report_table(const EvalReport& report);

/// Same layout for a best-cell sweep, where each score row names the
/// (parameter, filter) cell that maximized it.
std::string best_cells_table(const std::string& model, const std::vector<BestCell>& cells);

std::string ranking_csv(const std::vector<ParamRank>& ranks);
std::string group_accuracy_csv(const std::vector<GroupAccuracy>& groups,
                               const std::vector<ModelFamily>& families);
std::string importance_csv(const std::map<std::string, double>& importances);

}  // namespace rtclass
