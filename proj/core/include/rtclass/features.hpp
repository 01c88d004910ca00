#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rtclass/io.hpp"
#include "rtclass/trace.hpp"

namespace rtclass {

inline constexpr std::size_t kFeatureCount = 24;

/// The fixed feature roster, in the order every vector and export uses.
const std::array<std::string, kFeatureCount>& feature_names();

/// Index of a feature name within the roster; -1 if unknown.
int feature_index(const std::string& name);

/// Descriptive statistics of one series. Requires length >= 4 (the order-4
/// k-statistic needs it) and finite input.
///
/// Conventions pinned here so oracles can reproduce every value:
///   quantiles   linear interpolation at rank (n-1)*p
///   std, var    population (divide by n)
///   sem         sample std / sqrt(n)
///   skew, kurt  biased moment estimators; 0 for zero-variance input
///   kstat1..4   unbiased cumulant estimators
///   tmean, tvar trimmed by floor(0.1*n) per tail; tvar uses ddof=1
///   energy      sum(x^2)/n
std::array<double, kFeatureCount> featurize(std::span<const double> series);

struct FeatureVector {
  std::string trace_id;
  std::string parameter;
  Label label = Label::Idle;
  std::array<double, kFeatureCount> values{};
};

struct FeatureMatrix {
  std::vector<std::array<double, kFeatureCount>> rows;
  std::vector<int> labels;          // indices into classes
  std::vector<Label> classes;       // ascending Label order
  std::vector<std::string> trace_ids;
  std::string parameter;
  std::string filter;

  /// Row-major copy for the classifiers.
  std::vector<std::vector<double>> x() const;
};

/// smooth -> scale -> featurize the named parameter of every trace, rows in
/// dataset order. Unknown parameter on any trace aborts with its trace id.
FeatureMatrix featurize_dataset(const Dataset& dataset, const std::string& parameter,
                                const std::string& filter_name);

/// CSV export: header `trace_id,label,<24 feature names>`.
std::string feature_matrix_csv(const FeatureMatrix& matrix);

}  // namespace rtclass
