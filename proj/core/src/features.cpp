#include "rtclass/features.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>

#include "rtclass/preprocess.hpp"

namespace rtclass {

namespace {

double quantile_sorted(const std::vector<double>& sorted, double p) {
  const double pos = static_cast<double>(sorted.size() - 1) * p;
  const auto lo = static_cast<std::size_t>(std::floor(pos));
  const auto hi = static_cast<std::size_t>(std::ceil(pos));
  if (lo == hi) return sorted[lo];
  return sorted[lo] + (pos - static_cast<double>(lo)) * (sorted[hi] - sorted[lo]);
}

std::string format_double(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

}  // namespace

const std::array<std::string, kFeatureCount>& feature_names() {
  static const std::array<std::string, kFeatureCount> names = {
      "min",   "max",   "range",    "mean",     "median", "std",    "var",    "sem",
      "mad",   "iqr",   "q05",      "q25",      "q75",    "q95",    "skewness",
      "kurtosis", "kstat1", "kstat2", "kstat3", "kstat4", "tmean",  "tvar",   "rms",
      "energy"};
  return names;
}

int feature_index(const std::string& name) {
  const auto& names = feature_names();
  for (std::size_t i = 0; i < names.size(); ++i)
    if (names[i] == name) return static_cast<int>(i);
  return -1;
}

std::array<double, kFeatureCount> featurize(std::span<const double> series) {
  const std::size_t n = series.size();
  if (n < 4) throw std::invalid_argument("featurize: need at least 4 samples");
  for (double v : series)
    if (!std::isfinite(v)) throw std::invalid_argument("featurize: non-finite input");

  const auto nd = static_cast<double>(n);
  std::vector<double> sorted(series.begin(), series.end());
  std::sort(sorted.begin(), sorted.end());

  double sum = 0.0, sum_sq = 0.0;
  for (double v : series) {
    sum += v;
    sum_sq += v * v;
  }
  const double mean = sum / nd;

  // central moments
  double m2 = 0.0, m3 = 0.0, m4 = 0.0;
  for (double v : series) {
    const double d = v - mean;
    const double d2 = d * d;
    m2 += d2;
    m3 += d2 * d;
    m4 += d2 * d2;
  }
  const double ss = m2;  // sum of squared deviations
  m2 /= nd;
  m3 /= nd;
  m4 /= nd;

  const double var_pop = m2;
  const double std_pop = std::sqrt(var_pop);
  const double std_sample = std::sqrt(ss / (nd - 1.0));
  const double sem = std_sample / std::sqrt(nd);

  const double median = quantile_sorted(sorted, 0.5);
  std::vector<double> abs_dev(n);
  for (std::size_t i = 0; i < n; ++i) abs_dev[i] = std::abs(sorted[i] - median);
  std::sort(abs_dev.begin(), abs_dev.end());
  const double mad = quantile_sorted(abs_dev, 0.5);

  const double q05 = quantile_sorted(sorted, 0.05);
  const double q25 = quantile_sorted(sorted, 0.25);
  const double q75 = quantile_sorted(sorted, 0.75);
  const double q95 = quantile_sorted(sorted, 0.95);

  const double skew = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  const double kurt = m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0;

  // unbiased cumulant estimators
  const double k1 = mean;
  const double k2 = ss / (nd - 1.0);
  const double k3 = nd * nd * m3 / ((nd - 1.0) * (nd - 2.0));
  const double k4 = nd * nd * ((nd + 1.0) * m4 - 3.0 * (nd - 1.0) * m2 * m2) /
                    ((nd - 1.0) * (nd - 2.0) * (nd - 3.0));

  // symmetric trim of floor(0.1*n) per tail
  const auto trim = static_cast<std::size_t>(std::floor(0.1 * nd));
  const std::size_t tn = n - 2 * trim;
  double tsum = 0.0;
  for (std::size_t i = trim; i < n - trim; ++i) tsum += sorted[i];
  const double tmean = tsum / static_cast<double>(tn);
  double tss = 0.0;
  for (std::size_t i = trim; i < n - trim; ++i) {
    const double d = sorted[i] - tmean;
    tss += d * d;
  }
  const double tvar = tss / static_cast<double>(tn - 1);

  const double energy = sum_sq / nd;
  const double rms = std::sqrt(energy);

  return {sorted.front(), sorted.back(), sorted.back() - sorted.front(),
          mean, median, std_pop, var_pop, sem,
          mad, q75 - q25, q05, q25, q75, q95, skew,
          kurt, k1, k2, k3, k4, tmean, tvar, rms, energy};
}

std::vector<std::vector<double>> FeatureMatrix::x() const {
  std::vector<std::vector<double>> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.emplace_back(r.begin(), r.end());
  return out;
}

FeatureMatrix featurize_dataset(const Dataset& dataset, const std::string& parameter,
                                const std::string& filter_name) {
  const auto sigma = filter_sigma(filter_name);
  if (!sigma) throw std::invalid_argument("unknown filter: " + filter_name);

  FeatureMatrix m;
  m.parameter = parameter;
  m.filter = filter_name;
  for (const auto& [label, count] : dataset.class_counts) m.classes.push_back(label);

  for (const auto& trace : dataset.traces) {
    auto series = derive_parameter(trace, parameter);
    if (!series)
      throw std::invalid_argument("trace \"" + trace.id +
                                  "\" does not expose parameter \"" + parameter + "\"");
    auto smoothed = gaussian_smooth(series->values, *sigma);
    auto scaled = min_max_scale(smoothed);
    m.rows.push_back(featurize(scaled));
    m.trace_ids.push_back(trace.id);
    auto cls = std::find(m.classes.begin(), m.classes.end(), trace.label);
    m.labels.push_back(static_cast<int>(cls - m.classes.begin()));
  }
  return m;
}

std::string feature_matrix_csv(const FeatureMatrix& matrix) {
  std::string out = "trace_id,label";
  for (const auto& name : feature_names()) out += "," + name;
  out += '\n';
  for (std::size_t i = 0; i < matrix.rows.size(); ++i) {
    out += matrix.trace_ids[i] + "," +
           to_string(matrix.classes[static_cast<std::size_t>(matrix.labels[i])]);
    for (double v : matrix.rows[i]) out += "," + format_double(v);
    out += '\n';
  }
  return out;
}

}  // namespace rtclass
