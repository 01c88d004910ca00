// Independent brute-force oracles for the test suites. Everything here is a
// direct transcription of a definition, kept free of the library's
// implementation paths so the two sides can disagree.
#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace oracle {

inline double quantile(std::vector<double> v, double p) {
  std::sort(v.begin(), v.end());
  const double pos = p * static_cast<double>(v.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(std::floor(pos));
  const std::size_t hi = static_cast<std::size_t>(std::ceil(pos));
  return v[lo] + (pos - static_cast<double>(lo)) * (v[hi] - v[lo]);
}

inline double mean(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

inline double central_moment(const std::vector<double>& v, int k) {
  const double m = mean(v);
  double s = 0.0;
  for (double x : v) s += std::pow(x - m, k);
  return s / static_cast<double>(v.size());
}

/// All 24 features, straight from their definitions.
inline std::map<std::string, double> features(const std::vector<double>& v) {
  const auto n = static_cast<double>(v.size());
  std::map<std::string, double> f;
  f["min"] = *std::min_element(v.begin(), v.end());
  f["max"] = *std::max_element(v.begin(), v.end());
  f["range"] = f["max"] - f["min"];
  f["mean"] = mean(v);
  f["median"] = quantile(v, 0.5);

  const double m2 = central_moment(v, 2);
  const double m3 = central_moment(v, 3);
  const double m4 = central_moment(v, 4);
  f["var"] = m2;
  f["std"] = std::sqrt(m2);
  f["sem"] = std::sqrt(m2 * n / (n - 1.0)) / std::sqrt(n);

  std::vector<double> dev;
  for (double x : v) dev.push_back(std::abs(x - f["median"]));
  f["mad"] = quantile(dev, 0.5);

  f["q05"] = quantile(v, 0.05);
  f["q25"] = quantile(v, 0.25);
  f["q75"] = quantile(v, 0.75);
  f["q95"] = quantile(v, 0.95);
  f["iqr"] = f["q75"] - f["q25"];

  f["skewness"] = m2 > 0.0 ? m3 / std::pow(m2, 1.5) : 0.0;
  f["kurtosis"] = m2 > 0.0 ? m4 / (m2 * m2) - 3.0 : 0.0;

  f["kstat1"] = f["mean"];
  f["kstat2"] = n * m2 / (n - 1.0);
  f["kstat3"] = n * n * m3 / ((n - 1.0) * (n - 2.0));
  f["kstat4"] = n * n * ((n + 1.0) * m4 - 3.0 * (n - 1.0) * m2 * m2) /
                ((n - 1.0) * (n - 2.0) * (n - 3.0));

  std::vector<double> sorted(v);
  std::sort(sorted.begin(), sorted.end());
  const auto g = static_cast<std::size_t>(std::floor(0.1 * n));
  std::vector<double> trimmed(sorted.begin() + static_cast<std::ptrdiff_t>(g),
                              sorted.end() - static_cast<std::ptrdiff_t>(g));
  f["tmean"] = mean(trimmed);
  double tss = 0.0;
  for (double x : trimmed) tss += (x - f["tmean"]) * (x - f["tmean"]);
  f["tvar"] = tss / static_cast<double>(trimmed.size() - 1);

  double sq = 0.0;
  for (double x : v) sq += x * x;
  f["energy"] = sq / n;
  f["rms"] = std::sqrt(sq / n);
  return f;
}

/// Truncated normalized Gaussian taps k(i) = exp(-i^2 / 2 sigma^2) / Z.
inline std::vector<double> gaussian_kernel(double sigma, int radius) {
  std::vector<double> k;
  double z = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    k.push_back(std::exp(-(static_cast<double>(i) * i) / (2.0 * sigma * sigma)));
    z += k.back();
  }
  for (double& x : k) x /= z;
  return k;
}

/// Exhaustive best window offset: maximize the window sum of |x - median(x)|,
/// ties to the offset closest to center, then lowest.
inline std::size_t best_window_offset(const std::vector<double>& x, std::size_t w) {
  std::vector<double> sorted(x);
  std::sort(sorted.begin(), sorted.end());
  const std::size_t n = x.size();
  const double med = n % 2 ? sorted[n / 2] : 0.5 * (sorted[n / 2 - 1] + sorted[n / 2]);

  const std::size_t centered = (n - w) / 2;
  std::size_t best = 0, best_dist = n;
  double best_score = -1.0;
  for (std::size_t o = 0; o + w <= n; ++o) {
    double s = 0.0;
    for (std::size_t i = o; i < o + w; ++i) s += std::abs(x[i] - med);
    const std::size_t dist = o > centered ? o - centered : centered - o;
    if (s > best_score || (s == best_score && dist < best_dist)) {
      best_score = s;
      best_dist = dist;
      best = o;
    }
  }
  return best;
}

struct Metrics {
  double accuracy, precision, recall, fscore;  // percent
};

/// Confusion-matrix metrics from their definitions, macro averaged.
inline Metrics metrics(const std::vector<int>& truth, const std::vector<int>& pred,
                       int n_classes) {
  std::vector<std::vector<int>> cm(static_cast<std::size_t>(n_classes),
                                   std::vector<int>(static_cast<std::size_t>(n_classes), 0));
  int correct = 0;
  for (std::size_t i = 0; i < truth.size(); ++i) {
    ++cm[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(pred[i])];
    if (truth[i] == pred[i]) ++correct;
  }
  double psum = 0.0, rsum = 0.0, fsum = 0.0;
  for (int c = 0; c < n_classes; ++c) {
    const auto cu = static_cast<std::size_t>(c);
    int tp = cm[cu][cu], fp = 0, fn = 0;
    for (int o = 0; o < n_classes; ++o) {
      if (o == c) continue;
      fp += cm[static_cast<std::size_t>(o)][cu];
      fn += cm[cu][static_cast<std::size_t>(o)];
    }
    const double p = tp + fp > 0 ? static_cast<double>(tp) / (tp + fp) : 0.0;
    const double r = tp + fn > 0 ? static_cast<double>(tp) / (tp + fn) : 0.0;
    psum += p;
    rsum += r;
    fsum += p + r > 0.0 ? 2.0 * p * r / (p + r) : 0.0;
  }
  const double cd = n_classes;
  return {100.0 * correct / static_cast<double>(truth.size()), 100.0 * psum / cd,
          100.0 * rsum / cd, 100.0 * fsum / cd};
}

/// Central finite differences of f at x with step eps.
template <typename F>
std::vector<double> finite_difference(F&& f, std::vector<double> x, double eps) {
  std::vector<double> g(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) {
    const double orig = x[i];
    x[i] = orig + eps;
    const double hi = f(x);
    x[i] = orig - eps;
    const double lo = f(x);
    x[i] = orig;
    g[i] = (hi - lo) / (2.0 * eps);
  }
  return g;
}

}  // namespace oracle
