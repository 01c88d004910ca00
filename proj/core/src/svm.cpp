#include "rtclass/svm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rtclass/rng.hpp"

namespace rtclass {

double SvmModel::decision(int cls, std::span<const double> x) const {
  const auto& m = machines[static_cast<std::size_t>(cls)];
  double z = m.b;
  for (std::size_t i = 0; i < m.w.size(); ++i) z += m.w[i] * x[i];
  return z;
}

int SvmModel::predict(std::span<const double> x) const {
  int best = 0;
  double best_z = decision(0, x);
  for (int c = 1; c < n_classes; ++c) {
    const double z = decision(c, x);
    if (z > best_z) {
      best_z = z;
      best = c;
    }
  }
  return best;
}

std::vector<int> SvmModel::predict(const std::vector<std::vector<double>>& x) const {
  std::vector<int> out;
  out.reserve(x.size());
  for (const auto& row : x) out.push_back(predict(row));
  return out;
}

namespace {

/// Pegasos on the hinge loss: step size 1/(lambda*t), margin-violation
/// update, then projection onto the ball of radius 1/sqrt(lambda). The bias
/// is updated with the subgradient but kept out of the regularizer.
BinarySvm train_binary(const std::vector<std::vector<double>>& x,
                       const std::vector<int>& y, int positive_class,
                       const SvmConfig& config, std::uint64_t seed) {
  const std::size_t n = x.size();
  const std::size_t d = x.front().size();
  BinarySvm m;
  m.w.assign(d, 0.0);

  Rng rng(seed);
  const double inv_sqrt_lambda = 1.0 / std::sqrt(config.lambda);
  const long long steps = static_cast<long long>(config.epochs) * static_cast<long long>(n);
  for (long long t = 1; t <= steps; ++t) {
    const std::size_t i = rng.next_index(n);
    const double yi = y[i] == positive_class ? 1.0 : -1.0;
    const double eta = 1.0 / (config.lambda * static_cast<double>(t));

    double margin = m.b;
    for (std::size_t f = 0; f < d; ++f) margin += m.w[f] * x[i][f];
    margin *= yi;

    const double shrink = 1.0 - eta * config.lambda;
    for (double& wf : m.w) wf *= shrink;
    if (margin < 1.0) {
      for (std::size_t f = 0; f < d; ++f) m.w[f] += eta * yi * x[i][f];
      m.b += eta * yi;
    }

    double norm_sq = 0.0;
    for (double wf : m.w) norm_sq += wf * wf;
    if (norm_sq > inv_sqrt_lambda * inv_sqrt_lambda) {
      const double scale = inv_sqrt_lambda / std::sqrt(norm_sq);
      for (double& wf : m.w) wf *= scale;
    }
  }
  return m;
}

}  // namespace

SvmModel train_svm(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                   const SvmConfig& config, std::uint64_t seed) {
  if (x.empty() || x.size() != y.size())
    throw std::invalid_argument("train_svm: empty or mismatched inputs");
  if (config.lambda <= 0.0) throw std::invalid_argument("train_svm: lambda must be > 0");
  const std::size_t d = x.front().size();
  int n_classes = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].size() != d) throw std::invalid_argument("train_svm: ragged matrix");
    for (double v : x[i])
      if (std::isnan(v)) throw std::invalid_argument("train_svm: NaN in features");
    n_classes = std::max(n_classes, y[i] + 1);
  }
  {
    std::vector<bool> seen(static_cast<std::size_t>(n_classes), false);
    for (int label : y) seen[static_cast<std::size_t>(label)] = true;
    if (std::count(seen.begin(), seen.end(), true) < 2)
      throw std::invalid_argument("train_svm: need at least 2 classes");
  }

  SvmModel model;
  model.n_features = static_cast<int>(d);
  model.n_classes = n_classes;
  model.config = config;
  model.seed = seed;
  for (int c = 0; c < n_classes; ++c)
    model.machines.push_back(
        train_binary(x, y, c, config, derive_seed(seed, "svm/class" + std::to_string(c))));
  return model;
}

}  // namespace rtclass
