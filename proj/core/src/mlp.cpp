#include "rtclass/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "rtclass/rng.hpp"

namespace rtclass {

namespace {

void forward(const MlpModel& m, std::span<const double> x, std::vector<double>& hidden,
             std::vector<double>& logits) {
  hidden.resize(static_cast<std::size_t>(m.n_hidden));
  for (int j = 0; j < m.n_hidden; ++j) {
    double a = m.b1[static_cast<std::size_t>(j)];
    const double* row = &m.w1[static_cast<std::size_t>(j) * static_cast<std::size_t>(m.n_inputs)];
    for (int i = 0; i < m.n_inputs; ++i) a += row[i] * x[static_cast<std::size_t>(i)];
    hidden[static_cast<std::size_t>(j)] = 1.0 / (1.0 + std::exp(-a));
  }
  logits.resize(static_cast<std::size_t>(m.n_classes));
  for (int c = 0; c < m.n_classes; ++c) {
    double z = m.b2[static_cast<std::size_t>(c)];
    const double* row = &m.w2[static_cast<std::size_t>(c) * static_cast<std::size_t>(m.n_hidden)];
    for (int j = 0; j < m.n_hidden; ++j) z += row[j] * hidden[static_cast<std::size_t>(j)];
    logits[static_cast<std::size_t>(c)] = z;
  }
}

void softmax_inplace(std::vector<double>& z) {
  const double zmax = *std::max_element(z.begin(), z.end());
  double sum = 0.0;
  for (double& v : z) {
    v = std::exp(v - zmax);
    sum += v;
  }
  for (double& v : z) v /= sum;
}

void check_training_inputs(const std::vector<std::vector<double>>& x,
                           const std::vector<int>& y, int& n_classes) {
  if (x.empty() || x.size() != y.size())
    throw std::invalid_argument("train_mlp: empty or mismatched inputs");
  const std::size_t d = x.front().size();
  n_classes = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (x[i].size() != d) throw std::invalid_argument("train_mlp: ragged matrix");
    for (double v : x[i])
      if (std::isnan(v)) throw std::invalid_argument("train_mlp: NaN in features");
    n_classes = std::max(n_classes, y[i] + 1);
  }
  std::vector<bool> seen(static_cast<std::size_t>(n_classes), false);
  for (int label : y) seen[static_cast<std::size_t>(label)] = true;
  if (std::count(seen.begin(), seen.end(), true) < 2)
    throw std::invalid_argument("train_mlp: need at least 2 classes");
}

}  // namespace

std::vector<double> MlpModel::logits(std::span<const double> x) const {
  std::vector<double> hidden, z;
  forward(*this, x, hidden, z);
  return z;
}

int MlpModel::predict(std::span<const double> x) const {
  const auto z = logits(x);
  int best = 0;
  for (std::size_t c = 1; c < z.size(); ++c)
    if (z[c] > z[static_cast<std::size_t>(best)]) best = static_cast<int>(c);
  return best;
}

std::vector<int> MlpModel::predict(const std::vector<std::vector<double>>& x) const {
  std::vector<int> out;
  out.reserve(x.size());
  for (const auto& row : x) out.push_back(predict(row));
  return out;
}

std::vector<double> MlpModel::flatten() const {
  std::vector<double> p;
  p.reserve(w1.size() + b1.size() + w2.size() + b2.size());
  p.insert(p.end(), w1.begin(), w1.end());
  p.insert(p.end(), b1.begin(), b1.end());
  p.insert(p.end(), w2.begin(), w2.end());
  p.insert(p.end(), b2.begin(), b2.end());
  return p;
}

void MlpModel::unflatten(std::span<const double> params) {
  std::size_t off = 0;
  auto take = [&](std::vector<double>& dst) {
    std::copy(params.begin() + static_cast<std::ptrdiff_t>(off),
              params.begin() + static_cast<std::ptrdiff_t>(off + dst.size()), dst.begin());
    off += dst.size();
  };
  take(w1);
  take(b1);
  take(w2);
  take(b2);
}

double mlp_loss(const MlpModel& model, const std::vector<std::vector<double>>& x,
                const std::vector<int>& y) {
  std::vector<double> hidden, z;
  double loss = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    forward(model, x[i], hidden, z);
    softmax_inplace(z);
    loss -= std::log(std::max(z[static_cast<std::size_t>(y[i])], 1e-300));
  }
  return loss / static_cast<double>(x.size());
}

std::vector<double> mlp_gradient(const MlpModel& model,
                                 const std::vector<std::vector<double>>& x,
                                 const std::vector<int>& y) {
  const auto d = static_cast<std::size_t>(model.n_inputs);
  const auto h = static_cast<std::size_t>(model.n_hidden);
  const auto c = static_cast<std::size_t>(model.n_classes);
  std::vector<double> gw1(h * d, 0.0), gb1(h, 0.0), gw2(c * h, 0.0), gb2(c, 0.0);
  std::vector<double> hidden, z, dz(c), dh(h);
  const double inv_n = 1.0 / static_cast<double>(x.size());

  for (std::size_t i = 0; i < x.size(); ++i) {
    forward(model, x[i], hidden, z);
    softmax_inplace(z);
    for (std::size_t k = 0; k < c; ++k)
      dz[k] = (z[k] - (static_cast<int>(k) == y[i] ? 1.0 : 0.0)) * inv_n;

    for (std::size_t k = 0; k < c; ++k) {
      gb2[k] += dz[k];
      for (std::size_t j = 0; j < h; ++j) gw2[k * h + j] += dz[k] * hidden[j];
    }
    for (std::size_t j = 0; j < h; ++j) {
      double acc = 0.0;
      for (std::size_t k = 0; k < c; ++k) acc += model.w2[k * h + j] * dz[k];
      dh[j] = acc * hidden[j] * (1.0 - hidden[j]);
    }
    for (std::size_t j = 0; j < h; ++j) {
      gb1[j] += dh[j];
      for (std::size_t f = 0; f < d; ++f) gw1[j * d + f] += dh[j] * x[i][f];
    }
  }

  std::vector<double> g;
  g.reserve(gw1.size() + gb1.size() + gw2.size() + gb2.size());
  g.insert(g.end(), gw1.begin(), gw1.end());
  g.insert(g.end(), gb1.begin(), gb1.end());
  g.insert(g.end(), gw2.begin(), gw2.end());
  g.insert(g.end(), gb2.begin(), gb2.end());
  return g;
}

MlpModel init_mlp(int n_inputs, int n_classes, const MlpConfig& config,
                  std::uint64_t seed) {
  MlpModel m;
  m.n_inputs = n_inputs;
  m.n_classes = n_classes;
  m.n_hidden = config.hidden > 0
                   ? config.hidden
                   : (n_inputs + n_classes + 1) / 2;  // ceil((d + c) / 2)
  m.config = config;
  m.seed = seed;
  const auto d = static_cast<std::size_t>(n_inputs);
  const auto h = static_cast<std::size_t>(m.n_hidden);
  const auto c = static_cast<std::size_t>(n_classes);
  m.w1.resize(h * d);
  m.b1.resize(h);
  m.w2.resize(c * h);
  m.b2.resize(c);

  Rng rng(derive_seed(seed, "mlp/init"));
  for (auto* vec : {&m.w1, &m.b1, &m.w2, &m.b2})
    for (double& v : *vec) v = rng.next_uniform(-0.5, 0.5);
  return m;
}

MlpModel train_mlp(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                   const MlpConfig& config, std::uint64_t seed) {
  int n_classes = 0;
  check_training_inputs(x, y, n_classes);
  MlpModel m = init_mlp(static_cast<int>(x.front().size()), n_classes, config, seed);

  std::vector<double> params = m.flatten();
  for (int epoch = 0; epoch < config.epochs; ++epoch) {
    const auto grad = mlp_gradient(m, x, y);
    for (std::size_t i = 0; i < params.size(); ++i)
      params[i] -= config.learning_rate * grad[i];
    m.unflatten(params);
  }
  return m;
}

}  // namespace rtclass
