#include "rtclass/crossval.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <memory>
#include <stdexcept>

#include "rtclass/rng.hpp"

namespace rtclass {

std::string to_string(ModelFamily m) {
  switch (m) {
    case ModelFamily::Ann: return "ann";
    case ModelFamily::Rf: return "rf";
    case ModelFamily::Svm: return "svm";
  }
  return "?";
}

std::optional<ModelFamily> parse_model_family(const std::string& s) {
  if (s == "ann") return ModelFamily::Ann;
  if (s == "rf") return ModelFamily::Rf;
  if (s == "svm") return ModelFamily::Svm;
  return std::nullopt;
}

CvSplit stratified_kfold(const std::vector<int>& labels, int k, std::uint64_t seed) {
  if (k < 2) throw std::invalid_argument("stratified_kfold: k must be >= 2");
  if (labels.empty()) throw std::invalid_argument("stratified_kfold: no samples");

  std::map<int, std::vector<std::size_t>> by_class;
  for (std::size_t i = 0; i < labels.size(); ++i) by_class[labels[i]].push_back(i);
  for (const auto& [cls, idx] : by_class)
    if (idx.size() < static_cast<std::size_t>(k))
      throw std::invalid_argument("stratified_kfold: class " + std::to_string(cls) +
                                  " has " + std::to_string(idx.size()) +
                                  " samples, fewer than k=" + std::to_string(k));

  CvSplit split;
  split.seed = seed;
  split.folds.assign(static_cast<std::size_t>(k), {});
  for (auto& [cls, idx] : by_class) {
    Rng rng(derive_seed(seed, "kfold/class" + std::to_string(cls)));
    rng.shuffle(idx);
    for (std::size_t i = 0; i < idx.size(); ++i)
      split.folds[i % static_cast<std::size_t>(k)].push_back(idx[i]);
  }
  for (auto& fold : split.folds) std::sort(fold.begin(), fold.end());
  return split;
}

ConfusionMatrix confusion_matrix(std::span<const int> truth, std::span<const int> predicted,
                                 int n_classes) {
  if (truth.size() != predicted.size())
    throw std::invalid_argument("confusion_matrix: size mismatch");
  ConfusionMatrix cm(static_cast<std::size_t>(n_classes),
                     std::vector<int>(static_cast<std::size_t>(n_classes), 0));
  for (std::size_t i = 0; i < truth.size(); ++i)
    ++cm[static_cast<std::size_t>(truth[i])][static_cast<std::size_t>(predicted[i])];
  return cm;
}

Scores scores_from_confusion(const ConfusionMatrix& cm) {
  const std::size_t c = cm.size();
  long long total = 0, correct = 0;
  for (std::size_t i = 0; i < c; ++i)
    for (std::size_t j = 0; j < c; ++j) {
      total += cm[i][j];
      if (i == j) correct += cm[i][j];
    }

  Scores s;
  if (total == 0) return s;
  s.accuracy = 100.0 * static_cast<double>(correct) / static_cast<double>(total);

  double prec_sum = 0.0, rec_sum = 0.0, f1_sum = 0.0;
  for (std::size_t i = 0; i < c; ++i) {
    long long row = 0, col = 0;
    for (std::size_t j = 0; j < c; ++j) {
      row += cm[i][j];
      col += cm[j][i];
    }
    const double tp = static_cast<double>(cm[i][i]);
    const double prec = col > 0 ? tp / static_cast<double>(col) : 0.0;
    const double rec = row > 0 ? tp / static_cast<double>(row) : 0.0;
    prec_sum += prec;
    rec_sum += rec;
    f1_sum += prec + rec > 0.0 ? 2.0 * prec * rec / (prec + rec) : 0.0;
  }
  const auto cd = static_cast<double>(c);
  s.precision = 100.0 * prec_sum / cd;
  s.recall = 100.0 * rec_sum / cd;
  s.fscore = 100.0 * f1_sum / cd;
  return s;
}

namespace {

double mean_of(const std::vector<double>& v) {
  double s = 0.0;
  for (double x : v) s += x;
  return s / static_cast<double>(v.size());
}

double sample_std(const std::vector<double>& v, double mean) {
  if (v.size() < 2) return 0.0;
  double ss = 0.0;
  for (double x : v) ss += (x - mean) * (x - mean);
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

}  // namespace

EvalReport evaluate_with(const std::vector<std::vector<double>>& x,
                         const std::vector<int>& y,
                         const std::vector<std::string>& class_names,
                         const Trainer& trainer, int k, std::uint64_t seed,
                         const std::string& model_name, const std::string& parameter,
                         const std::string& filter) {
  if (x.size() != y.size()) throw std::invalid_argument("evaluate: size mismatch");
  const auto split = stratified_kfold(y, k, derive_seed(seed, "cv"));
  const int n_classes = static_cast<int>(class_names.size());

  EvalReport report;
  report.model = model_name;
  report.parameter = parameter;
  report.filter = filter;
  report.k = k;
  report.seed = seed;
  report.classes = class_names;

  for (std::size_t fold = 0; fold < split.folds.size(); ++fold) {
    std::vector<std::vector<double>> x_train;
    std::vector<int> y_train;
    std::vector<bool> held(x.size(), false);
    for (std::size_t i : split.folds[fold]) held[i] = true;
    for (std::size_t i = 0; i < x.size(); ++i) {
      if (!held[i]) {
        x_train.push_back(x[i]);
        y_train.push_back(y[i]);
      }
    }

    const auto predictor =
        trainer(x_train, y_train, derive_seed(seed, "fold/" + std::to_string(fold)));

    std::vector<int> truth, pred;
    truth.reserve(split.folds[fold].size());
    for (std::size_t i : split.folds[fold]) {
      truth.push_back(y[i]);
      pred.push_back(predictor(x[i]));
    }
    auto cm = confusion_matrix(truth, pred, n_classes);
    report.folds.push_back(scores_from_confusion(cm));
    report.confusions.push_back(std::move(cm));
  }

  auto collect = [&](double Scores::* field) {
    std::vector<double> v;
    v.reserve(report.folds.size());
    for (const auto& f : report.folds) v.push_back(f.*field);
    return v;
  };
  for (auto field : {&Scores::accuracy, &Scores::precision, &Scores::recall, &Scores::fscore}) {
    const auto v = collect(field);
    report.mean.*field = mean_of(v);
    report.stddev.*field = sample_std(v, report.mean.*field);
  }
  return report;
}

Trainer make_trainer(ModelFamily family, const LearnConfig& config) {
  switch (family) {
    case ModelFamily::Rf:
      return [config](const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                      std::uint64_t seed) -> Predictor {
        auto model = std::make_shared<ForestModel>(train_forest(x, y, config.forest, seed));
        return [model](std::span<const double> row) { return model->predict(row); };
      };
    case ModelFamily::Svm:
      return [config](const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                      std::uint64_t seed) -> Predictor {
        auto model = std::make_shared<SvmModel>(train_svm(x, y, config.svm, seed));
        return [model](std::span<const double> row) { return model->predict(row); };
      };
    case ModelFamily::Ann:
      return [config](const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                      std::uint64_t seed) -> Predictor {
        auto model = std::make_shared<MlpModel>(train_mlp(x, y, config.mlp, seed));
        return [model](std::span<const double> row) { return model->predict(row); };
      };
  }
  throw std::invalid_argument("unknown model family");
}

EvalReport evaluate(const std::vector<std::vector<double>>& x, const std::vector<int>& y,
                    const std::vector<std::string>& class_names, ModelFamily family,
                    const LearnConfig& config, int k, std::uint64_t seed,
                    const std::string& parameter, const std::string& filter) {
  return evaluate_with(x, y, class_names, make_trainer(family, config), k, seed,
                       to_string(family), parameter, filter);
}

}  // namespace rtclass
