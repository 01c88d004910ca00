#include "rtclass/report.hpp"

#include <algorithm>
#include <charconv>
#include <cstdio>

#include "json.hpp"

namespace rtclass {

namespace {

std::string shortest(double v) {
  char buf[32];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string strip_zeros(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  std::string s(buf);
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

std::string upper(std::string s) {
  std::transform(s.begin(), s.end(), s.begin(),
                 [](unsigned char c) { return static_cast<char>(std::toupper(c)); });
  return s;
}

std::string pad(std::string s, std::size_t width) {
  if (s.size() < width) s.append(width - s.size(), ' ');
  return s;
}

std::string param_cell(const std::string& parameter, const std::string& filter) {
  if (parameter.empty()) return "-";
  if (filter.empty()) return parameter;
  return parameter + " (" + filter + ")";
}

constexpr std::size_t kModelWidth = 7;
constexpr std::size_t kScoreWidth = 11;
constexpr std::size_t kValueWidth = 14;

std::string table_header() {
  std::string out = pad("Model", kModelWidth) + pad("Score", kScoreWidth) +
                    pad("Value [%]", kValueWidth) + "Param.\n";
  out += std::string(kModelWidth + kScoreWidth + kValueWidth + 6, '-') + '\n';
  return out;
}

}  // namespace

std::string format_score(double mean, double stddev) {
  return strip_zeros(mean) + "±" + strip_zeros(stddev);
}

std::string report_json(const EvalReport& report) {
  using ordered_json = nlohmann::ordered_json;
  ordered_json j;
  j["model"] = report.model;
  j["parameter"] = report.parameter;
  j["filter"] = report.filter;
  j["k"] = report.k;
  j["seed"] = report.seed;
  j["classes"] = report.classes;

  const struct {
    const char* name;
    double Scores::* field;
  } fields[] = {{"accuracy", &Scores::accuracy},
                {"precision", &Scores::precision},
                {"recall", &Scores::recall},
                {"fscore", &Scores::fscore}};
  ordered_json scores;
  for (const auto& f : fields) {
    ordered_json s;
    std::vector<double> per_fold;
    per_fold.reserve(report.folds.size());
    for (const auto& fold : report.folds) per_fold.push_back(fold.*(f.field));
    s["per_fold"] = per_fold;
    s["mean"] = report.mean.*(f.field);
    s["std"] = report.stddev.*(f.field);
    scores[f.name] = std::move(s);
  }
  j["scores"] = std::move(scores);
  j["confusions"] = report.confusions;
  return j.dump(2) + "\n";
}

std::string report_table(const EvalReport& report) {
  std::string out = table_header();
  const struct {
    const char* name;
    double Scores::* field;
  } fields[] = {{"Accuracy", &Scores::accuracy},
                {"Precision", &Scores::precision},
                {"Recall", &Scores::recall},
                {"F-Score", &Scores::fscore}};
  bool first = true;
  for (const auto& f : fields) {
    out += pad(first ? upper(report.model) : "", kModelWidth);
    out += pad(f.name, kScoreWidth);
    out += pad(format_score(report.mean.*(f.field), report.stddev.*(f.field)), kValueWidth);
    out += param_cell(report.parameter, report.filter);
    out += '\n';
    first = false;
  }
  return out;
}

std::string best_cells_table(const std::string& model, const std::vector<BestCell>& cells) {
  std::string out = table_header();
  bool first = true;
  for (const auto& cell : cells) {
    out += pad(first ? upper(model) : "", kModelWidth);
    out += pad(cell.score, kScoreWidth);
    out += pad(format_score(cell.mean, cell.stddev), kValueWidth);
    out += param_cell(cell.parameter, cell.filter);
    out += '\n';
    first = false;
  }
  return out;
}

std::string ranking_csv(const std::vector<ParamRank>& ranks) {
  std::string out = "name,value\n";
  for (const auto& r : ranks)
    out += param_cell(r.parameter, r.filter) + "," + shortest(r.mean_accuracy) + "\n";
  return out;
}

std::string group_accuracy_csv(const std::vector<GroupAccuracy>& groups,
                               const std::vector<ModelFamily>& families) {
  std::string out = "name,value,model\n";
  for (const auto& g : groups)
    for (std::size_t m = 0; m < families.size(); ++m)
      out += g.group + "," + shortest(g.accuracy[m]) + "," + to_string(families[m]) + "\n";
  return out;
}

std::string importance_csv(const std::map<std::string, double>& importances) {
  std::vector<std::pair<std::string, double>> rows(importances.begin(), importances.end());
  std::sort(rows.begin(), rows.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::string out = "name,value\n";
  for (const auto& [name, value] : rows) out += name + "," + shortest(value) + "\n";
  return out;
}

}  // namespace rtclass
