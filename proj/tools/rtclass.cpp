// rtclass: command-line front end for the radio fingerprint classification
// toolkit. Subcommands: simulate, evaluate, importance, export.
//
// Exit codes: 0 success, 1 usage error, 2 data error, 3 internal error.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rtclass/analysis.hpp"
#include "rtclass/codegen.hpp"
#include "rtclass/crossval.hpp"
#include "rtclass/features.hpp"
#include "rtclass/io.hpp"
#include "rtclass/model_io.hpp"
#include "rtclass/preprocess.hpp"
#include "rtclass/report.hpp"
#include "rtclass/rng.hpp"
#include "rtclass/synth.hpp"

namespace fs = std::filesystem;
using namespace rtclass;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Options {
  LearnConfig learn;
  double duration_s = 10.0;
  double noise_sigma = 0.08;
  double ripple_amp = 0.10;
  double ripple_freq_hz = 2.0;
  double sample_rate_hz = 0.0;
  std::size_t cir_length = 32;
  int k = 10;
};

/// Flat key=value config file; values override the built-in defaults and
/// explicit command-line flags override both.
void apply_config_file(Options& opts, const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open config file: " + path.string());
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw UsageError(path.string() + ":" + std::to_string(line_no) +
                       ": expected key=value");
    const std::string key = line.substr(first, eq - first);
    const std::string value = line.substr(eq + 1);
    try {
      if (key == "trees") opts.learn.forest.n_trees = std::stoi(value);
      else if (key == "max_depth") opts.learn.forest.max_depth = std::stoi(value);
      else if (key == "features_per_split") opts.learn.forest.features_per_split = std::stoi(value);
      else if (key == "svm_lambda") opts.learn.svm.lambda = std::stod(value);
      else if (key == "svm_epochs") opts.learn.svm.epochs = std::stoi(value);
      else if (key == "mlp_hidden") opts.learn.mlp.hidden = std::stoi(value);
      else if (key == "mlp_learning_rate") opts.learn.mlp.learning_rate = std::stod(value);
      else if (key == "mlp_epochs") opts.learn.mlp.epochs = std::stoi(value);
      else if (key == "duration_s") opts.duration_s = std::stod(value);
      else if (key == "noise_sigma") opts.noise_sigma = std::stod(value);
      else if (key == "ripple_amp") opts.ripple_amp = std::stod(value);
      else if (key == "ripple_freq_hz") opts.ripple_freq_hz = std::stod(value);
      else if (key == "sample_rate_hz") opts.sample_rate_hz = std::stod(value);
      else if (key == "cir_length") opts.cir_length = static_cast<std::size_t>(std::stoul(value));
      else if (key == "k") opts.k = std::stoi(value);
      else throw UsageError(path.string() + ":" + std::to_string(line_no) +
                            ": unknown config key \"" + key + "\"");
    } catch (const std::invalid_argument&) {
      throw UsageError(path.string() + ":" + std::to_string(line_no) +
                       ": bad value for \"" + key + "\"");
    }
  }
}

std::optional<std::uint64_t> env_seed() {
  const char* env = std::getenv("RTCLASS_SEED");
  if (!env || !*env) return std::nullopt;
  try {
    return std::stoull(env);
  } catch (const std::exception&) {
    throw UsageError("RTCLASS_SEED is not a valid unsigned integer");
  }
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& flag,
                           const std::optional<std::uint64_t>& manifest_seed) {
  if (flag) return *flag;
  if (manifest_seed) return *manifest_seed;
  if (auto env = env_seed()) return *env;
  throw UsageError(
      "no seed: pass --seed, add a \"# seed=<u64>\" pragma to the manifest, "
      "or set RTCLASS_SEED");
}

std::vector<std::string> split_csv(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

void write_text(const fs::path& path, const std::string& content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << content;
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Dataset select_task(Dataset dataset, const std::string& task) {
  std::vector<Label> wanted;
  if (task == "binary") wanted = {Label::Idle, Label::Bicycle};
  else if (task == "multi") wanted = {Label::Idle, Label::Bicycle, Label::CarLike};
  else return dataset;  // "all": keep whatever the manifest provides

  for (Label l : wanted)
    if (!dataset.class_counts.contains(l))
      throw ParseError("task \"" + task + "\" requires traces labeled \"" +
                       to_string(l) + "\"");
  std::vector<RadioTrace> kept;
  for (auto& t : dataset.traces)
    if (std::find(wanted.begin(), wanted.end(), t.label) != wanted.end())
      kept.push_back(std::move(t));
  return make_dataset(std::move(kept));
}

std::vector<std::string> default_parameters(const Dataset& dataset) {
  if (dataset.traces.empty()) throw ParseError("dataset is empty");
  const auto& t = dataset.traces.front();
  bool has_rxp = true;
  if (t.tech() == Tech::WlanCsi)
    has_rxp = std::all_of(t.csi().begin(), t.csi().end(),
                          [](const CsiFrame& f) { return f.rxp.has_value(); });
  return parameter_names(t.tech(), t.cir_length(), has_rxp);
}

std::vector<std::string> class_names_of(const FeatureMatrix& m) {
  std::vector<std::string> names;
  for (Label l : m.classes) names.push_back(to_string(l));
  return names;
}

SavedModel train_final(const FeatureMatrix& matrix, ModelFamily family,
                       const LearnConfig& learn, std::uint64_t seed) {
  SavedModel saved;
  saved.family = to_string(family);
  saved.classes = class_names_of(matrix);
  const auto& names = feature_names();
  saved.feature_order.assign(names.begin(), names.end());
  saved.parameter = matrix.parameter;
  saved.filter = matrix.filter;
  saved.seed = seed;
  const auto x = matrix.x();
  const std::uint64_t final_seed = derive_seed(seed, "final");
  switch (family) {
    case ModelFamily::Rf: saved.model = train_forest(x, matrix.labels, learn.forest, final_seed); break;
    case ModelFamily::Svm: saved.model = train_svm(x, matrix.labels, learn.svm, final_seed); break;
    case ModelFamily::Ann: saved.model = train_mlp(x, matrix.labels, learn.mlp, final_seed); break;
  }
  return saved;
}

// ---------------------------------------------------------------------------
// subcommands

struct SimulateArgs {
  std::string out_dir;
  std::string classes = "idle,bicycle,car_like";
  std::size_t per_class = 0;
  std::string tech;
  std::optional<std::uint64_t> seed;
};

int cmd_simulate(const SimulateArgs& args, const Options& opts) {
  const auto tech = parse_tech(args.tech);
  if (!tech) throw UsageError("unknown tech: " + args.tech);
  if (args.per_class == 0) throw UsageError("--per-class must be >= 1");

  std::map<Label, std::size_t> per_class;
  for (const auto& name : split_csv(args.classes)) {
    const auto label = parse_label(name);
    if (!label) throw UsageError("unknown class: " + name);
    per_class[*label] = args.per_class;
  }
  if (per_class.empty()) throw UsageError("--classes is empty");

  const std::uint64_t seed = resolve_seed(args.seed, std::nullopt);

  ScenarioConfig base;
  base.tech = *tech;
  base.duration_s = opts.duration_s;
  base.sample_rate_hz = opts.sample_rate_hz;
  base.noise_sigma = opts.noise_sigma;
  base.ripple_amp = opts.ripple_amp;
  base.ripple_freq_hz = opts.ripple_freq_hz;
  base.cir_length = opts.cir_length;

  const auto generated = generate_dataset(per_class, base, args.out_dir, seed);
  std::cout << "wrote " << generated.dataset.traces.size() << " traces and manifest.csv to "
            << args.out_dir << "\n";
  return 0;
}

struct EvaluateArgs {
  std::string manifest;
  std::string model;
  std::string task;
  std::string parameter;
  std::string filter = "f0";
  std::string parameters;  // sweep candidates
  std::optional<std::uint64_t> seed;
  std::size_t balance_n = 0;
  std::string out_dir = ".";
  std::string save_model;
  std::string features_csv;
};

int cmd_evaluate(const EvaluateArgs& args, const Options& opts) {
  const auto family = parse_model_family(args.model);
  if (!family) throw UsageError("unknown model: " + args.model);
  if (opts.k < 2) throw UsageError("--k must be >= 2");
  if (!filter_sigma(args.filter)) throw UsageError("unknown filter: " + args.filter);

  const auto manifest = load_manifest(args.manifest);
  const std::uint64_t seed = resolve_seed(args.seed, manifest.seed);
  Dataset dataset = select_task(load_dataset(manifest), args.task);
  if (args.balance_n > 0)
    dataset = balance(dataset, args.balance_n, derive_seed(seed, "balance"));

  const fs::path out_dir(args.out_dir);

  if (!args.parameter.empty()) {
    const auto matrix = featurize_dataset(dataset, args.parameter, args.filter);
    const auto report = evaluate(matrix.x(), matrix.labels, class_names_of(matrix),
                                 *family, opts.learn, opts.k, seed, args.parameter,
                                 args.filter);
    const std::string table = report_table(report);
    std::cout << table;
    write_text(out_dir / "report.json", report_json(report));
    write_text(out_dir / "report.txt", table);
    if (!args.features_csv.empty())
      write_text(args.features_csv, feature_matrix_csv(matrix));
    if (!args.save_model.empty())
      save_model(args.save_model, train_final(matrix, *family, opts.learn, seed));
    return 0;
  }

  // No --parameter: sweep (parameter, filter) cells and report the best cell
  // per score row, the way the results tables are laid out.
  const auto params = args.parameters.empty() ? default_parameters(dataset)
                                              : split_csv(args.parameters);
  std::vector<std::string> filters;
  for (const auto& f : filter_grid()) filters.push_back(f.name);
  const auto cells = best_cells(dataset, *family, params, filters, opts.learn, opts.k, seed);

  const std::string table = best_cells_table(args.model, cells);
  std::cout << table;
  write_text(out_dir / "report.txt", table);
  nlohmann::ordered_json rows = nlohmann::ordered_json::array();
  for (const auto& cell : cells)
    rows.push_back({{"score", cell.score},
                    {"mean", cell.mean},
                    {"std", cell.stddev},
                    {"parameter", cell.parameter},
                    {"filter", cell.filter}});
  write_text(out_dir / "report.json", rows.dump(2) + "\n");
  if (!args.save_model.empty()) {
    const auto matrix = featurize_dataset(dataset, cells.front().parameter, cells.front().filter);
    save_model(args.save_model, train_final(matrix, *family, opts.learn, seed));
  }
  return 0;
}

struct ImportanceArgs {
  std::string manifest;
  std::string mode;
  std::string model = "rf";
  std::string models = "ann,rf,svm";
  std::string task = "all";
  std::string parameter;
  std::string filter = "f0";
  std::string parameters;
  std::string filters;
  std::optional<std::uint64_t> seed;
  std::string out;  // empty = stdout
};

int cmd_importance(const ImportanceArgs& args, const Options& opts) {
  const auto manifest = load_manifest(args.manifest);
  const std::uint64_t seed = resolve_seed(args.seed, manifest.seed);
  Dataset dataset = select_task(load_dataset(manifest), args.task);

  std::string csv;
  if (args.mode == "features") {
    if (args.model != "rf")
      throw UsageError("--mode features ranks by forest impurity decrease; use --model rf");
    if (args.parameter.empty()) throw UsageError("--mode features requires --parameter");
    const auto matrix = featurize_dataset(dataset, args.parameter, args.filter);
    const auto saved = train_final(matrix, ModelFamily::Rf, opts.learn, seed);
    const auto& forest = std::get<ForestModel>(saved.model);
    const auto names = std::vector<std::string>(feature_names().begin(), feature_names().end());
    csv = importance_csv(feature_importance_named(forest, matrix.x(), matrix.labels, names));
  } else if (args.mode == "parameters") {
    const auto family = parse_model_family(args.model);
    if (!family) throw UsageError("unknown model: " + args.model);
    const auto params = args.parameters.empty() ? default_parameters(dataset)
                                                : split_csv(args.parameters);
    std::vector<std::string> filters;
    if (args.filters.empty())
      for (const auto& f : filter_grid()) filters.push_back(f.name);
    else
      filters = split_csv(args.filters);
    for (const auto& f : filters)
      if (!filter_sigma(f)) throw UsageError("unknown filter: " + f);
    csv = ranking_csv(rank_parameters(dataset, *family, params, filters, opts.learn,
                                      opts.k, seed));
  } else if (args.mode == "subcarrier-groups") {
    std::vector<ModelFamily> families;
    for (const auto& name : split_csv(args.models)) {
      const auto family = parse_model_family(name);
      if (!family) throw UsageError("unknown model: " + name);
      families.push_back(*family);
    }
    csv = group_accuracy_csv(
        subcarrier_group_accuracy(dataset, families, opts.learn, opts.k, seed, args.filter),
        families);
  } else {
    throw UsageError("unknown mode: " + args.mode);
  }

  if (args.out.empty())
    std::cout << csv;
  else
    write_text(args.out, csv);
  return 0;
}

struct ExportArgs {
  std::string model_file;
  std::string dialect = "c99";
  std::string out;
};

int cmd_export(const ExportArgs& args) {
  const SavedModel saved = load_model(args.model_file);

  ExportBundle bundle;
  if (saved.family == "rf")
    bundle = export_forest(std::get<ForestModel>(saved.model), args.dialect,
                           saved.feature_order);
  else if (saved.family == "ann")
    bundle = export_mlp(std::get<MlpModel>(saved.model), args.dialect, saved.feature_order);
  else
    throw std::runtime_error("model family \"" + saved.family +
                             "\" has no code export (rf and ann only)");

  fs::path out = args.out.empty()
                     ? fs::path(args.model_file).replace_extension(
                           args.dialect == "c99" ? ".c" : ".txt")
                     : fs::path(args.out);
  write_text(out, bundle.source);
  write_text(out.string() + ".digest", bundle.digest + "\n");
  std::cout << "wrote " << out.string() << " (digest " << bundle.digest << ")\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  Options opts;

  // Config file values must be in place before flag defaults are bound.
  for (int i = 1; i < argc; ++i) {
    const std::string arg = argv[i];
    try {
      if (arg == "--config" && i + 1 < argc) apply_config_file(opts, argv[i + 1]);
      else if (arg.rfind("--config=", 0) == 0) apply_config_file(opts, arg.substr(9));
    } catch (const UsageError& e) {
      std::cerr << "usage error: " << e.what() << "\n";
      return 1;
    }
  }

  CLI::App app{"radio fingerprint detection and classification toolkit"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "flat key=value config file");

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "generate a synthetic labeled trace set");
  simulate->add_option("--out", sim.out_dir, "output directory")->required();
  simulate->add_option("--classes", sim.classes, "comma-separated class list")
      ->capture_default_str();
  simulate->add_option("--per-class", sim.per_class, "traces per class")
      ->required()
      ->check(CLI::PositiveNumber);
  simulate->add_option("--tech", sim.tech, "radio technology")
      ->required()
      ->check(CLI::IsMember({"wlan_csi", "uwb"}));
  simulate->add_option("--seed", sim.seed, "master seed (fallback: RTCLASS_SEED)");
  simulate->add_option("--duration-s", opts.duration_s, "trace duration in seconds");
  simulate->add_option("--noise-sigma", opts.noise_sigma, "relative channel noise");
  simulate->add_option("--sample-rate-hz", opts.sample_rate_hz,
                       "sampling rate (0 = per-tech default)");
  simulate->add_option("--cir-length", opts.cir_length, "UWB CIR samples per frame");
  simulate->add_option("--config", config_path, "flat key=value config file");

  EvaluateArgs ev;
  auto* evaluate_cmd = app.add_subcommand("evaluate", "k-fold cross-validated scores");
  evaluate_cmd->add_option("--manifest", ev.manifest, "dataset manifest CSV")->required();
  evaluate_cmd->add_option("--model", ev.model, "classifier")
      ->required()
      ->check(CLI::IsMember({"ann", "rf", "svm"}));
  evaluate_cmd->add_option("--task", ev.task, "classification task")
      ->required()
      ->check(CLI::IsMember({"binary", "multi"}));
  evaluate_cmd->add_option("--parameter", ev.parameter,
                           "channel parameter (omit to sweep for the best)");
  evaluate_cmd->add_option("--filter", ev.filter, "smoothing filter f0..f5")
      ->capture_default_str();
  evaluate_cmd->add_option("--parameters", ev.parameters,
                           "comma-separated sweep candidates (default: all)");
  evaluate_cmd->add_option("--k", opts.k, "cross-validation folds")
      ->capture_default_str()
      ->check(CLI::Range(2, 1000));
  evaluate_cmd->add_option("--seed", ev.seed, "seed (fallback: manifest, RTCLASS_SEED)");
  evaluate_cmd->add_option("--balance", ev.balance_n, "subsample to N traces per class");
  evaluate_cmd->add_option("--out", ev.out_dir, "report output directory")
      ->capture_default_str();
  evaluate_cmd->add_option("--save-model", ev.save_model, "write the trained model here");
  evaluate_cmd->add_option("--features-csv", ev.features_csv, "dump the feature matrix");
  evaluate_cmd->add_option("--config", config_path, "flat key=value config file");

  ImportanceArgs imp;
  auto* importance = app.add_subcommand("importance", "feature/parameter/group rankings");
  importance->add_option("--manifest", imp.manifest, "dataset manifest CSV")->required();
  importance->add_option("--mode", imp.mode, "what to rank")
      ->required()
      ->check(CLI::IsMember({"features", "parameters", "subcarrier-groups"}));
  importance->add_option("--model", imp.model, "classifier")->capture_default_str();
  importance->add_option("--models", imp.models, "families for subcarrier-groups mode")
      ->capture_default_str();
  importance->add_option("--task", imp.task, "class subset")
      ->capture_default_str()
      ->check(CLI::IsMember({"binary", "multi", "all"}));
  importance->add_option("--parameter", imp.parameter, "parameter for features mode");
  importance->add_option("--filter", imp.filter, "smoothing filter")->capture_default_str();
  importance->add_option("--parameters", imp.parameters, "candidates for parameters mode");
  importance->add_option("--filters", imp.filters, "filters for parameters mode");
  importance->add_option("--k", opts.k, "cross-validation folds")
      ->capture_default_str()
      ->check(CLI::Range(2, 1000));
  importance->add_option("--seed", imp.seed, "seed (fallback: manifest, RTCLASS_SEED)");
  importance->add_option("--out", imp.out, "output CSV path (default: stdout)");
  importance->add_option("--config", config_path, "flat key=value config file");

  ExportArgs ex;
  auto* export_cmd = app.add_subcommand("export", "emit standalone model source");
  export_cmd->add_option("--model-file", ex.model_file, "model saved by evaluate")
      ->required();
  export_cmd->add_option("--dialect", ex.dialect, "output dialect")
      ->capture_default_str()
      ->check(CLI::IsMember({"c99", "pseudo"}));
  export_cmd->add_option("--out", ex.out, "output source path");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 1;
  }

  try {
    if (simulate->parsed()) return cmd_simulate(sim, opts);
    if (evaluate_cmd->parsed()) return cmd_evaluate(ev, opts);
    if (importance->parsed()) return cmd_importance(imp, opts);
    if (export_cmd->parsed()) return cmd_export(ex);
    throw UsageError("no subcommand given");
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const ParseError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const IntegrityError& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::runtime_error& e) {
    std::cerr << "data error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return 3;
  }
}
