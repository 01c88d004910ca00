#include "rtclass/model_io.hpp"

#include <fstream>
#include <sstream>

#include "json.hpp"

namespace rtclass {

using ordered_json = nlohmann::ordered_json;

int SavedModel::predict(std::span<const double> x) const {
  return std::visit([&](const auto& m) { return m.predict(x); }, model);
}

std::uint64_t fnv1a64(std::string_view bytes) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  return h;
}

std::string fnv1a64_hex(std::string_view bytes) {
  static const char* digits = "0123456789abcdef";
  std::uint64_t h = fnv1a64(bytes);
  std::string out(16, '0');
  for (int i = 15; i >= 0; --i) {
    out[static_cast<std::size_t>(i)] = digits[h & 0xf];
    h >>= 4;
  }
  return out;
}

namespace {

ordered_json forest_to_json(const ForestModel& m) {
  ordered_json j;
  j["n_features"] = m.n_features;
  j["n_classes"] = m.n_classes;
  j["n_trees"] = m.config.n_trees;
  j["max_depth"] = m.config.max_depth;
  j["features_per_split"] = m.config.features_per_split;
  j["seed"] = m.seed;
  ordered_json trees = ordered_json::array();
  for (const auto& tree : m.trees) {
    ordered_json nodes = ordered_json::array();
    for (const auto& node : tree.nodes) {
      if (node.feature < 0)
        nodes.push_back(ordered_json{{"counts", node.counts}});
      else
        nodes.push_back(ordered_json{{"feature", node.feature},
                                     {"threshold", node.threshold},
                                     {"left", node.left},
                                     {"right", node.right}});
    }
    trees.push_back(std::move(nodes));
  }
  j["trees"] = std::move(trees);
  return j;
}

ForestModel forest_from_json(const ordered_json& j) {
  ForestModel m;
  m.n_features = j.at("n_features").get<int>();
  m.n_classes = j.at("n_classes").get<int>();
  m.config.n_trees = j.at("n_trees").get<int>();
  m.config.max_depth = j.at("max_depth").get<int>();
  m.config.features_per_split = j.at("features_per_split").get<int>();
  m.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& tj : j.at("trees")) {
    DecisionTree tree;
    for (const auto& nj : tj) {
      TreeNode node;
      if (nj.contains("counts")) {
        node.counts = nj.at("counts").get<std::vector<int>>();
      } else {
        node.feature = nj.at("feature").get<int>();
        node.threshold = nj.at("threshold").get<double>();
        node.left = nj.at("left").get<int>();
        node.right = nj.at("right").get<int>();
      }
      tree.nodes.push_back(std::move(node));
    }
    m.trees.push_back(std::move(tree));
  }
  return m;
}

ordered_json svm_to_json(const SvmModel& m) {
  ordered_json j;
  j["n_features"] = m.n_features;
  j["n_classes"] = m.n_classes;
  j["lambda"] = m.config.lambda;
  j["epochs"] = m.config.epochs;
  j["seed"] = m.seed;
  ordered_json machines = ordered_json::array();
  for (const auto& bm : m.machines)
    machines.push_back(ordered_json{{"w", bm.w}, {"b", bm.b}});
  j["machines"] = std::move(machines);
  return j;
}

SvmModel svm_from_json(const ordered_json& j) {
  SvmModel m;
  m.n_features = j.at("n_features").get<int>();
  m.n_classes = j.at("n_classes").get<int>();
  m.config.lambda = j.at("lambda").get<double>();
  m.config.epochs = j.at("epochs").get<int>();
  m.seed = j.at("seed").get<std::uint64_t>();
  for (const auto& mj : j.at("machines")) {
    BinarySvm bm;
    bm.w = mj.at("w").get<std::vector<double>>();
    bm.b = mj.at("b").get<double>();
    m.machines.push_back(std::move(bm));
  }
  return m;
}

ordered_json mlp_to_json(const MlpModel& m) {
  ordered_json j;
  j["n_inputs"] = m.n_inputs;
  j["n_hidden"] = m.n_hidden;
  j["n_classes"] = m.n_classes;
  j["learning_rate"] = m.config.learning_rate;
  j["epochs"] = m.config.epochs;
  j["seed"] = m.seed;
  j["w1"] = m.w1;
  j["b1"] = m.b1;
  j["w2"] = m.w2;
  j["b2"] = m.b2;
  return j;
}

MlpModel mlp_from_json(const ordered_json& j) {
  MlpModel m;
  m.n_inputs = j.at("n_inputs").get<int>();
  m.n_hidden = j.at("n_hidden").get<int>();
  m.n_classes = j.at("n_classes").get<int>();
  m.config.hidden = m.n_hidden;
  m.config.learning_rate = j.at("learning_rate").get<double>();
  m.config.epochs = j.at("epochs").get<int>();
  m.seed = j.at("seed").get<std::uint64_t>();
  m.w1 = j.at("w1").get<std::vector<double>>();
  m.b1 = j.at("b1").get<std::vector<double>>();
  m.w2 = j.at("w2").get<std::vector<double>>();
  m.b2 = j.at("b2").get<std::vector<double>>();
  return m;
}

ordered_json payload_json(const SavedModel& model) {
  ordered_json j;
  j["family"] = model.family;
  j["classes"] = model.classes;
  j["feature_order"] = model.feature_order;
  j["parameter"] = model.parameter;
  j["filter"] = model.filter;
  j["seed"] = model.seed;
  if (model.family == "rf")
    j["model"] = forest_to_json(std::get<ForestModel>(model.model));
  else if (model.family == "svm")
    j["model"] = svm_to_json(std::get<SvmModel>(model.model));
  else
    j["model"] = mlp_to_json(std::get<MlpModel>(model.model));
  return j;
}

}  // namespace

std::string serialize_model_payload(const SavedModel& model) {
  return payload_json(model).dump();
}

std::string serialize_forest_payload(const ForestModel& model) {
  return forest_to_json(model).dump();
}

std::string serialize_mlp_payload(const MlpModel& model) {
  return mlp_to_json(model).dump();
}

std::string serialize_model(const SavedModel& model) {
  ordered_json j;
  j["format"] = "rtclass-model";
  j["version"] = 1;
  j["digest"] = fnv1a64_hex(serialize_model_payload(model));
  j["payload"] = payload_json(model);
  return j.dump(2) + "\n";
}

SavedModel parse_model(std::string_view bytes) {
  ordered_json j;
  try {
    j = ordered_json::parse(bytes);
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("model file is not valid JSON: ") + e.what());
  }
  if (!j.is_object() || j.value("format", "") != "rtclass-model")
    throw std::runtime_error("not an rtclass model file");

  SavedModel m;
  std::string expected;
  try {
    const auto& p = j.at("payload");
    m.family = p.at("family").get<std::string>();
    m.classes = p.at("classes").get<std::vector<std::string>>();
    m.feature_order = p.at("feature_order").get<std::vector<std::string>>();
    m.parameter = p.at("parameter").get<std::string>();
    m.filter = p.at("filter").get<std::string>();
    m.seed = p.at("seed").get<std::uint64_t>();
    const auto& mj = p.at("model");
    if (m.family == "rf")
      m.model = forest_from_json(mj);
    else if (m.family == "svm")
      m.model = svm_from_json(mj);
    else if (m.family == "ann")
      m.model = mlp_from_json(mj);
    else
      throw std::runtime_error("unknown model family: " + m.family);
    expected = j.at("digest").get<std::string>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("malformed model payload: ") + e.what());
  }
  const std::string actual = fnv1a64_hex(serialize_model_payload(m));
  if (expected != actual)
    throw IntegrityError("model digest mismatch: file says " + expected +
                         ", payload hashes to " + actual);
  return m;
}

void save_model(const std::filesystem::path& path, const SavedModel& model) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << serialize_model(model);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

SavedModel load_model(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open model file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_model(buf.str());
  } catch (const IntegrityError& e) {
    throw IntegrityError(path.string() + ": " + e.what());
  } catch (const std::runtime_error& e) {
    throw std::runtime_error(path.string() + ": " + e.what());
  }
}

}  // namespace rtclass
