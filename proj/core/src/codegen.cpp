#include "rtclass/codegen.hpp"

#include <charconv>
#include <stdexcept>

#include "rtclass/model_io.hpp"

namespace rtclass {

namespace {

/// Shortest decimal that round-trips to the same double, forced to look
/// like a floating literal so C comparisons happen in double.
std::string c_double(double v) {
  char buf[40];
  auto res = std::to_chars(buf, buf + sizeof buf, v);
  std::string s(buf, res.ptr);
  if (s.find('.') == std::string::npos && s.find('e') == std::string::npos &&
      s.find("inf") == std::string::npos && s.find("nan") == std::string::npos)
    s += ".0";
  return s;
}

int leaf_class(const TreeNode& node) {
  int best = 0;
  for (std::size_t c = 1; c < node.counts.size(); ++c)
    if (node.counts[c] > node.counts[static_cast<std::size_t>(best)])
      best = static_cast<int>(c);
  return best;
}

void check_dialect(const std::string& dialect) {
  for (const auto& d : codegen_dialects())
    if (d == dialect) return;
  std::string known;
  for (const auto& d : codegen_dialects()) {
    if (!known.empty()) known += ", ";
    known += d;
  }
  throw std::invalid_argument("unknown dialect \"" + dialect + "\" (known: " + known + ")");
}

std::string feature_order_line(const std::vector<std::string>& order) {
  std::string out = "feature order:";
  for (std::size_t i = 0; i < order.size(); ++i)
    out += " f[" + std::to_string(i) + "]=" + order[i];
  return out;
}

void emit_tree_c(const DecisionTree& tree, int node_idx, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 4, ' ');
  const TreeNode& node = tree.nodes[static_cast<std::size_t>(node_idx)];
  if (node.feature < 0) {
    out += pad + "return " + std::to_string(leaf_class(node)) + ";\n";
    return;
  }
  out += pad + "if (f[" + std::to_string(node.feature) + "] <= " +
         c_double(node.threshold) + ") {\n";
  emit_tree_c(tree, node.left, indent + 1, out);
  out += pad + "} else {\n";
  emit_tree_c(tree, node.right, indent + 1, out);
  out += pad + "}\n";
}

void emit_tree_pseudo(const DecisionTree& tree, int node_idx, int indent, std::string& out) {
  const std::string pad(static_cast<std::size_t>(indent) * 2, ' ');
  const TreeNode& node = tree.nodes[static_cast<std::size_t>(node_idx)];
  if (node.feature < 0) {
    out += pad + "return class " + std::to_string(leaf_class(node)) + "\n";
    return;
  }
  out += pad + "if f[" + std::to_string(node.feature) + "] <= " +
         c_double(node.threshold) + ":\n";
  emit_tree_pseudo(tree, node.left, indent + 1, out);
  out += pad + "else:\n";
  emit_tree_pseudo(tree, node.right, indent + 1, out);
}

std::string forest_c99(const ForestModel& m, const std::vector<std::string>& order) {
  const std::string n_feat = std::to_string(m.n_features);
  std::string out;
  out += "/* random forest classifier: " + std::to_string(m.trees.size()) + " trees, " +
         n_feat + " features, " + std::to_string(m.n_classes) + " classes */\n";
  out += "/* " + feature_order_line(order) + " */\n";

  for (std::size_t t = 0; t < m.trees.size(); ++t) {
    out += "\nstatic int tree_" + std::to_string(t) + "(const float f[" + n_feat + "]) {\n";
    emit_tree_c(m.trees[t], 0, 1, out);
    out += "}\n";
  }

  out += "\nint predict(const float f[" + n_feat + "]) {\n";
  out += "    int votes[" + std::to_string(m.n_classes) + "] = {0};\n";
  out += "    int best;\n    int c;\n";
  for (std::size_t t = 0; t < m.trees.size(); ++t)
    out += "    ++votes[tree_" + std::to_string(t) + "(f)];\n";
  out += "    best = 0;\n";
  out += "    for (c = 1; c < " + std::to_string(m.n_classes) + "; ++c) {\n";
  out += "        if (votes[c] > votes[best]) best = c;\n";
  out += "    }\n";
  out += "    return best;\n}\n";
  return out;
}

std::string forest_pseudo(const ForestModel& m, const std::vector<std::string>& order) {
  std::string out = "model: random forest (" + std::to_string(m.trees.size()) + " trees, " +
                    std::to_string(m.n_features) + " features, " +
                    std::to_string(m.n_classes) + " classes)\n";
  out += feature_order_line(order) + "\n";
  for (std::size_t t = 0; t < m.trees.size(); ++t) {
    out += "tree " + std::to_string(t) + ":\n";
    emit_tree_pseudo(m.trees[t], 0, 1, out);
  }
  out += "predict: majority vote over trees, ties to lowest class index\n";
  return out;
}

std::string matrix_c(const std::vector<double>& v, std::size_t rows, std::size_t cols) {
  std::string out = "{\n";
  for (std::size_t r = 0; r < rows; ++r) {
    out += "    {";
    for (std::size_t c = 0; c < cols; ++c) {
      if (c) out += ", ";
      out += c_double(v[r * cols + c]);
    }
    out += r + 1 < rows ? "},\n" : "}\n";
  }
  return out + "}";
}

std::string vector_c(const std::vector<double>& v) {
  std::string out = "{";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) out += ", ";
    out += c_double(v[i]);
  }
  return out + "}";
}

std::string mlp_c99(const MlpModel& m, const std::vector<std::string>& order) {
  const auto d = static_cast<std::size_t>(m.n_inputs);
  const auto h = static_cast<std::size_t>(m.n_hidden);
  const auto c = static_cast<std::size_t>(m.n_classes);
  const std::string D = std::to_string(d), H = std::to_string(h), C = std::to_string(c);

  std::string out;
  out += "/* mlp classifier: " + D + " inputs, " + H + " hidden, " + C + " classes */\n";
  out += "/* " + feature_order_line(order) + " */\n";
  out += "#include <math.h>\n\n";
  out += "static const double W1[" + H + "][" + D + "] = " + matrix_c(m.w1, h, d) + ";\n";
  out += "static const double B1[" + H + "] = " + vector_c(m.b1) + ";\n";
  out += "static const double W2[" + C + "][" + H + "] = " + matrix_c(m.w2, c, h) + ";\n";
  out += "static const double B2[" + C + "] = " + vector_c(m.b2) + ";\n";
  out += "\nint predict(const float f[" + D + "]) {\n";
  out += "    double hid[" + H + "];\n";
  out += "    double best = 0.0;\n";
  out += "    int best_c = 0;\n";
  out += "    int i, j, c;\n";
  out += "    for (j = 0; j < " + H + "; ++j) {\n";
  out += "        double a = B1[j];\n";
  out += "        for (i = 0; i < " + D + "; ++i) {\n";
  out += "            a += W1[j][i] * (double)f[i];\n";
  out += "        }\n";
  out += "        hid[j] = 1.0 / (1.0 + exp(-a));\n";
  out += "    }\n";
  out += "    for (c = 0; c < " + C + "; ++c) {\n";
  out += "        double z = B2[c];\n";
  out += "        for (j = 0; j < " + H + "; ++j) {\n";
  out += "            z += W2[c][j] * hid[j];\n";
  out += "        }\n";
  out += "        if (c == 0 || z > best) {\n";
  out += "            best = z;\n";
  out += "            best_c = c;\n";
  out += "        }\n";
  out += "    }\n";
  out += "    return best_c;\n}\n";
  return out;
}

std::string mlp_pseudo(const MlpModel& m, const std::vector<std::string>& order) {
  std::string out = "model: mlp (" + std::to_string(m.n_inputs) + " inputs, " +
                    std::to_string(m.n_hidden) + " hidden, " +
                    std::to_string(m.n_classes) + " classes)\n";
  out += feature_order_line(order) + "\n";
  out += "hidden[j] = logistic(B1[j] + sum_i W1[j][i] * f[i])\n";
  out += "logit[c]  = B2[c] + sum_j W2[c][j] * hidden[j]\n";
  out += "predict: argmax of logits, ties to lowest class index\n";
  const auto h = static_cast<std::size_t>(m.n_hidden);
  const auto d = static_cast<std::size_t>(m.n_inputs);
  const auto c = static_cast<std::size_t>(m.n_classes);
  out += "W1 = " + matrix_c(m.w1, h, d) + "\n";
  out += "B1 = " + vector_c(m.b1) + "\n";
  out += "W2 = " + matrix_c(m.w2, c, h) + "\n";
  out += "B2 = " + vector_c(m.b2) + "\n";
  return out;
}

}  // namespace

const std::vector<std::string>& codegen_dialects() {
  static const std::vector<std::string> dialects = {"c99", "pseudo"};
  return dialects;
}

ExportBundle export_forest(const ForestModel& forest, const std::string& dialect,
                           const std::vector<std::string>& feature_order) {
  check_dialect(dialect);
  ExportBundle bundle;
  bundle.entry = "predict";
  bundle.dialect = dialect;
  bundle.feature_order = feature_order;
  bundle.digest = fnv1a64_hex(serialize_forest_payload(forest));
  bundle.source = dialect == "c99" ? forest_c99(forest, feature_order)
                                   : forest_pseudo(forest, feature_order);
  return bundle;
}

ExportBundle export_mlp(const MlpModel& mlp, const std::string& dialect,
                        const std::vector<std::string>& feature_order) {
  check_dialect(dialect);
  ExportBundle bundle;
  bundle.entry = "predict";
  bundle.dialect = dialect;
  bundle.feature_order = feature_order;
  bundle.digest = fnv1a64_hex(serialize_mlp_payload(mlp));
  bundle.source = dialect == "c99" ? mlp_c99(mlp, feature_order)
                                   : mlp_pseudo(mlp, feature_order);
  return bundle;
}

}  // namespace rtclass
