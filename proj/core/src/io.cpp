#include "rtclass/io.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "json.hpp"
#include "rtclass/rng.hpp"

namespace rtclass {

using ordered_json = nlohmann::ordered_json;

namespace {

[[noreturn]] void fail_line(std::size_t line_no, const std::string& msg) {
  throw ParseError("line " + std::to_string(line_no) + ": " + msg);
}

double require_number(const ordered_json& obj, const char* key, std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number())
    fail_line(line_no, std::string("missing or non-numeric field \"") + key + "\"");
  return it->get<double>();
}

int require_int(const ordered_json& obj, const char* key, std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_number_integer())
    fail_line(line_no, std::string("field \"") + key + "\" must be an integer");
  return it->get<int>();
}

std::vector<double> require_array(const ordered_json& obj, const char* key,
                                  std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_array())
    fail_line(line_no, std::string("missing or non-array field \"") + key + "\"");
  std::vector<double> v;
  v.reserve(it->size());
  for (const auto& x : *it) {
    if (!x.is_number()) fail_line(line_no, std::string("non-numeric entry in \"") + key + "\"");
    v.push_back(x.get<double>());
  }
  return v;
}

std::string require_string(const ordered_json& obj, const char* key, std::size_t line_no) {
  auto it = obj.find(key);
  if (it == obj.end() || !it->is_string())
    fail_line(line_no, std::string("missing or non-string field \"") + key + "\"");
  return it->get<std::string>();
}

bool looks_like_csi(const ordered_json& f) {
  return f.contains("rssi") || f.contains("lltf") || f.contains("ht") || f.contains("stbc");
}
bool looks_like_uwb(const ordered_json& f) {
  return f.contains("fpp") || f.contains("cir_power") || f.contains("cir");
}

/// Window long CIR vectors to `window` samples around the first path,
/// taken as the argmax of the per-sample mean magnitude across frames.
void window_cir(std::vector<UwbFrame>& frames, std::size_t window) {
  if (window == 0 || frames.empty()) return;
  const std::size_t len = frames.front().cir.size();
  if (len <= window) return;
  for (const auto& f : frames)
    if (f.cir.size() != len) return;  // inconsistent lengths; leave for validation

  std::vector<double> mean(len, 0.0);
  for (const auto& f : frames)
    for (std::size_t j = 0; j < len; ++j) mean[j] += f.cir[j];
  std::size_t peak = static_cast<std::size_t>(
      std::max_element(mean.begin(), mean.end()) - mean.begin());

  std::size_t start = peak >= window / 2 ? peak - window / 2 : 0;
  start = std::min(start, len - window);
  for (auto& f : frames)
    f.cir = std::vector<double>(f.cir.begin() + static_cast<std::ptrdiff_t>(start),
                                f.cir.begin() + static_cast<std::ptrdiff_t>(start + window));
}

void throw_if_invalid(const RadioTrace& trace) {
  auto violations = validate_trace(trace);
  if (violations.empty()) return;
  std::string msg = "trace \"" + trace.id + "\" violates " +
                    std::to_string(violations.size()) + " invariant(s): ";
  for (std::size_t i = 0; i < violations.size() && i < 4; ++i) {
    if (i) msg += "; ";
    msg += violations[i].str();
  }
  if (violations.size() > 4) msg += "; ...";
  throw ValidationError(msg, std::move(violations));
}

}  // namespace

RadioTrace parse_trace_file(std::string_view bytes, const ParseOptions& opts) {
  std::istringstream in{std::string(bytes)};
  std::string line;
  std::size_t line_no = 0;

  RadioTrace trace;
  bool have_header = false;
  std::vector<CsiFrame> csi_frames;
  std::vector<UwbFrame> uwb_frames;
  Tech tech = Tech::Uwb;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    ordered_json obj;
    try {
      obj = ordered_json::parse(line);
    } catch (const nlohmann::json::exception& e) {
      fail_line(line_no, std::string("invalid JSON: ") + e.what());
    }
    if (!obj.is_object()) fail_line(line_no, "expected a JSON object");

    if (!have_header) {
      trace.id = require_string(obj, "id", line_no);
      auto t = parse_tech(require_string(obj, "tech", line_no));
      if (!t) fail_line(line_no, "unknown tech tag");
      tech = *t;
      auto l = parse_label(require_string(obj, "label", line_no));
      if (!l) fail_line(line_no, "unknown label");
      trace.label = *l;
      auto link_it = obj.find("link");
      if (link_it == obj.end() || !link_it->is_object())
        fail_line(line_no, "missing or non-object field \"link\"");
      trace.link.tx_rx_distance_m = require_number(*link_it, "distance_m", line_no);
      trace.link.antenna_height_m = require_number(*link_it, "antenna_height_m", line_no);
      auto ant = parse_antenna(require_string(*link_it, "antenna", line_no));
      if (!ant) fail_line(line_no, "unknown antenna type");
      trace.link.antenna = *ant;
      trace.link.site = require_string(*link_it, "site", line_no);
      have_header = true;
      continue;
    }

    const bool is_csi = looks_like_csi(obj);
    const bool is_uwb = looks_like_uwb(obj);
    if (is_csi == is_uwb) fail_line(line_no, "frame object matches neither technology");
    if ((tech == Tech::WlanCsi) != is_csi) {
      Violation v{"tech", static_cast<std::ptrdiff_t>(csi_frames.size() + uwb_frames.size()),
                  "frame technology does not match header tech \"" + to_string(tech) + "\""};
      throw ValidationError("trace mixes technologies: " + v.str(), {v});
    }

    if (is_csi) {
      CsiFrame f;
      f.t = require_number(obj, "t", line_no);
      f.rssi = require_int(obj, "rssi", line_no);
      f.lltf = require_array(obj, "lltf", line_no);
      f.ht = require_array(obj, "ht", line_no);
      f.stbc = require_array(obj, "stbc", line_no);
      if (auto it = obj.find("rxp"); it != obj.end()) {
        if (!it->is_number()) fail_line(line_no, "field \"rxp\" must be numeric");
        f.rxp = it->get<double>();
      }
      csi_frames.push_back(std::move(f));
    } else {
      UwbFrame f;
      f.t = require_number(obj, "t", line_no);
      f.fpp = require_number(obj, "fpp", line_no);
      f.cir_power = require_number(obj, "cir_power", line_no);
      f.rxp = require_number(obj, "rxp", line_no);
      f.cir = require_array(obj, "cir", line_no);
      uwb_frames.push_back(std::move(f));
    }
  }

  if (!have_header || csi_frames.size() + uwb_frames.size() == 0)
    throw ParseError("no frames in trace file");

  if (tech == Tech::WlanCsi) {
    trace.frames = std::move(csi_frames);
  } else {
    window_cir(uwb_frames, opts.cir_window);
    trace.frames = std::move(uwb_frames);
  }

  throw_if_invalid(trace);
  return trace;
}

std::string serialize_trace(const RadioTrace& trace) {
  std::string out;
  ordered_json header;
  header["id"] = trace.id;
  header["tech"] = to_string(trace.tech());
  header["label"] = to_string(trace.label);
  ordered_json link;
  link["distance_m"] = trace.link.tx_rx_distance_m;
  link["antenna_height_m"] = trace.link.antenna_height_m;
  link["antenna"] = to_string(trace.link.antenna);
  link["site"] = trace.link.site;
  header["link"] = std::move(link);
  out += header.dump();
  out += '\n';

  if (trace.tech() == Tech::WlanCsi) {
    for (const auto& f : trace.csi()) {
      ordered_json j;
      j["t"] = f.t;
      j["rssi"] = f.rssi;
      j["lltf"] = f.lltf;
      j["ht"] = f.ht;
      j["stbc"] = f.stbc;
      if (f.rxp) j["rxp"] = *f.rxp;
      out += j.dump();
      out += '\n';
    }
  } else {
    for (const auto& f : trace.uwb()) {
      ordered_json j;
      j["t"] = f.t;
      j["fpp"] = f.fpp;
      j["cir_power"] = f.cir_power;
      j["rxp"] = f.rxp;
      j["cir"] = f.cir;
      out += j.dump();
      out += '\n';
    }
  }
  return out;
}

RadioTrace load_trace_file(const std::filesystem::path& path, const ParseOptions& opts) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open trace file: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return parse_trace_file(buf.str(), opts);
  } catch (const ValidationError& e) {
    throw ValidationError(path.string() + ": " + e.what(), e.violations);
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_trace_file(const std::filesystem::path& path, const RadioTrace& trace) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << serialize_trace(trace);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

DatasetManifest parse_manifest(std::string_view bytes) {
  DatasetManifest m;
  std::istringstream in{std::string(bytes)};
  std::string line;
  std::size_t line_no = 0;
  bool have_header = false;

  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.find_first_not_of(" \t") == std::string::npos) continue;

    if (line[0] == '#') {
      std::string body = line.substr(1);
      auto pos = body.find("seed=");
      if (pos != std::string::npos) {
        try {
          m.seed = std::stoull(body.substr(pos + 5));
        } catch (const std::exception&) {
          fail_line(line_no, "malformed seed pragma");
        }
      }
      continue;
    }

    if (!have_header) {
      if (line != "path,label,tech")
        fail_line(line_no, "expected manifest header \"path,label,tech\"");
      have_header = true;
      continue;
    }

    std::size_t c1 = line.find(',');
    std::size_t c2 = c1 == std::string::npos ? std::string::npos : line.find(',', c1 + 1);
    if (c1 == std::string::npos || c2 == std::string::npos ||
        line.find(',', c2 + 1) != std::string::npos)
      fail_line(line_no, "expected exactly three comma-separated fields");

    ManifestEntry e;
    e.path = line.substr(0, c1);
    if (e.path.empty()) fail_line(line_no, "empty path");
    auto l = parse_label(line.substr(c1 + 1, c2 - c1 - 1));
    if (!l) fail_line(line_no, "unknown label");
    e.label = *l;
    auto t = parse_tech(line.substr(c2 + 1));
    if (!t) fail_line(line_no, "unknown tech");
    e.tech = *t;

    for (const auto& prev : m.entries)
      if (prev.path == e.path) fail_line(line_no, "duplicate path: " + e.path);
    m.entries.push_back(std::move(e));
  }

  if (!have_header) throw ParseError("manifest has no header row");
  return m;
}

std::string serialize_manifest(const DatasetManifest& manifest) {
  std::string out;
  if (manifest.seed) out += "# seed=" + std::to_string(*manifest.seed) + "\n";
  out += "path,label,tech\n";
  for (const auto& e : manifest.entries)
    out += e.path + "," + to_string(e.label) + "," + to_string(e.tech) + "\n";
  return out;
}

DatasetManifest load_manifest(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open manifest: " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    DatasetManifest m = parse_manifest(buf.str());
    m.base_dir = path.has_parent_path() ? path.parent_path() : std::filesystem::path(".");
    return m;
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
  out << serialize_manifest(manifest);
  if (!out) throw std::runtime_error("write failed: " + path.string());
}

Dataset make_dataset(std::vector<RadioTrace> traces) {
  Dataset d;
  d.traces = std::move(traces);
  for (const auto& t : d.traces) ++d.class_counts[t.label];
  return d;
}

Dataset load_dataset(const DatasetManifest& manifest, const ParseOptions& opts) {
  std::vector<RadioTrace> traces;
  traces.reserve(manifest.entries.size());
  for (const auto& e : manifest.entries) {
    std::filesystem::path p(e.path);
    if (p.is_relative() && !manifest.base_dir.empty()) p = manifest.base_dir / p;
    RadioTrace t = load_trace_file(p, opts);
    if (t.label != e.label)
      throw ParseError(p.string() + ": label \"" + to_string(t.label) +
                       "\" does not match manifest label \"" + to_string(e.label) + "\"");
    if (t.tech() != e.tech)
      throw ParseError(p.string() + ": tech \"" + to_string(t.tech()) +
                       "\" does not match manifest tech \"" + to_string(e.tech) + "\"");
    traces.push_back(std::move(t));
  }
  return make_dataset(std::move(traces));
}

Dataset balance(const Dataset& dataset, std::size_t per_class, std::uint64_t seed) {
  for (const auto& [label, count] : dataset.class_counts)
    if (count < per_class)
      throw std::invalid_argument("per_class " + std::to_string(per_class) +
                                  " exceeds count " + std::to_string(count) +
                                  " of class " + to_string(label));

  std::vector<std::size_t> selected;
  for (const auto& [label, count] : dataset.class_counts) {
    std::vector<std::size_t> idx;
    for (std::size_t i = 0; i < dataset.traces.size(); ++i)
      if (dataset.traces[i].label == label) idx.push_back(i);
    Rng rng(derive_seed(seed, "balance/" + to_string(label)));
    rng.shuffle(idx);
    idx.resize(per_class);
    selected.insert(selected.end(), idx.begin(), idx.end());
  }
  std::sort(selected.begin(), selected.end());

  std::vector<RadioTrace> traces;
  traces.reserve(selected.size());
  for (std::size_t i : selected) traces.push_back(dataset.traces[i]);
  return make_dataset(std::move(traces));
}

}  // namespace rtclass
