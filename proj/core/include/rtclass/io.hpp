#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "rtclass/trace.hpp"

namespace rtclass {

/// Malformed input (bad JSON, bad CSV, wrong types). what() carries the
/// line number when one is known.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Structurally valid input that breaks a trace invariant.
class ValidationError : public std::runtime_error {
 public:
  ValidationError(std::string msg, std::vector<Violation> violations)
      : std::runtime_error(std::move(msg)), violations(std::move(violations)) {}
  std::vector<Violation> violations;
};

struct ParseOptions {
  /// UWB CIR vectors longer than this are windowed around the first path on
  /// load; 0 disables windowing.
  std::size_t cir_window = 32;
};

/// Parse one JSONL trace file: header object on line 1, one frame object per
/// line after it. Field order inside objects is irrelevant.
RadioTrace parse_trace_file(std::string_view bytes, const ParseOptions& opts = {});

/// Canonical JSONL serialization: fixed key order, shortest round-trip
/// decimals. serialize(parse(serialize(parse(x)))) == serialize(parse(x)).
std::string serialize_trace(const RadioTrace& trace);

RadioTrace load_trace_file(const std::filesystem::path& path, const ParseOptions& opts = {});
void write_trace_file(const std::filesystem::path& path, const RadioTrace& trace);

struct ManifestEntry {
  std::string path;
  Label label = Label::Idle;
  Tech tech = Tech::Uwb;
};

struct DatasetManifest {
  std::vector<ManifestEntry> entries;
  std::optional<std::uint64_t> seed;  // `# seed=<u64>` pragma
  std::filesystem::path base_dir;     // relative entry paths resolve against this
};

DatasetManifest parse_manifest(std::string_view bytes);
std::string serialize_manifest(const DatasetManifest& manifest);
DatasetManifest load_manifest(const std::filesystem::path& path);
void write_manifest(const std::filesystem::path& path, const DatasetManifest& manifest);

struct Dataset {
  std::vector<RadioTrace> traces;
  std::map<Label, std::size_t> class_counts;
};

Dataset make_dataset(std::vector<RadioTrace> traces);

/// Load every manifest entry in order. The first failing file aborts the
/// load with its path in the error message.
Dataset load_dataset(const DatasetManifest& manifest, const ParseOptions& opts = {});

/// Seeded uniform subsample without replacement down to per_class traces per
/// label. Selected traces keep their dataset order.
Dataset balance(const Dataset& dataset, std::size_t per_class, std::uint64_t seed);

}  // namespace rtclass
