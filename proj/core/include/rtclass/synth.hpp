#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>

#include "rtclass/io.hpp"
#include "rtclass/trace.hpp"

namespace rtclass {

/// Gaussian attenuation trough: depth is the fractional channel loss at the
/// dip center, width_s the full width at half maximum in seconds.
struct DipModel {
  double depth = 0.0;
  double width_s = 0.0;
};

/// Per-label dip defaults: idle has none, bicycles carve a narrow shallow
/// trough, car-like vehicles a deeper and wider one with stronger ripple.
DipModel default_dip(Label label);

struct ScenarioConfig {
  Tech tech = Tech::Uwb;
  Label label = Label::Idle;
  double duration_s = 10.0;
  double sample_rate_hz = 0.0;           // 0 = 80 Hz CSI / 40 Hz UWB
  std::optional<DipModel> dip;           // unset = default_dip(label)
  std::optional<double> dip_center_s;    // unset = middle with seeded jitter
  /// Per-trace dip depth multiplier drawn from [1-spread, 1+1.5*spread]:
  /// different vehicles, speeds and lateral positions attenuate the link by
  /// different amounts, so class depth distributions overlap at the tails.
  double depth_spread = 0.35;
  double noise_sigma = 0.08;             // relative channel noise
  double ripple_amp = 0.10;              // passage-modulated fading ripple
  double ripple_freq_hz = 2.0;
  double subcarrier_gain_depth = 0.3;    // CSI frequency-selective profile
  std::size_t cir_length = 32;
  std::uint64_t seed = 0;
};

double effective_sample_rate(const ScenarioConfig& config);

/// One labeled trace, deterministic per seed. Noise sigma 0 with an idle
/// label yields constant series.
RadioTrace generate_trace(const ScenarioConfig& config);

struct GeneratedDataset {
  Dataset dataset;
  DatasetManifest manifest;  // paths relative to the output directory
};

/// Balanced labeled dataset written as JSONL trace files plus a manifest
/// (manifest.csv) carrying the master seed. Reruns with the same seed are
/// byte-identical.
GeneratedDataset generate_dataset(const std::map<Label, std::size_t>& per_class,
                                  const ScenarioConfig& base,
                                  const std::filesystem::path& out_dir,
                                  std::uint64_t seed);

/// Same traces and seeding as generate_dataset, no files written.
Dataset generate_dataset_in_memory(const std::map<Label, std::size_t>& per_class,
                                   const ScenarioConfig& base, std::uint64_t seed);

}  // namespace rtclass
