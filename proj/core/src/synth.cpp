#include "rtclass/synth.hpp"

#include <cmath>
#include <cstdio>
#include <numbers>
#include <stdexcept>

#include "rtclass/rng.hpp"

namespace rtclass {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;
constexpr double kFwhmToSigma = 2.3548200450309493;  // 2*sqrt(2*ln 2)

constexpr double kUwbFppBase = 0.55;
constexpr double kUwbCirPowerBase = 1.1;
constexpr double kCsiAmpBase = 20.0;
constexpr double kRssiBaseDbm = -40.0;

double clamp_min(double v, double lo) { return v < lo ? lo : v; }

// Values are quantized the way coarse transceiver reports are; this also
// keeps the JSONL files compact and makes in-memory traces bit-identical to
// their serialized form.
double quant1(double v) { return std::round(v * 10.0) / 10.0; }
double quant4(double v) { return std::round(v * 1e4) / 1e4; }

struct DipShape {
  double depth = 0.0;
  double center = 0.0;
  double sigma = 0.0;

  double at(double t) const {
    if (depth <= 0.0 || sigma <= 0.0) return 0.0;
    const double d = (t - center) / sigma;
    return std::exp(-0.5 * d * d);
  }
};

void validate(const ScenarioConfig& c) {
  if (c.duration_s <= 0.0) throw std::invalid_argument("synth: duration must be > 0");
  if (c.sample_rate_hz < 0.0) throw std::invalid_argument("synth: negative sample rate");
  if (c.noise_sigma < 0.0) throw std::invalid_argument("synth: negative noise sigma");
  if (c.depth_spread < 0.0) throw std::invalid_argument("synth: negative depth spread");
  if (c.cir_length < 2) throw std::invalid_argument("synth: cir_length must be >= 2");
  const DipModel dip = c.dip ? *c.dip : default_dip(c.label);
  if (dip.depth < 0.0 || dip.depth >= 1.0)
    throw std::invalid_argument("synth: dip depth must be in [0, 1)");
  if (dip.depth > 0.0 && dip.width_s <= 0.0)
    throw std::invalid_argument("synth: dip width must be > 0");
}

}  // namespace

DipModel default_dip(Label label) {
  switch (label) {
    case Label::Idle: return {0.0, 0.0};
    case Label::Bicycle: return {0.33, 0.8};
    case Label::CarLike: return {0.5, 1.8};
  }
  return {};
}

double effective_sample_rate(const ScenarioConfig& config) {
  if (config.sample_rate_hz > 0.0) return config.sample_rate_hz;
  return config.tech == Tech::WlanCsi ? 80.0 : 40.0;
}

RadioTrace generate_trace(const ScenarioConfig& config) {
  validate(config);
  Rng rng(config.seed);

  const double rate = effective_sample_rate(config);
  const auto n = static_cast<std::size_t>(std::llround(config.duration_s * rate));
  if (n == 0) throw std::invalid_argument("synth: zero frames");

  const DipModel dip = config.dip ? *config.dip : default_dip(config.label);
  DipShape shape;
  // bicycles only ever dip deeper than their nominal depth; car-like dips
  // reach down into the bicycle range, so the class depth distributions
  // overlap the way mixed traffic does
  const double depth_u = rng.next_double();
  const double s = config.depth_spread;
  const double depth_mult = config.label == Label::CarLike
                                ? 1.0 - s + 2.5 * s * depth_u
                                : 1.0 + 2.5 * s * depth_u;
  shape.depth = std::min(dip.depth * depth_mult, 0.95);
  shape.sigma = dip.width_s / kFwhmToSigma;
  const double jitter = rng.next_uniform(-1.0, 1.0);  // drawn even when unused
  shape.center = config.dip_center_s
                     ? *config.dip_center_s
                     : config.duration_s * (0.5 + 0.08 * jitter);

  const double ripple_amp =
      config.ripple_amp * (config.label == Label::CarLike ? 1.8 : 1.0);
  const double ripple_phase = rng.next_uniform(0.0, kTwoPi);
  const double sigma = config.noise_sigma;

  RadioTrace trace;
  trace.label = config.label;
  trace.link.antenna_height_m = 1.0;
  if (config.label == Label::CarLike) {
    trace.link.tx_rx_distance_m = 7.0;
    trace.link.site = "road";
  } else {
    trace.link.tx_rx_distance_m = 4.0;
    trace.link.site = "cycle_path";
  }

  auto ripple_at = [&](double t, double g) {
    return ripple_amp * g * std::sin(kTwoPi * config.ripple_freq_hz * (t - shape.center) +
                                     ripple_phase);
  };

  if (config.tech == Tech::WlanCsi) {
    trace.link.antenna = Antenna::Directional;
    const double phi_gain = rng.next_uniform(0.0, kTwoPi);
    const double phi_depth = rng.next_uniform(0.0, kTwoPi);

    std::vector<double> gain(kCsiSubcarriers), depth_k(kCsiSubcarriers);
    for (std::size_t k = 0; k < kCsiSubcarriers; ++k) {
      const double x = static_cast<double>(k) / kCsiSubcarriers;
      gain[k] = 1.0 + config.subcarrier_gain_depth * std::sin(kTwoPi * 2.0 * x + phi_gain);
      depth_k[k] = shape.depth * (0.7 + 0.3 * std::sin(kTwoPi * 3.0 * x + phi_depth));
    }

    std::vector<CsiFrame> frames(n);
    for (std::size_t i = 0; i < n; ++i) {
      CsiFrame& f = frames[i];
      f.t = static_cast<double>(i) / rate;
      const double g = shape.at(f.t);
      const double r = ripple_at(f.t, g);

      double mean_chan = 0.0;
      const double n_rssi = rng.next_normal();
      const double n_rxp = rng.next_normal();
      f.lltf.resize(kCsiSubcarriers);
      f.ht.resize(kCsiSubcarriers);
      f.stbc.resize(kCsiSubcarriers);
      const double amp_noise = kCsiAmpBase * sigma;
      for (std::size_t k = 0; k < kCsiSubcarriers; ++k) {
        const double chan = clamp_min(1.0 - depth_k[k] * g + r, 0.02);
        mean_chan += chan;
        const double amp = kCsiAmpBase * gain[k] * chan;
        f.lltf[k] = quant1(clamp_min(amp + amp_noise * rng.next_normal(), 0.0));
        f.ht[k] = quant1(clamp_min(0.97 * amp + amp_noise * rng.next_normal(), 0.0));
        f.stbc[k] = quant1(clamp_min(0.94 * amp + amp_noise * rng.next_normal(), 0.0));
      }
      mean_chan /= static_cast<double>(kCsiSubcarriers);
      // 20*log10 maps the linear channel factor to dB; the dB noise floor is
      // independent of the channel state, like the receiver's
      f.rssi = static_cast<int>(std::lround(kRssiBaseDbm + 20.0 * std::log10(mean_chan) +
                                            12.0 * sigma * n_rssi));
      f.rxp = quant4(clamp_min(mean_chan * mean_chan + sigma * n_rxp, 0.0));
    }
    trace.frames = std::move(frames);
  } else {
    trace.link.antenna = Antenna::Omnidirectional;
    const std::size_t len = config.cir_length;
    const auto center = static_cast<double>(len / 2 - 1);  // first-path sample
    std::vector<double> profile(len), attn_weight(len);
    for (std::size_t j = 0; j < len; ++j) {
      const double d = static_cast<double>(j) - center;
      profile[j] = 0.05 + std::exp(-0.5 * d * d / 4.0) +
                   (d > 0.0 ? 0.25 * std::exp(-d / 6.0) : 0.0);
      attn_weight[j] = std::exp(-0.5 * d * d / 16.0);
    }

    std::vector<UwbFrame> frames(n);
    for (std::size_t i = 0; i < n; ++i) {
      UwbFrame& f = frames[i];
      f.t = static_cast<double>(i) / rate;
      const double g = shape.at(f.t);
      const double r = ripple_at(f.t, g);

      // the first path loses depth*g of its amplitude; total channel power
      // dips less because multipath picks up part of the scattered energy
      const double atten = clamp_min(1.0 - shape.depth * g + r, 0.05);
      const double cirp_clean =
          kUwbCirPowerBase * clamp_min(1.0 - 0.55 * shape.depth * g + 0.4 * r, 0.05);

      // first-path power estimates are markedly noisier than the total
      // channel power the accumulator integrates
      f.fpp = quant4(clamp_min(kUwbFppBase * atten * atten +
                                   1.5 * kUwbFppBase * sigma * rng.next_normal(),
                               0.0));
      f.cir_power = quant4(
          clamp_min(cirp_clean + kUwbCirPowerBase * sigma * rng.next_normal(), 1e-4));
      f.rxp = quant4(clamp_min(
          0.9 * cirp_clean + kUwbCirPowerBase * sigma * rng.next_normal(), 0.0));
      f.cir.resize(len);
      for (std::size_t j = 0; j < len; ++j)
        f.cir[j] = quant4(clamp_min(profile[j] * (1.0 - shape.depth * g * attn_weight[j]) +
                                        0.6 * sigma * rng.next_normal(),
                                    0.0));
    }
    trace.frames = std::move(frames);
  }

  char suffix[24];
  std::snprintf(suffix, sizeof suffix, "%016llx",
                static_cast<unsigned long long>(config.seed));
  trace.id = "synth-" + to_string(config.tech) + "-" + to_string(config.label) + "-" + suffix;
  return trace;
}

namespace {

std::vector<RadioTrace> generate_traces(const std::map<Label, std::size_t>& per_class,
                                        const ScenarioConfig& base, std::uint64_t seed) {
  if (per_class.empty()) throw std::invalid_argument("generate_dataset: no classes");
  for (const auto& [label, count] : per_class)
    if (count == 0)
      throw std::invalid_argument("generate_dataset: zero count for class " +
                                  to_string(label));

  std::vector<RadioTrace> traces;
  for (const auto& [label, count] : per_class) {
    for (std::size_t i = 0; i < count; ++i) {
      ScenarioConfig config = base;
      config.label = label;
      config.seed = derive_seed(seed, to_string(label) + "/" + std::to_string(i));
      RadioTrace trace = generate_trace(config);

      char idx[16];
      std::snprintf(idx, sizeof idx, "%04zu", i);
      trace.id = to_string(config.tech) + "-" + to_string(label) + "-" + idx;
      traces.push_back(std::move(trace));
    }
  }
  return traces;
}

}  // namespace

GeneratedDataset generate_dataset(const std::map<Label, std::size_t>& per_class,
                                  const ScenarioConfig& base,
                                  const std::filesystem::path& out_dir,
                                  std::uint64_t seed) {
  auto traces = generate_traces(per_class, base, seed);
  std::filesystem::create_directories(out_dir);

  GeneratedDataset out;
  out.manifest.seed = seed;
  out.manifest.base_dir = out_dir;
  for (const auto& trace : traces) {
    const std::string filename = trace.id + ".jsonl";
    write_trace_file(out_dir / filename, trace);
    out.manifest.entries.push_back({filename, trace.label, trace.tech()});
  }

  write_manifest(out_dir / "manifest.csv", out.manifest);
  out.dataset = make_dataset(std::move(traces));
  return out;
}

Dataset generate_dataset_in_memory(const std::map<Label, std::size_t>& per_class,
                                   const ScenarioConfig& base, std::uint64_t seed) {
  return make_dataset(generate_traces(per_class, base, seed));
}

}  // namespace rtclass
