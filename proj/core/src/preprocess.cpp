#include "rtclass/preprocess.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace rtclass {

namespace {

double median_of(std::vector<double> v) {
  const std::size_t n = v.size();
  std::sort(v.begin(), v.end());
  return n % 2 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

/// Mirror an out-of-range index into [0, n): ... x1 x0 | x0 x1 ... xn-1 | xn-1 ...
std::size_t reflect_index(std::ptrdiff_t i, std::size_t n) {
  const std::ptrdiff_t period = 2 * static_cast<std::ptrdiff_t>(n);
  std::ptrdiff_t m = i % period;
  if (m < 0) m += period;
  return static_cast<std::size_t>(m < static_cast<std::ptrdiff_t>(n) ? m : period - 1 - m);
}

std::vector<double> mean_per_frame(const std::vector<UwbFrame>& frames) {
  std::vector<double> out;
  out.reserve(frames.size());
  for (const auto& f : frames) {
    double s = 0.0;
    for (double x : f.cir) s += x;
    out.push_back(s / static_cast<double>(f.cir.size()));
  }
  return out;
}

}  // namespace

const std::vector<FilterSetting>& filter_grid() {
  static const std::vector<FilterSetting> grid = {
      {"f0", 0.0}, {"f1", 1.0}, {"f2", 2.0}, {"f3", 3.0}, {"f4", 4.0}, {"f5", 5.0}};
  return grid;
}

std::optional<double> filter_sigma(const std::string& name) {
  for (const auto& f : filter_grid())
    if (f.name == name) return f.sigma;
  return std::nullopt;
}

std::vector<double> gaussian_kernel(double sigma, int truncation_radius) {
  if (sigma <= 0.0) return {1.0};
  const int radius = truncation_radius > 0
                         ? truncation_radius
                         : static_cast<int>(std::ceil(4.0 * sigma));
  std::vector<double> k(2 * static_cast<std::size_t>(radius) + 1);
  double sum = 0.0;
  for (int i = -radius; i <= radius; ++i) {
    double v = std::exp(-0.5 * (static_cast<double>(i) * i) / (sigma * sigma));
    k[static_cast<std::size_t>(i + radius)] = v;
    sum += v;
  }
  for (double& v : k) v /= sum;
  return k;
}

std::vector<double> gaussian_smooth(std::span<const double> series, double sigma,
                                    int truncation_radius) {
  if (series.empty()) throw std::invalid_argument("gaussian_smooth: empty series");
  if (sigma < 0.0) throw std::invalid_argument("gaussian_smooth: negative sigma");
  if (sigma == 0.0) return {series.begin(), series.end()};

  const auto kernel = gaussian_kernel(sigma, truncation_radius);
  const int radius = static_cast<int>(kernel.size() / 2);
  const std::size_t n = series.size();
  std::vector<double> out(n);
  for (std::size_t j = 0; j < n; ++j) {
    double acc = 0.0;
    for (int d = -radius; d <= radius; ++d) {
      std::size_t src = reflect_index(static_cast<std::ptrdiff_t>(j) + d, n);
      acc += kernel[static_cast<std::size_t>(d + radius)] * series[src];
    }
    out[j] = acc;
  }
  return out;
}

std::vector<double> min_max_scale(std::span<const double> series) {
  if (series.empty()) throw std::invalid_argument("min_max_scale: empty series");
  const auto [lo_it, hi_it] = std::minmax_element(series.begin(), series.end());
  const double lo = *lo_it, hi = *hi_it;
  std::vector<double> out(series.size());
  if (hi == lo) return out;  // degenerate range maps to zeros, not NaN
  const double inv = 1.0 / (hi - lo);
  for (std::size_t i = 0; i < series.size(); ++i) out[i] = (series[i] - lo) * inv;
  return out;
}

std::vector<ChannelSeries> derive_parameters(const RadioTrace& trace) {
  std::vector<ChannelSeries> out;
  const std::size_t n = trace.frame_count();
  auto series = [&](std::string name) -> std::vector<double>& {
    out.push_back({std::move(name), std::vector<double>(n), trace.id});
    return out.back().values;
  };

  if (trace.tech() == Tech::WlanCsi) {
    const auto& frames = trace.csi();
    {
      auto& v = series("RSSI");
      for (std::size_t i = 0; i < n; ++i) v[i] = frames[i].rssi;
    }
    struct Field {
      const char* prefix;
      const std::vector<double>& (*get)(const CsiFrame&);
    };
    static const Field fields[] = {
        {"L_AMP_SC", [](const CsiFrame& f) -> const std::vector<double>& { return f.lltf; }},
        {"H_AMP_SC", [](const CsiFrame& f) -> const std::vector<double>& { return f.ht; }},
        {"S_AMP_SC", [](const CsiFrame& f) -> const std::vector<double>& { return f.stbc; }},
    };
    for (const auto& field : fields) {
      for (std::size_t sc = 0; sc < kCsiSubcarriers; ++sc) {
        auto& v = series(field.prefix + std::to_string(sc + 1));
        for (std::size_t i = 0; i < n; ++i) v[i] = field.get(frames[i])[sc];
      }
    }
    // Eight groups of eight adjacent HT-LTF subcarriers, G1 = SCs 1-8.
    for (std::size_t g = 0; g < 8; ++g) {
      auto& v = series("G" + std::to_string(g + 1));
      for (std::size_t i = 0; i < n; ++i) {
        double s = 0.0;
        for (std::size_t sc = g * 8; sc < (g + 1) * 8; ++sc) s += frames[i].ht[sc];
        v[i] = s / 8.0;
      }
    }
    bool all_rxp = std::all_of(frames.begin(), frames.end(),
                               [](const CsiFrame& f) { return f.rxp.has_value(); });
    if (all_rxp) {
      auto& v = series("RXP");
      for (std::size_t i = 0; i < n; ++i) v[i] = *frames[i].rxp;
    }
  } else {
    const auto& frames = trace.uwb();
    {
      auto& v = series("FPP");
      for (std::size_t i = 0; i < n; ++i) v[i] = frames[i].fpp;
    }
    {
      auto& v = series("CIR_POWER");
      for (std::size_t i = 0; i < n; ++i) v[i] = frames[i].cir_power;
    }
    {
      auto& v = series("FC");
      for (std::size_t i = 0; i < n; ++i) v[i] = frames[i].fpp / frames[i].cir_power;
    }
    {
      auto& v = series("RXP");
      for (std::size_t i = 0; i < n; ++i) v[i] = frames[i].rxp;
    }
    const std::size_t cir_len = trace.cir_length();
    for (std::size_t j = 0; j < cir_len; ++j) {
      auto& v = series("A_" + std::to_string(j));
      for (std::size_t i = 0; i < n; ++i) v[i] = frames[i].cir[j];
    }
    {
      auto vals = mean_per_frame(frames);
      out.push_back({"A_ALL", std::move(vals), trace.id});
    }
  }
  return out;
}

std::optional<ChannelSeries> derive_parameter(const RadioTrace& trace,
                                              const std::string& name) {
  // Full derivation is cheap relative to training; keep one code path.
  for (auto& s : derive_parameters(trace))
    if (s.name == name) return std::move(s);
  return std::nullopt;
}

std::vector<std::string> parameter_names(Tech tech, std::size_t cir_length, bool has_rxp) {
  std::vector<std::string> out;
  if (tech == Tech::WlanCsi) {
    out.push_back("RSSI");
    for (const char* prefix : {"L_AMP_SC", "H_AMP_SC", "S_AMP_SC"})
      for (std::size_t sc = 1; sc <= kCsiSubcarriers; ++sc)
        out.push_back(prefix + std::to_string(sc));
    for (int g = 1; g <= 8; ++g) out.push_back("G" + std::to_string(g));
    if (has_rxp) out.push_back("RXP");
  } else {
    out.insert(out.end(), {"FPP", "CIR_POWER", "FC", "RXP"});
    for (std::size_t j = 0; j < cir_length; ++j) out.push_back("A_" + std::to_string(j));
    out.push_back("A_ALL");
  }
  return out;
}

RadioTrace extract_window(const RadioTrace& trace, const WindowConfig& config) {
  const std::size_t n = trace.frame_count();
  if (n < 2) throw std::invalid_argument("extract_window: trace too short");

  const std::string trigger_name = trace.tech() == Tech::WlanCsi ? "RSSI" : "FC";
  const auto trigger = derive_parameter(trace, trigger_name);
  const std::vector<double>& x = trigger->values;

  std::vector<double> ts(n);
  if (trace.tech() == Tech::WlanCsi)
    for (std::size_t i = 0; i < n; ++i) ts[i] = trace.csi()[i].t;
  else
    for (std::size_t i = 0; i < n; ++i) ts[i] = trace.uwb()[i].t;

  std::vector<double> dts(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) dts[i] = ts[i + 1] - ts[i];
  const double dt = median_of(dts);
  const auto w = static_cast<std::size_t>(std::llround(config.window_s / dt));
  if (w < 1 || w > n)
    throw std::invalid_argument("extract_window: trace shorter than window");

  const double med = median_of(x);
  std::vector<double> dev(n);
  for (std::size_t i = 0; i < n; ++i) dev[i] = std::abs(x[i] - med);
  const double mad = median_of(dev);

  const std::size_t centered = (n - w) / 2;
  std::size_t best_off = 0;
  double best_score = -1.0;
  std::size_t best_dist = n;
  for (std::size_t o = 0; o + w <= n; ++o) {
    double s = 0.0;
    for (std::size_t i = o; i < o + w; ++i) s += dev[i];
    const std::size_t dist = o > centered ? o - centered : centered - o;
    if (s > best_score || (s == best_score && dist < best_dist)) {
      best_score = s;
      best_dist = dist;
      best_off = o;
    }
  }

  // Below the deviation threshold there is nothing to lock onto; treat as idle.
  if (best_score / static_cast<double>(w) < config.idle_theta_mad * mad)
    best_off = centered;

  RadioTrace out;
  out.id = trace.id;
  out.label = trace.label;
  out.link = trace.link;
  if (trace.tech() == Tech::WlanCsi) {
    const auto& f = trace.csi();
    out.frames = std::vector<CsiFrame>(f.begin() + static_cast<std::ptrdiff_t>(best_off),
                                       f.begin() + static_cast<std::ptrdiff_t>(best_off + w));
  } else {
    const auto& f = trace.uwb();
    out.frames = std::vector<UwbFrame>(f.begin() + static_cast<std::ptrdiff_t>(best_off),
                                       f.begin() + static_cast<std::ptrdiff_t>(best_off + w));
  }
  return out;
}

}  // namespace rtclass
