#pragma once

#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rtclass/trace.hpp"

namespace rtclass {

/// One per-frame channel parameter time series of one trace.
struct ChannelSeries {
  std::string name;
  std::vector<double> values;
  std::string trace_id;
};

struct SmoothingConfig {
  double sigma = 0.0;              // in samples; 0 = no smoothing
  int truncation_radius = 0;       // 0 = ceil(4*sigma)
};

/// Named filter grid f0..f5 -> sigma in {0,1,2,3,4,5} samples.
struct FilterSetting {
  std::string name;
  double sigma;
};
const std::vector<FilterSetting>& filter_grid();

/// Sigma for a grid name ("f0".."f5"); nullopt for unknown names.
std::optional<double> filter_sigma(const std::string& name);

/// Discrete Gaussian kernel exp(-i^2/2sigma^2) for i in [-radius, radius],
/// normalized to unit sum. Returned vector has 2*radius+1 taps.
std::vector<double> gaussian_kernel(double sigma, int truncation_radius = 0);

/// Convolve with the unit-sum Gaussian kernel, mirror-handling the
/// boundaries. sigma = 0 returns the input unchanged. Output length equals
/// input length.
std::vector<double> gaussian_smooth(std::span<const double> series, double sigma,
                                    int truncation_radius = 0);

/// (x - min) / (max - min); a constant series maps to all zeros so idle
/// traces stay finite.
std::vector<double> min_max_scale(std::span<const double> series);

/// All channel parameter series a trace exposes.
///   CSI: RSSI, L_AMP_SC1..64, H_AMP_SC1..64, S_AMP_SC1..64, G1..G8,
///        RXP when present.
///   UWB: FPP, CIR_POWER, FC, RXP, A_0..A_{N-1}, A_ALL.
std::vector<ChannelSeries> derive_parameters(const RadioTrace& trace);

/// Single named parameter, or nullopt when the trace does not expose it.
std::optional<ChannelSeries> derive_parameter(const RadioTrace& trace,
                                              const std::string& name);

/// Parameter names derive_parameters would emit for a trace of this shape.
std::vector<std::string> parameter_names(Tech tech, std::size_t cir_length,
                                         bool has_rxp = true);

struct WindowConfig {
  double window_s = 2.0;
  /// Idle threshold as a multiple of the trigger series' median absolute
  /// deviation; windows whose mean absolute deviation stays below it are
  /// treated as idle and centered.
  double idle_theta_mad = 3.0;
};

/// Sub-trace of window_s seconds centered on the maximum-deviation region of
/// the trigger series (RSSI for CSI, FC for UWB). Idle traces return the
/// centered window. Ties break toward the center.
RadioTrace extract_window(const RadioTrace& trace, const WindowConfig& config = {});

}  // namespace rtclass
