#include "rtclass/trace.hpp"

#include <cmath>

namespace rtclass {

std::string to_string(Label l) {
  switch (l) {
    case Label::Idle: return "idle";
    case Label::Bicycle: return "bicycle";
    case Label::CarLike: return "car_like";
  }
  return "?";
}

std::string to_string(Tech t) { return t == Tech::WlanCsi ? "wlan_csi" : "uwb"; }

std::string to_string(Antenna a) {
  return a == Antenna::Directional ? "directional" : "omnidirectional";
}

std::optional<Label> parse_label(const std::string& s) {
  if (s == "idle") return Label::Idle;
  if (s == "bicycle") return Label::Bicycle;
  if (s == "car_like") return Label::CarLike;
  return std::nullopt;
}

std::optional<Tech> parse_tech(const std::string& s) {
  if (s == "wlan_csi") return Tech::WlanCsi;
  if (s == "uwb") return Tech::Uwb;
  return std::nullopt;
}

std::optional<Antenna> parse_antenna(const std::string& s) {
  if (s == "directional") return Antenna::Directional;
  if (s == "omnidirectional") return Antenna::Omnidirectional;
  return std::nullopt;
}

std::string Violation::str() const {
  std::string out = field;
  if (frame >= 0) out += " (frame " + std::to_string(frame) + ")";
  out += ": " + detail;
  return out;
}

namespace {

void check_amp_vector(const std::vector<double>& v, const char* field,
                      std::ptrdiff_t frame, std::size_t expected_len,
                      std::vector<Violation>& out) {
  if (v.size() != expected_len) {
    out.push_back({field, frame,
                   "length " + std::to_string(v.size()) + ", expected " +
                       std::to_string(expected_len)});
  }
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (!std::isfinite(v[i]) || v[i] < 0.0) {
      out.push_back({field, frame, "non-finite or negative amplitude at index " +
                                       std::to_string(i)});
      break;
    }
  }
}

}  // namespace

std::vector<Violation> validate_trace(const RadioTrace& trace) {
  std::vector<Violation> out;

  if (trace.link.tx_rx_distance_m <= 0.0)
    out.push_back({"link.distance_m", -1, "must be > 0"});
  if (trace.link.antenna_height_m <= 0.0)
    out.push_back({"link.antenna_height_m", -1, "must be > 0"});

  if (trace.frame_count() == 0) {
    out.push_back({"frames", -1, "trace has no frames"});
    return out;
  }

  if (trace.tech() == Tech::WlanCsi) {
    const auto& frames = trace.csi();
    double prev_t = -1.0;
    for (std::size_t i = 0; i < frames.size(); ++i) {
      const auto& f = frames[i];
      auto fi = static_cast<std::ptrdiff_t>(i);
      if (!std::isfinite(f.t) || (i > 0 && f.t <= prev_t))
        out.push_back({"t", fi, "timestamps must be strictly increasing"});
      prev_t = f.t;
      check_amp_vector(f.lltf, "lltf", fi, kCsiSubcarriers, out);
      check_amp_vector(f.ht, "ht", fi, kCsiSubcarriers, out);
      check_amp_vector(f.stbc, "stbc", fi, kCsiSubcarriers, out);
      if (f.rxp && (!std::isfinite(*f.rxp) || *f.rxp < 0.0))
        out.push_back({"rxp", fi, "must be finite and >= 0"});
    }
  } else {
    const auto& frames = trace.uwb();
    const std::size_t cir_len = frames.front().cir.size();
    if (cir_len == 0) out.push_back({"cir", 0, "CIR vector is empty"});
    double prev_t = -1.0;
    for (std::size_t i = 0; i < frames.size(); ++i) {
      const auto& f = frames[i];
      auto fi = static_cast<std::ptrdiff_t>(i);
      if (!std::isfinite(f.t) || (i > 0 && f.t <= prev_t))
        out.push_back({"t", fi, "timestamps must be strictly increasing"});
      prev_t = f.t;
      if (!std::isfinite(f.fpp) || f.fpp < 0.0)
        out.push_back({"fpp", fi, "must be finite and >= 0"});
      if (!std::isfinite(f.cir_power) || f.cir_power <= 0.0)
        out.push_back({"cir_power", fi, "must be finite and > 0"});
      if (!std::isfinite(f.rxp) || f.rxp < 0.0)
        out.push_back({"rxp", fi, "must be finite and >= 0"});
      check_amp_vector(f.cir, "cir", fi, cir_len, out);
    }
  }
  return out;
}

}  // namespace rtclass
