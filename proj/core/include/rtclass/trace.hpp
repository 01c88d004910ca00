#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace rtclass {

enum class Label { Idle = 0, Bicycle = 1, CarLike = 2 };
enum class Tech { WlanCsi, Uwb };
enum class Antenna { Directional, Omnidirectional };

std::string to_string(Label l);
std::string to_string(Tech t);
std::string to_string(Antenna a);
std::optional<Label> parse_label(const std::string& s);
std::optional<Tech> parse_tech(const std::string& s);
std::optional<Antenna> parse_antenna(const std::string& s);

/// One WLAN CSI observation: RSSI plus the subcarrier amplitude vectors of
/// the three training fields. Amplitudes are linear magnitudes as reported
/// by the transceiver; RSSI is the reported integer dBm.
struct CsiFrame {
  double t = 0.0;  // seconds since trace start
  int rssi = 0;
  std::vector<double> lltf;
  std::vector<double> ht;
  std::vector<double> stbc;
  std::optional<double> rxp;
};

/// One UWB observation: first-path power, channel power, received power and
/// the CIR accumulator magnitudes windowed around the first path.
struct UwbFrame {
  double t = 0.0;
  double fpp = 0.0;
  double cir_power = 0.0;
  double rxp = 0.0;
  std::vector<double> cir;
};

struct LinkMeta {
  double tx_rx_distance_m = 0.0;
  double antenna_height_m = 0.0;
  Antenna antenna = Antenna::Directional;
  std::string site;
};

constexpr std::size_t kCsiSubcarriers = 64;

/// One recorded passage (or idle window) on a single radio link.
/// Immutable by convention once built; safe to share across workers.
struct RadioTrace {
  std::string id;
  Label label = Label::Idle;
  LinkMeta link;
  std::variant<std::vector<CsiFrame>, std::vector<UwbFrame>> frames;

  Tech tech() const { return frames.index() == 0 ? Tech::WlanCsi : Tech::Uwb; }
  const std::vector<CsiFrame>& csi() const { return std::get<0>(frames); }
  const std::vector<UwbFrame>& uwb() const { return std::get<1>(frames); }
  std::size_t frame_count() const {
    return frames.index() == 0 ? csi().size() : uwb().size();
  }
  /// CIR vector length of the first frame (0 for CSI traces).
  std::size_t cir_length() const {
    if (tech() != Tech::Uwb || uwb().empty()) return 0;
    return uwb().front().cir.size();
  }
};

/// A violated invariant. frame == -1 means the violation is trace-level.
struct Violation {
  std::string field;
  std::ptrdiff_t frame = -1;
  std::string detail;

  std::string str() const;
};

/// Pure invariant check; violations are data, not faults. Empty result means
/// the trace satisfies every type invariant.
std::vector<Violation> validate_trace(const RadioTrace& trace);

}  // namespace rtclass
