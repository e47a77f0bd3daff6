#pragma once

#include <compare>
#include <cstdint>
#include <functional>
#include <optional>
#include <set>
#include <string>
#include <string_view>

#include "locproof/error.hpp"
#include "locproof/time.hpp"

namespace locproof {

using LocationId = std::string;
using DeviceId = std::string;
using UserId = std::string;

/// Wi-Fi transmitter identity. Equality, ordering and hashing key on the
/// BSSID alone; the SSID travels along as reporting metadata.
struct NetworkId {
  std::string bssid;  // canonical lowercase "aa:bb:cc:dd:ee:ff"
  std::string ssid;

  NetworkId() = default;
  explicit NetworkId(std::string bssid_value, std::string ssid_value = {})
      : bssid(std::move(bssid_value)), ssid(std::move(ssid_value)) {}

  friend bool operator==(const NetworkId& a, const NetworkId& b) noexcept {
    return a.bssid == b.bssid;
  }
  friend std::strong_ordering operator<=>(const NetworkId& a,
                                          const NetworkId& b) noexcept {
    return a.bssid <=> b.bssid;
  }
};

/// Lowercases and validates a colon-separated MAC address; nullopt when the
/// input does not match ^([0-9a-f]{2}:){5}[0-9a-f]{2}$ after lowercasing.
std::optional<std::string> normalize_bssid(std::string_view raw);

enum class SignalType { Wifi };

enum class ChannelWidth { Mhz20, Mhz40, Mhz80, Mhz80Plus80, Mhz160 };
std::string_view to_string(ChannelWidth w);
/// Android scan-result codes: 0=20, 1=40, 2=80, 3=80+80, 4=160 MHz.
std::optional<ChannelWidth> channel_width_from_code(int code);
int channel_width_code(ChannelWidth w);

struct RadioMeta {
  std::string capabilities;
  std::optional<int> frequency_mhz;
  std::optional<int> level_dbm;
  int centerfreq0_mhz = 0;
  int centerfreq1_mhz = 0;
  ChannelWidth channel_width = ChannelWidth::Mhz20;
};

struct GeoFix {
  double latitude = 0.0;
  double longitude = 0.0;
  double altitude = 0.0;
  double accuracy = 0.0;
};

struct Observation {
  std::uint64_t id = 0;
  Timestamp obs_time{};
  LocationId location;
  DeviceId device;
  SignalType signal_type = SignalType::Wifi;
  NetworkId transmitter;
  RadioMeta radio;
  std::optional<GeoFix> position;
};

struct Location {
  LocationId id;
  std::string name;
  GeoFix coordinates;
};

struct Device {
  DeviceId id;
  std::string name;
  UserId user;
};

struct User {
  UserId id;
  std::string name;
};

inline constexpr Timestamp kMinObservationTime{
    std::chrono::seconds{946684800}};  // 2000-01-01T00:00:00Z

/// Returns the observation with a normalized transmitter address, or throws
/// Error{MalformedBssid | OutOfRangeField | InvalidTimestamp}. Idempotent.
Observation validate_observation(Observation raw);

struct LocationClaim {
  DeviceId claimant;
  LocationId loc;
  Timestamp time{};
  std::set<NetworkId> evidence;
  Timestamp submitted_at{};
};

struct LocationCertificate {
  LocationClaim claim;
  bool proof = false;
  Duration proof_delta{0};
  TimeWindow span;
  int witness_count = 0;
  Timestamp issued_at{};
  std::string engine_config_digest;
  std::optional<std::string> reason;
};

inline constexpr std::string_view kReasonLocationMismatch = "LOCATION_MISMATCH";

}  // namespace locproof

template <>
struct std::hash<locproof::NetworkId> {
  std::size_t operator()(const locproof::NetworkId& id) const noexcept {
    return std::hash<std::string>{}(id.bssid);
  }
};
