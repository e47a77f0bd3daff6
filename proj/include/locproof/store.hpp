#pragma once

#include <filesystem>
#include <fstream>
#include <iosfwd>
#include <map>
#include <optional>
#include <set>
#include <shared_mutex>
#include <span>
#include <vector>

#include "locproof/types.hpp"

namespace locproof {

struct IngestReport {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::map<std::string, std::size_t> reasons;

  void add_rejection(const std::string& reason) {
    ++rejected;
    ++reasons[reason];
  }
  void merge(const IngestReport& other);
};

/// Selection predicate over the observation relation. At least one field
/// must be set.
struct ObsFilter {
  std::optional<TimeWindow> time_window;
  std::optional<LocationId> location;
  std::optional<DeviceId> device;

  bool empty() const noexcept {
    return !time_window && !location && !device;
  }
};

/// Append-only observation store with location/device/user registries.
/// When bound to a directory it persists as `observations.log` (one JSON
/// record per line) plus `registry.json`, replayed on open. Single writer,
/// concurrent readers.
class ObservationStore {
 public:
  ObservationStore() = default;
  explicit ObservationStore(const std::filesystem::path& dir);

  ObservationStore(const ObservationStore&) = delete;
  ObservationStore& operator=(const ObservationStore&) = delete;

  /// Parses a Table-3 style CSV (sniffing the delimiter among comma,
  /// semicolon and tab) and appends every valid row. Locations and devices
  /// are auto-registered. Throws MissingColumn/EmptySource for unusable
  /// sources; per-row failures are counted in the report instead.
  IngestReport ingest_csv(std::istream& in,
                          const std::optional<DeviceId>& device_hint = {});

  /// Validates, registers referenced location/device, assigns the id and
  /// persists. Returns the assigned id.
  std::uint64_t append(Observation obs);

  void register_location(Location loc);
  void register_device(Device dev);
  void register_user(User user);

  /// σ over the observation relation, ordered by (location, obs_time,
  /// device, bssid, id). Throws when the filter is empty or references an
  /// unregistered location/device.
  std::vector<Observation> query(const ObsFilter& filter) const;

  std::vector<Observation> all() const;
  std::size_t size() const;

  std::map<LocationId, Location> locations() const;
  std::map<DeviceId, Device> devices() const;
  std::map<UserId, User> users() const;

 private:
  std::uint64_t append_locked(Observation obs, bool persist);
  void register_location_locked(Location loc);
  void register_device_locked(Device dev);
  void write_registry_locked();
  void load(const std::filesystem::path& dir);

  mutable std::shared_mutex mutex_;
  std::vector<Observation> observations_;
  std::map<LocationId, Location> locations_;
  std::map<DeviceId, Device> devices_;
  std::map<UserId, User> users_;
  std::uint64_t next_id_ = 1;

  std::filesystem::path dir_;  // empty => in-memory only
  std::ofstream log_;
};

/// π transmitterID with duplicate elimination.
std::set<NetworkId> distinct_transmitters(std::span<const Observation> obs);

/// Raw scan multiplicity per transmitter; counts sum to |obs|.
std::map<NetworkId, std::size_t> occurrence_counts(
    std::span<const Observation> obs);

/// Table-3 CSV column names, in the order emitted by write_csv.
const std::vector<std::string>& csv_columns();

/// Writes observations in the same CSV schema ingest_csv accepts; date and
/// time columns are rendered in Europe/Lisbon local time.
void write_csv(std::ostream& out, std::span<const Observation> obs);

}  // namespace locproof
