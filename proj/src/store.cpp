#include "locproof/store.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <charconv>
#include <cstdio>
#include <istream>
#include <mutex>
#include <ostream>
#include <sstream>
#include <tuple>

#include "locproof/json_io.hpp"

namespace locproof {

namespace {

constexpr std::string_view kLogFile = "observations.log";
constexpr std::string_view kRegistryFile = "registry.json";

std::string lower(std::string_view s) {
  std::string out(s);
  for (char& c : out) c = static_cast<char>(std::tolower(static_cast<unsigned char>(c)));
  return out;
}

std::string strip(std::string_view s) {
  std::size_t b = 0;
  std::size_t e = s.size();
  while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
  while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
  return std::string(s.substr(b, e - b));
}

// Splits one physical line on `delim`, honoring double-quoted fields with
// "" escapes. Embedded newlines inside quotes are not supported.
std::vector<std::string> split_csv_line(std::string_view line, char delim) {
  std::vector<std::string> fields;
  std::string cur;
  bool quoted = false;
  for (std::size_t i = 0; i < line.size(); ++i) {
    char c = line[i];
    if (quoted) {
      if (c == '"') {
        if (i + 1 < line.size() && line[i + 1] == '"') {
          cur.push_back('"');
          ++i;
        } else {
          quoted = false;
        }
      } else {
        cur.push_back(c);
      }
    } else if (c == '"') {
      quoted = true;
    } else if (c == delim) {
      fields.push_back(std::move(cur));
      cur.clear();
    } else if (c != '\r') {
      cur.push_back(c);
    }
  }
  fields.push_back(std::move(cur));
  return fields;
}

char sniff_delimiter(std::string_view header) {
  constexpr std::array<char, 3> candidates{',', ';', '\t'};
  char best = ',';
  std::size_t best_count = 0;
  for (char cand : candidates) {
    bool quoted = false;
    std::size_t count = 0;
    for (char c : header) {
      if (c == '"') quoted = !quoted;
      else if (c == cand && !quoted) ++count;
    }
    if (count > best_count) {
      best_count = count;
      best = cand;
    }
  }
  return best;
}

std::optional<int> parse_int_cell(const std::string& cell,
                                  const std::string& field) {
  std::string v = strip(cell);
  if (v.empty()) return std::nullopt;
  int value = 0;
  auto [ptr, ec] = std::from_chars(v.data(), v.data() + v.size(), value);
  if (ec != std::errc{} || ptr != v.data() + v.size()) {
    // Some exporters render integers as "2412.0".
    char* end = nullptr;
    double d = std::strtod(v.c_str(), &end);
    if (end != v.c_str() + v.size()) {
      throw Error(Errc::ParseError, field, "bad integer '" + v + "'");
    }
    value = static_cast<int>(d);
  }
  return value;
}

std::optional<double> parse_double_cell(const std::string& cell,
                                        const std::string& field) {
  std::string v = strip(cell);
  if (v.empty()) return std::nullopt;
  char* end = nullptr;
  double value = std::strtod(v.c_str(), &end);
  if (end != v.c_str() + v.size()) {
    throw Error(Errc::ParseError, field, "bad number '" + v + "'");
  }
  return value;
}

void parse_date_cell(const std::string& cell, CivilTime& c) {
  std::string v = strip(cell);
  if (v.size() != 10 || v[4] != '-' || v[7] != '-') {
    throw Error(Errc::ParseError, "date", "expected YYYY-MM-DD, got '" + v + "'");
  }
  auto num = [&](std::size_t pos, std::size_t len) {
    int out = 0;
    auto [ptr, ec] = std::from_chars(v.data() + pos, v.data() + pos + len, out);
    if (ec != std::errc{} || ptr != v.data() + pos + len) {
      throw Error(Errc::ParseError, "date", "bad date '" + v + "'");
    }
    return out;
  };
  c.year = num(0, 4);
  c.month = num(5, 2);
  c.day = num(8, 2);
}

void parse_time_cell(const std::string& cell, CivilTime& c) {
  std::string v = strip(cell);
  if (v.size() != 8 || v[2] != ':' || v[5] != ':') {
    throw Error(Errc::ParseError, "time", "expected HH:MM:SS, got '" + v + "'");
  }
  auto num = [&](std::size_t pos) {
    int out = 0;
    auto [ptr, ec] = std::from_chars(v.data() + pos, v.data() + pos + 2, out);
    if (ec != std::errc{} || ptr != v.data() + pos + 2) {
      throw Error(Errc::ParseError, "time", "bad time '" + v + "'");
    }
    return out;
  };
  c.hour = num(0);
  c.minute = num(3);
  c.second = num(6);
}

std::string csv_escape(const std::string& field, char delim) {
  bool needs_quotes = field.find_first_of("\"\r\n") != std::string::npos ||
                      field.find(delim) != std::string::npos;
  if (!needs_quotes) return field;
  std::string out = "\"";
  for (char c : field) {
    if (c == '"') out += "\"\"";
    else out.push_back(c);
  }
  out.push_back('"');
  return out;
}

std::string format_coord(double value, int precision) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", precision, value);
  return buf;
}

}  // namespace

void IngestReport::merge(const IngestReport& other) {
  accepted += other.accepted;
  rejected += other.rejected;
  for (const auto& [reason, count] : other.reasons) {
    reasons[reason] += count;
  }
}

const std::vector<std::string>& csv_columns() {
  static const std::vector<std::string> cols{
      "device_id", "date",  "time",         "ref_name",  "latitude",
      "longitude", "altitude", "accuracy",  "SSID",      "BSSID",
      "capabilities", "frequency", "level", "centerfreq0", "centerfreq1",
      "channelwidth"};
  return cols;
}

ObservationStore::ObservationStore(const std::filesystem::path& dir) {
  load(dir);
}

void ObservationStore::load(const std::filesystem::path& dir) {
  namespace fs = std::filesystem;
  dir_ = dir;
  fs::create_directories(dir);

  const fs::path registry = dir / kRegistryFile;
  if (fs::exists(registry)) {
    std::ifstream in(registry);
    nlohmann::json j;
    try {
      in >> j;
    } catch (const nlohmann::json::exception& e) {
      throw Error(Errc::ParseError, "registry",
                  "unreadable registry.json: " + std::string(e.what()));
    }
    registry_from_json(j, locations_, devices_, users_);
  }

  const fs::path log = dir / kLogFile;
  if (fs::exists(log)) {
    std::ifstream in(log);
    std::string line;
    std::size_t lineno = 0;
    while (std::getline(in, line)) {
      ++lineno;
      if (strip(line).empty()) continue;
      Observation obs;
      try {
        obs = observation_from_json(nlohmann::json::parse(line));
      } catch (const nlohmann::json::exception& e) {
        throw Error(Errc::ParseError, "observations.log",
                    "line " + std::to_string(lineno) + ": " + e.what());
      }
      obs = validate_observation(std::move(obs));
      register_location_locked(
          Location{obs.location, obs.location,
                   obs.position.value_or(GeoFix{})});
      register_device_locked(Device{obs.device, obs.device, {}});
      next_id_ = std::max(next_id_, obs.id + 1);
      observations_.push_back(std::move(obs));
    }
  }

  log_.open(log, std::ios::app);
  if (!log_) {
    throw Error(Errc::IoError, "cannot open " + log.string());
  }
}

IngestReport ObservationStore::ingest_csv(
    std::istream& in, const std::optional<DeviceId>& device_hint) {
  std::string header_line;
  // Skip UTF-8 BOM and blank leading lines.
  while (std::getline(in, header_line)) {
    if (header_line.size() >= 3 && header_line[0] == '\xef' &&
        header_line[1] == '\xbb' && header_line[2] == '\xbf') {
      header_line.erase(0, 3);
    }
    if (!strip(header_line).empty()) break;
  }
  if (strip(header_line).empty()) {
    throw Error(Errc::EmptySource, "source has no header row");
  }

  const char delim = sniff_delimiter(header_line);
  const std::vector<std::string> header = split_csv_line(header_line, delim);

  std::map<std::string, std::size_t> index;
  for (std::size_t i = 0; i < header.size(); ++i) {
    index[lower(strip(header[i]))] = i;
  }
  std::vector<std::string> missing;
  for (const std::string& col : csv_columns()) {
    if (!index.contains(lower(col))) missing.push_back(col);
  }
  if (!missing.empty()) {
    std::string joined;
    for (const auto& m : missing) {
      if (!joined.empty()) joined += ", ";
      joined += m;
    }
    throw Error(Errc::MissingColumn, missing.front(),
                "header lacks required column(s): " + joined)
        .with_details(std::move(missing));
  }

  IngestReport report;
  std::string line;
  while (std::getline(in, line)) {
    if (strip(line).empty()) continue;
    std::vector<std::string> row = split_csv_line(line, delim);
    if (row.size() > header.size()) {
      report.add_rejection("ParseError(row)");
      continue;
    }
    row.resize(header.size());

    auto cell = [&](const char* name) -> const std::string& {
      return row[index.at(name)];
    };

    try {
      Observation obs;
      obs.device = strip(cell("device_id"));
      if (obs.device.empty()) {
        if (device_hint) obs.device = *device_hint;
        else throw Error(Errc::MissingField, "device_id", "empty device_id");
      }
      obs.location = strip(cell("ref_name"));
      if (obs.location.empty()) {
        throw Error(Errc::MissingField, "ref_name", "empty ref_name");
      }

      CivilTime local;
      parse_date_cell(cell("date"), local);
      parse_time_cell(cell("time"), local);
      obs.obs_time = lisbon_to_utc(local);

      std::string bssid = strip(cell("BSSID"));
      if (bssid.empty()) {
        throw Error(Errc::MalformedBssid, "empty BSSID");
      }
      obs.transmitter = NetworkId{bssid, cell("SSID")};

      obs.radio.capabilities = strip(cell("capabilities"));
      obs.radio.frequency_mhz = parse_int_cell(cell("frequency"), "frequency");
      obs.radio.level_dbm = parse_int_cell(cell("level"), "level");
      obs.radio.centerfreq0_mhz =
          parse_int_cell(cell("centerfreq0"), "centerfreq0").value_or(0);
      obs.radio.centerfreq1_mhz =
          parse_int_cell(cell("centerfreq1"), "centerfreq1").value_or(0);
      int cw_code = parse_int_cell(cell("channelwidth"), "channelwidth").value_or(0);
      auto cw = channel_width_from_code(cw_code);
      if (!cw) {
        throw Error(Errc::OutOfRangeField, "channelwidth",
                    "unknown channel width code " + std::to_string(cw_code));
      }
      obs.radio.channel_width = *cw;

      auto lat = parse_double_cell(cell("latitude"), "latitude");
      auto lon = parse_double_cell(cell("longitude"), "longitude");
      if (lat && lon) {
        GeoFix fix;
        fix.latitude = *lat;
        fix.longitude = *lon;
        fix.altitude = parse_double_cell(cell("altitude"), "altitude").value_or(0.0);
        fix.accuracy = parse_double_cell(cell("accuracy"), "accuracy").value_or(0.0);
        obs.position = fix;
      } else if (lat || lon) {
        throw Error(Errc::MissingField, lat ? "longitude" : "latitude",
                    "partial GPS fix");
      }

      append(std::move(obs));
      ++report.accepted;
    } catch (const Error& e) {
      report.add_rejection(e.reason());
    }
  }
  return report;
}

std::uint64_t ObservationStore::append(Observation obs) {
  obs = validate_observation(std::move(obs));
  std::unique_lock lock(mutex_);
  return append_locked(std::move(obs), /*persist=*/true);
}

std::uint64_t ObservationStore::append_locked(Observation obs, bool persist) {
  obs.id = next_id_++;
  register_location_locked(
      Location{obs.location, obs.location, obs.position.value_or(GeoFix{})});
  register_device_locked(Device{obs.device, obs.device, {}});
  if (persist && !dir_.empty()) {
    log_ << observation_to_json(obs).dump() << '\n';
    log_.flush();
    if (!log_) throw Error(Errc::IoError, "failed to append to observations.log");
  }
  observations_.push_back(std::move(obs));
  return observations_.back().id;
}

void ObservationStore::register_location(Location loc) {
  std::unique_lock lock(mutex_);
  register_location_locked(std::move(loc));
}

void ObservationStore::register_device(Device dev) {
  std::unique_lock lock(mutex_);
  register_device_locked(std::move(dev));
}

void ObservationStore::register_user(User user) {
  std::unique_lock lock(mutex_);
  if (users_.emplace(user.id, user).second) {
    write_registry_locked();
  }
}

void ObservationStore::register_location_locked(Location loc) {
  if (locations_.emplace(loc.id, std::move(loc)).second) {
    write_registry_locked();
  }
}

void ObservationStore::register_device_locked(Device dev) {
  if (devices_.emplace(dev.id, std::move(dev)).second) {
    write_registry_locked();
  }
}

void ObservationStore::write_registry_locked() {
  if (dir_.empty()) return;
  std::ofstream out(dir_ / kRegistryFile, std::ios::trunc);
  out << registry_to_json(locations_, devices_, users_).dump(2) << '\n';
  if (!out) throw Error(Errc::IoError, "failed to write registry.json");
}

std::vector<Observation> ObservationStore::query(const ObsFilter& filter) const {
  if (filter.empty()) {
    throw Error(Errc::ConfigInvalid, "filter",
                "query filter must set at least one field");
  }
  std::shared_lock lock(mutex_);
  if (filter.location && !locations_.contains(*filter.location)) {
    throw Error(Errc::UnknownLocation,
                "unregistered location '" + *filter.location + "'");
  }
  if (filter.device && !devices_.contains(*filter.device)) {
    throw Error(Errc::UnknownDevice,
                "unregistered device '" + *filter.device + "'");
  }
  std::vector<Observation> out;
  for (const Observation& obs : observations_) {
    if (filter.time_window && !filter.time_window->contains(obs.obs_time)) continue;
    if (filter.location && obs.location != *filter.location) continue;
    if (filter.device && obs.device != *filter.device) continue;
    out.push_back(obs);
  }
  lock.unlock();
  std::sort(out.begin(), out.end(), [](const Observation& a, const Observation& b) {
    return std::tie(a.location, a.obs_time, a.device, a.transmitter.bssid, a.id) <
           std::tie(b.location, b.obs_time, b.device, b.transmitter.bssid, b.id);
  });
  return out;
}

std::vector<Observation> ObservationStore::all() const {
  std::shared_lock lock(mutex_);
  return observations_;
}

std::size_t ObservationStore::size() const {
  std::shared_lock lock(mutex_);
  return observations_.size();
}

std::map<LocationId, Location> ObservationStore::locations() const {
  std::shared_lock lock(mutex_);
  return locations_;
}

std::map<DeviceId, Device> ObservationStore::devices() const {
  std::shared_lock lock(mutex_);
  return devices_;
}

std::map<UserId, User> ObservationStore::users() const {
  std::shared_lock lock(mutex_);
  return users_;
}

std::set<NetworkId> distinct_transmitters(std::span<const Observation> obs) {
  std::set<NetworkId> out;
  for (const Observation& o : obs) out.insert(o.transmitter);
  return out;
}

std::map<NetworkId, std::size_t> occurrence_counts(
    std::span<const Observation> obs) {
  std::map<NetworkId, std::size_t> out;
  for (const Observation& o : obs) ++out[o.transmitter];
  return out;
}

void write_csv(std::ostream& out, std::span<const Observation> obs) {
  const char delim = ',';
  const auto& cols = csv_columns();
  for (std::size_t i = 0; i < cols.size(); ++i) {
    if (i) out << delim;
    out << cols[i];
  }
  out << '\n';

  char buf[64];
  for (const Observation& o : obs) {
    CivilTime local = utc_to_lisbon(o.obs_time);
    std::snprintf(buf, sizeof(buf), "%04d-%02d-%02d", local.year, local.month,
                  local.day);
    std::string date = buf;
    std::snprintf(buf, sizeof(buf), "%02d:%02d:%02d", local.hour, local.minute,
                  local.second);
    std::string time = buf;

    std::vector<std::string> row(cols.size());
    row[0] = o.device;
    row[1] = date;
    row[2] = time;
    row[3] = o.location;
    if (o.position) {
      row[4] = format_coord(o.position->latitude, 7);
      row[5] = format_coord(o.position->longitude, 7);
      row[6] = format_coord(o.position->altitude, 2);
      row[7] = format_coord(o.position->accuracy, 2);
    }
    row[8] = o.transmitter.ssid;
    row[9] = o.transmitter.bssid;
    row[10] = o.radio.capabilities;
    if (o.radio.frequency_mhz) row[11] = std::to_string(*o.radio.frequency_mhz);
    if (o.radio.level_dbm) row[12] = std::to_string(*o.radio.level_dbm);
    row[13] = std::to_string(o.radio.centerfreq0_mhz);
    row[14] = std::to_string(o.radio.centerfreq1_mhz);
    row[15] = std::to_string(channel_width_code(o.radio.channel_width));

    for (std::size_t i = 0; i < row.size(); ++i) {
      if (i) out << delim;
      out << csv_escape(row[i], delim);
    }
    out << '\n';
  }
}

}  // namespace locproof
