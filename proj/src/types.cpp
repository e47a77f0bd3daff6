#include "locproof/types.hpp"

#include <cctype>

namespace locproof {

std::string_view errc_name(Errc code) {
  switch (code) {
    case Errc::MalformedBssid:
      return "MalformedBssid";
    case Errc::OutOfRangeField:
      return "OutOfRangeField";
    case Errc::InvalidTimestamp:
      return "InvalidTimestamp";
    case Errc::MissingField:
      return "MissingField";
    case Errc::KindMismatch:
      return "KindMismatch";
    case Errc::MissingColumn:
      return "MissingColumn";
    case Errc::EmptySource:
      return "EmptySource";
    case Errc::UnknownLocation:
      return "UnknownLocation";
    case Errc::UnknownDevice:
      return "UnknownDevice";
    case Errc::EmptyStableSet:
      return "EmptyStableSet";
    case Errc::NonDisjointStableSets:
      return "NonDisjointStableSets";
    case Errc::NoObservations:
      return "NoObservations";
    case Errc::InsufficientWitnesses:
      return "InsufficientWitnesses";
    case Errc::InsufficientDevices:
      return "InsufficientDevices";
    case Errc::ConfigInvalid:
      return "ConfigInvalid";
    case Errc::ParseError:
      return "ParseError";
    case Errc::IoError:
      return "IoError";
  }
  return "UnknownError";
}

Error Error::insufficient_witnesses(int found, int required) {
  Error e(Errc::InsufficientWitnesses,
          "found " + std::to_string(found) + " witnesses, required " +
              std::to_string(required));
  e.found_ = found;
  e.required_ = required;
  return e;
}

Error Error::insufficient_devices(int found, int required) {
  Error e(Errc::InsufficientDevices,
          "found " + std::to_string(found) + " devices, required " +
              std::to_string(required));
  e.found_ = found;
  e.required_ = required;
  return e;
}

std::optional<std::string> normalize_bssid(std::string_view raw) {
  if (raw.size() != 17) return std::nullopt;
  std::string out;
  out.reserve(17);
  for (std::size_t i = 0; i < raw.size(); ++i) {
    char c = raw[i];
    if (i % 3 == 2) {
      if (c != ':') return std::nullopt;
      out.push_back(':');
    } else {
      if (!std::isxdigit(static_cast<unsigned char>(c))) return std::nullopt;
      out.push_back(
          static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    }
  }
  return out;
}

std::string_view to_string(ChannelWidth w) {
  switch (w) {
    case ChannelWidth::Mhz20:
      return "20";
    case ChannelWidth::Mhz40:
      return "40";
    case ChannelWidth::Mhz80:
      return "80";
    case ChannelWidth::Mhz80Plus80:
      return "80+80";
    case ChannelWidth::Mhz160:
      return "160";
  }
  return "20";
}

std::optional<ChannelWidth> channel_width_from_code(int code) {
  switch (code) {
    case 0:
      return ChannelWidth::Mhz20;
    case 1:
      return ChannelWidth::Mhz40;
    case 2:
      return ChannelWidth::Mhz80;
    case 3:
      return ChannelWidth::Mhz80Plus80;
    case 4:
      return ChannelWidth::Mhz160;
    default:
      return std::nullopt;
  }
}

int channel_width_code(ChannelWidth w) {
  switch (w) {
    case ChannelWidth::Mhz20:
      return 0;
    case ChannelWidth::Mhz40:
      return 1;
    case ChannelWidth::Mhz80:
      return 2;
    case ChannelWidth::Mhz80Plus80:
      return 3;
    case ChannelWidth::Mhz160:
      return 4;
  }
  return 0;
}

Observation validate_observation(Observation raw) {
  auto bssid = normalize_bssid(raw.transmitter.bssid);
  if (!bssid) {
    throw Error(Errc::MalformedBssid,
                "bad BSSID '" + raw.transmitter.bssid + "'");
  }
  raw.transmitter.bssid = *bssid;

  if (raw.obs_time < kMinObservationTime) {
    throw Error(Errc::InvalidTimestamp,
                "observation time " + format_utc(raw.obs_time) +
                    " precedes 2000-01-01T00:00:00Z");
  }
  if (raw.radio.frequency_mhz &&
      (*raw.radio.frequency_mhz < 2400 || *raw.radio.frequency_mhz > 6000)) {
    throw Error(Errc::OutOfRangeField, "frequency",
                "frequency " + std::to_string(*raw.radio.frequency_mhz) +
                    " MHz outside [2400, 6000]");
  }
  if (raw.radio.level_dbm &&
      (*raw.radio.level_dbm < -120 || *raw.radio.level_dbm > 0)) {
    throw Error(Errc::OutOfRangeField, "level",
                "level " + std::to_string(*raw.radio.level_dbm) +
                    " dBm outside [-120, 0]");
  }
  if (raw.position) {
    const GeoFix& p = *raw.position;
    if (p.latitude < -90.0 || p.latitude > 90.0) {
      throw Error(Errc::OutOfRangeField, "latitude",
                  "latitude outside [-90, 90]");
    }
    if (p.longitude < -180.0 || p.longitude > 180.0) {
      throw Error(Errc::OutOfRangeField, "longitude",
                  "longitude outside [-180, 180]");
    }
    if (p.accuracy < 0.0) {
      throw Error(Errc::OutOfRangeField, "accuracy", "negative accuracy");
    }
  }
  return raw;
}

}  // namespace locproof
