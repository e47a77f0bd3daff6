#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace locproof {

enum class Errc {
  MalformedBssid,
  OutOfRangeField,
  InvalidTimestamp,
  MissingField,
  KindMismatch,
  MissingColumn,
  EmptySource,
  UnknownLocation,
  UnknownDevice,
  EmptyStableSet,
  NonDisjointStableSets,
  NoObservations,
  InsufficientWitnesses,
  InsufficientDevices,
  ConfigInvalid,
  ParseError,
  IoError,
};

std::string_view errc_name(Errc code);

/// Engine-wide error type. `reason()` yields a stable machine-readable key
/// such as "OutOfRangeField(level)" used in ingest reports and HTTP bodies.
class Error : public std::runtime_error {
 public:
  Error(Errc code, std::string message)
      : std::runtime_error(std::move(message)), code_(code) {}

  Error(Errc code, std::string field, std::string message)
      : std::runtime_error(std::move(message)),
        code_(code),
        field_(std::move(field)) {}

  Errc code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }
  const std::vector<std::string>& details() const noexcept { return details_; }
  int found() const noexcept { return found_; }
  int required() const noexcept { return required_; }

  Error& with_details(std::vector<std::string> details) {
    details_ = std::move(details);
    return *this;
  }

  std::string reason() const {
    std::string r{errc_name(code_)};
    if (!field_.empty()) {
      r += "(" + field_ + ")";
    }
    return r;
  }

  static Error insufficient_witnesses(int found, int required);
  static Error insufficient_devices(int found, int required);

 private:
  Errc code_;
  std::string field_;
  std::vector<std::string> details_;
  int found_ = 0;
  int required_ = 0;
};

}  // namespace locproof
