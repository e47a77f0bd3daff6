#pragma once

#include <optional>
#include <vector>

#include "locproof/netsets.hpp"
#include "locproof/store.hpp"
#include "locproof/types.hpp"

namespace locproof {

/// Minimum stable-network overlap required to place a prover at a location:
/// either an absolute count or a fraction of the location's stable set.
class LocationThreshold {
 public:
  static LocationThreshold absolute(int count) {
    LocationThreshold t;
    t.absolute_ = count;
    return t;
  }
  static LocationThreshold fraction(double f) {
    LocationThreshold t;
    t.fraction_ = f;
    return t;
  }

  bool is_absolute() const noexcept { return absolute_.has_value(); }
  int absolute_count() const { return absolute_.value(); }
  double fraction_value() const { return fraction_; }

  /// Resolved minimum overlap for a stable set of the given size; never
  /// below 1, so an empty fingerprint can never qualify.
  int resolve(std::size_t stable_size) const;

  void validate() const;

 private:
  std::optional<int> absolute_;
  double fraction_ = 0.5;
};

struct VerifierConfig {
  /// Candidate half-widths of the certified span, scanned largest first.
  std::vector<Duration> deltas = default_deltas();
  LocationThreshold location_threshold = LocationThreshold::fraction(0.5);
  int witness_threshold = 2;
  Duration epoch{7 * 24 * 3600};
  Duration period{24 * 3600};

  static std::vector<Duration> default_deltas();

  /// Throws ConfigInvalid unless deltas are strictly descending and
  /// non-negative, every delta fits inside the period, epoch > period, and
  /// thresholds are well-formed.
  void validate() const;

  /// Stable digest of the effective configuration, embedded in issued
  /// certificates.
  std::string digest() const;
};

struct LocationEstimate {
  std::optional<LocationId> location;
  /// Every location meeting the threshold, in ascending id order.
  std::vector<LocationId> qualifying;
};

/// Scans locations in ascending id order and returns the first whose stable
/// set overlaps prover_obs by at least the resolved threshold.
LocationEstimate estimate_location(const std::set<NetworkId>& prover_obs,
                                   const StableMap& stable,
                                   const LocationThreshold& threshold);

struct TimeBoundResult {
  bool proof = false;
  Duration proof_delta{0};
  /// Witness count backing the recorded proof_delta (0 when none).
  int witness_count = 0;
  /// Deltas whose proof set was non-empty, in scan order.
  std::vector<Duration> succeeded_deltas;
  /// The 0-delta span produced a non-empty proof set; it cannot prove, but
  /// is worth surfacing.
  bool zero_delta_nonempty = false;
};

/// Walks config.deltas from largest to smallest; at each delta the span is
/// claim.time ± delta and the proof set is volatile ∩ claim.evidence. An
/// empty proof set (or missing witnesses) stops the scan; otherwise the
/// delta is recorded. proof is true iff the recorded delta is positive.
TimeBoundResult time_bound_proof(const ObservationStore& store,
                                 const LocationClaim& claim,
                                 const VerifierConfig& config,
                                 const StableMap& stable);

/// Runs location estimation and, when the claim's location is confirmed,
/// the time-bound proof; packages the outcome as a certificate. A mismatch
/// yields proof=false with reason LOCATION_MISMATCH.
LocationCertificate issue_certificate(const ObservationStore& store,
                                      const LocationClaim& claim,
                                      const VerifierConfig& config,
                                      const StableMap& stable,
                                      std::optional<Timestamp> issued_at = {});

/// True when the fixed-grid period containing `claim_time` (periods are
/// back-to-back intervals of the given length anchored at the Unix epoch)
/// has ended by `now`.
bool period_closed(Timestamp claim_time, Duration period, Timestamp now);

}  // namespace locproof
