#pragma once

#include <map>
#include <set>
#include <vector>

#include "locproof/store.hpp"
#include "locproof/types.hpp"

namespace locproof {

enum class StableStrategy { DeviceIntersection, TopFraction };
std::string_view to_string(StableStrategy s);
StableStrategy stable_strategy_from_string(std::string_view s);

/// Per-location fingerprint of long-lived networks, together with the epoch
/// it was computed over and the strategy that produced it.
struct StableMap {
  std::map<LocationId, std::set<NetworkId>> stable;
  TimeWindow epoch{};
  StableStrategy strategy = StableStrategy::DeviceIntersection;
  double fraction = 0.0;  // TopFraction only
  /// Networks selected at two or more locations and therefore dropped from
  /// all of them (TopFraction disjointness enforcement).
  std::vector<NetworkId> dropped_overlaps;

  const std::set<NetworkId>* find(const LocationId& loc) const {
    auto it = stable.find(loc);
    return it == stable.end() ? nullptr : &it->second;
  }
};

/// Per-location intersection of the transmitter sets seen by each device
/// within the epoch. Only devices with at least one observation at the
/// location participate; locations without observations are absent. With
/// strict asserts on, an empty per-location intersection raises
/// EmptyStableSet and any cross-location overlap raises
/// NonDisjointStableSets (offending BSSIDs in details()).
StableMap compute_stable_intersection(const ObservationStore& store,
                                      const TimeWindow& epoch,
                                      bool strict_stable_asserts = true);

/// Per-location top fraction of networks ranked by descending occurrence
/// count (ties broken by ascending BSSID). The cut is
/// ceil(fraction * distinct_count), extended through any count tie that
/// straddles it. Networks selected at several locations are dropped from
/// all of them and recorded in dropped_overlaps.
StableMap compute_stable_top_fraction(const ObservationStore& store,
                                      const TimeWindow& epoch,
                                      double fraction);

/// |probe ∩ stable(loc)| / |stable(loc)|; 0 when the fingerprint is empty.
double stable_match_rate(const StableMap& stable, const LocationId& loc,
                         const std::set<NetworkId>& probe);

struct VolatileSet {
  LocationId loc;
  TimeWindow span{};
  std::set<NetworkId> ids;
  std::set<DeviceId> witness_devices;
};

/// Intersection of the witnesses' transmitter sets within the span at the
/// claimed location, minus the location's stable set. Witnesses are devices
/// other than the claimant with at least one observation there; fewer than
/// witness_threshold of them raises InsufficientWitnesses.
VolatileSet compute_volatile_ids(const ObservationStore& store,
                                 const LocationClaim& claim,
                                 const TimeWindow& span, int witness_threshold,
                                 const StableMap& stable);

/// Bottom fraction of one device's networks at a location ranked by
/// ascending occurrence count (ties by ascending BSSID), with stable
/// members removed after the cut.
std::set<NetworkId> compute_volatile_bottom_fraction(
    const ObservationStore& store, const LocationId& loc,
    const TimeWindow& window, const DeviceId& device, double fraction,
    const StableMap& stable);

/// ceil(fraction * n) clamped to [1, n]; exact at representable products.
std::size_t fraction_cut(double fraction, std::size_t n);

}  // namespace locproof
