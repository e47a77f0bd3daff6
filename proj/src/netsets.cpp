#include "locproof/netsets.hpp"

#include <algorithm>
#include <cmath>
#include <utility>

namespace locproof {

namespace {

std::set<NetworkId> intersect_family(
    const std::map<DeviceId, std::set<NetworkId>>& family) {
  std::set<NetworkId> out;
  bool first = true;
  for (const auto& [dev, ids] : family) {
    if (first) {
      out = ids;
      first = false;
      continue;
    }
    std::set<NetworkId> next;
    std::set_intersection(out.begin(), out.end(), ids.begin(), ids.end(),
                          std::inserter(next, next.begin()));
    out = std::move(next);
  }
  return out;
}

void check_valid_fraction(double fraction) {
  if (!(fraction > 0.0) || fraction > 1.0) {
    throw Error(Errc::ConfigInvalid, "fraction",
                "fraction must be in (0, 1], got " + std::to_string(fraction));
  }
}

void enforce_disjoint_by_dropping(StableMap& map) {
  std::map<NetworkId, int> seen_at;
  for (const auto& [loc, ids] : map.stable) {
    for (const NetworkId& id : ids) ++seen_at[id];
  }
  for (const auto& [id, count] : seen_at) {
    if (count < 2) continue;
    map.dropped_overlaps.push_back(id);
    for (auto& [loc, ids] : map.stable) ids.erase(id);
  }
}

}  // namespace

std::string_view to_string(StableStrategy s) {
  return s == StableStrategy::DeviceIntersection ? "intersection"
                                                 : "top-fraction";
}

StableStrategy stable_strategy_from_string(std::string_view s) {
  if (s == "intersection") return StableStrategy::DeviceIntersection;
  if (s == "top-fraction") return StableStrategy::TopFraction;
  throw Error(Errc::ParseError, "strategy",
              "unknown stable strategy '" + std::string(s) + "'");
}

std::size_t fraction_cut(double fraction, std::size_t n) {
  if (n == 0) return 0;
  double raw = fraction * static_cast<double>(n);
  auto k = static_cast<std::size_t>(std::ceil(raw - 1e-9));
  return std::clamp<std::size_t>(k, 1, n);
}

StableMap compute_stable_intersection(const ObservationStore& store,
                                      const TimeWindow& epoch,
                                      bool strict_stable_asserts) {
  auto obs = store.query(ObsFilter{.time_window = epoch});
  if (obs.empty()) {
    throw Error(Errc::NoObservations, "no observations inside the epoch");
  }

  std::map<LocationId, std::map<DeviceId, std::set<NetworkId>>> per_location;
  for (const Observation& o : obs) {
    per_location[o.location][o.device].insert(o.transmitter);
  }

  StableMap out;
  out.epoch = epoch;
  out.strategy = StableStrategy::DeviceIntersection;
  for (const auto& [loc, family] : per_location) {
    std::set<NetworkId> ids = intersect_family(family);
    if (ids.empty() && strict_stable_asserts) {
      throw Error(Errc::EmptyStableSet, loc,
                  "device intersection at '" + loc + "' is empty");
    }
    out.stable[loc] = std::move(ids);
  }

  if (strict_stable_asserts) {
    std::map<NetworkId, int> seen_at;
    for (const auto& [loc, ids] : out.stable) {
      for (const NetworkId& id : ids) ++seen_at[id];
    }
    std::vector<std::string> offenders;
    for (const auto& [id, count] : seen_at) {
      if (count >= 2) offenders.push_back(id.bssid);
    }
    if (!offenders.empty()) {
      throw Error(Errc::NonDisjointStableSets,
                  std::to_string(offenders.size()) +
                      " network(s) stable at multiple locations")
          .with_details(std::move(offenders));
    }
  }
  return out;
}

StableMap compute_stable_top_fraction(const ObservationStore& store,
                                      const TimeWindow& epoch,
                                      double fraction) {
  check_valid_fraction(fraction);
  auto obs = store.query(ObsFilter{.time_window = epoch});
  if (obs.empty()) {
    throw Error(Errc::NoObservations, "no observations inside the epoch");
  }

  std::map<LocationId, std::vector<Observation>> per_location;
  for (Observation& o : obs) {
    per_location[o.location].push_back(std::move(o));
  }

  StableMap out;
  out.epoch = epoch;
  out.strategy = StableStrategy::TopFraction;
  out.fraction = fraction;
  for (const auto& [loc, loc_obs] : per_location) {
    auto counts = occurrence_counts(loc_obs);
    std::vector<std::pair<NetworkId, std::size_t>> ranked(counts.begin(),
                                                          counts.end());
    std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
      if (a.second != b.second) return a.second > b.second;
      return a.first.bssid < b.first.bssid;
    });
    std::size_t cut = fraction_cut(fraction, ranked.size());
    while (cut < ranked.size() && ranked[cut].second == ranked[cut - 1].second) {
      ++cut;
    }
    std::set<NetworkId>& ids = out.stable[loc];
    for (std::size_t i = 0; i < cut; ++i) ids.insert(ranked[i].first);
  }

  enforce_disjoint_by_dropping(out);
  return out;
}

double stable_match_rate(const StableMap& stable, const LocationId& loc,
                         const std::set<NetworkId>& probe) {
  const std::set<NetworkId>* ids = stable.find(loc);
  if (!ids) {
    throw Error(Errc::UnknownLocation,
                "location '" + loc + "' has no stable set");
  }
  if (ids->empty()) return 0.0;
  std::size_t hit = 0;
  for (const NetworkId& id : *ids) {
    if (probe.contains(id)) ++hit;
  }
  return static_cast<double>(hit) / static_cast<double>(ids->size());
}

VolatileSet compute_volatile_ids(const ObservationStore& store,
                                 const LocationClaim& claim,
                                 const TimeWindow& span, int witness_threshold,
                                 const StableMap& stable) {
  if (span.kind != WindowKind::Span) {
    throw Error(Errc::KindMismatch, "expected a SPAN window");
  }
  if (witness_threshold < 1) {
    throw Error(Errc::ConfigInvalid, "witness_threshold",
                "witness threshold must be >= 1");
  }

  auto span_obs =
      store.query(ObsFilter{.time_window = span, .location = claim.loc});

  std::map<DeviceId, std::set<NetworkId>> witness_obs;
  for (const Observation& o : span_obs) {
    if (o.device == claim.claimant) continue;
    witness_obs[o.device].insert(o.transmitter);
  }
  if (std::cmp_less(witness_obs.size(), witness_threshold)) {
    throw Error::insufficient_witnesses(static_cast<int>(witness_obs.size()),
                                        witness_threshold);
  }

  VolatileSet out;
  out.loc = claim.loc;
  out.span = span;
  out.ids = intersect_family(witness_obs);
  if (const std::set<NetworkId>* ids = stable.find(claim.loc)) {
    for (const NetworkId& id : *ids) out.ids.erase(id);
  }
  for (const auto& [dev, ids] : witness_obs) out.witness_devices.insert(dev);
  return out;
}

std::set<NetworkId> compute_volatile_bottom_fraction(
    const ObservationStore& store, const LocationId& loc,
    const TimeWindow& window, const DeviceId& device, double fraction,
    const StableMap& stable) {
  check_valid_fraction(fraction);
  auto obs = store.query(
      ObsFilter{.time_window = window, .location = loc, .device = device});
  if (obs.empty()) {
    throw Error(Errc::NoObservations,
                "device '" + device + "' has no observations at '" + loc +
                    "' in the window");
  }

  auto counts = occurrence_counts(obs);
  std::vector<std::pair<NetworkId, std::size_t>> ranked(counts.begin(),
                                                        counts.end());
  std::sort(ranked.begin(), ranked.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second < b.second;
    return a.first.bssid < b.first.bssid;
  });

  std::size_t cut = fraction_cut(fraction, ranked.size());
  std::set<NetworkId> out;
  for (std::size_t i = 0; i < cut; ++i) out.insert(ranked[i].first);
  if (const std::set<NetworkId>* ids = stable.find(loc)) {
    for (const NetworkId& id : *ids) out.erase(id);
  }
  return out;
}

}  // namespace locproof
