#pragma once

#include <map>
#include <string>

#include <json.hpp>

#include "locproof/types.hpp"

namespace locproof {

struct StableMap;
struct SceneConfig;
struct Scene;
struct VerifierConfig;
struct IngestReport;

nlohmann::json observation_to_json(const Observation& obs);
Observation observation_from_json(const nlohmann::json& j);

/// Flexible wire form used by POST /observations: Table-3 field names, with
/// either "utc" (ISO-8601, Z) or Europe/Lisbon "date" + "time".
Observation observation_from_wire(const nlohmann::json& j,
                                  const std::optional<DeviceId>& device_hint);

nlohmann::json registry_to_json(const std::map<LocationId, Location>& locs,
                                const std::map<DeviceId, Device>& devs,
                                const std::map<UserId, User>& users);
void registry_from_json(const nlohmann::json& j,
                        std::map<LocationId, Location>& locs,
                        std::map<DeviceId, Device>& devs,
                        std::map<UserId, User>& users);

nlohmann::json ingest_report_to_json(const IngestReport& report);

nlohmann::json stable_map_to_json(const StableMap& map);
StableMap stable_map_from_json(const nlohmann::json& j);

nlohmann::json claim_to_json(const LocationClaim& claim);
LocationClaim claim_from_json(const nlohmann::json& j);

nlohmann::json certificate_to_json(const LocationCertificate& cert);

nlohmann::json scene_config_to_json(const SceneConfig& config);
SceneConfig scene_config_from_json(const nlohmann::json& j);
nlohmann::json scene_truth_to_json(const Scene& scene);

nlohmann::json verifier_config_to_json(const VerifierConfig& config);
VerifierConfig verifier_config_from_json(const nlohmann::json& j);

}  // namespace locproof
