#pragma once

#include <string>
#include <vector>

#include <json.hpp>

#include "semibus/allocation.hpp"
#include "semibus/evaluation.hpp"
#include "semibus/ingest.hpp"
#include "semibus/routing.hpp"

namespace semibus {

using json = nlohmann::json;

// The persisted output of the metrics stage: everything downstream commands
// route against, plus provenance.
struct MetricsArtifact {
  std::string dataset_hash;
  std::string tool_version;
  double link_threshold_minutes = kDefaultLinkThresholdMinutes;
  std::vector<Station> stations;
  std::vector<LatenessRecord> lateness;
  IdleTimeTable idle;
  TripTimeMatrix trip;
  StopProbabilityTable probability;
  std::vector<ShortcutEdge> accepted_shortcuts;
  ValidationReport shortcut_report;
  ValidationReport event_report;
  ValidationReport link_report;
  ValidationReport lateness_report;
};

json to_json(const ValidationReport& r);
json to_json(const Station& s);
json to_json(const ShortcutEdge& e);
json to_json(const MetricsArtifact& m);
MetricsArtifact metrics_from_json(const json& j);

json to_json(const RouteProposal& r);
json to_json(const PickupAggregate& a);
json to_json(const AllocationResult& r);
json to_json(const DryRunReport& r);
json to_json(const SweepReport& r);

}  // namespace semibus
